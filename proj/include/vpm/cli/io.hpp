#pragma once

#include <string>
#include <vector>

namespace vpm {

/// Writes to `path.tmp` and renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// `# key = value` lines for a canonical config, preceded by the version line.
std::string comment_header(const std::string& tool, const std::string& canonical_config);

/// Column-named table; '#' lines and blank lines are skipped, the first
/// remaining line holds the column names.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    std::vector<double> numbers(std::size_t col) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace vpm
