#include "vpm/cli/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vpm/cli/config.hpp"
#include "vpm/error.hpp"

namespace vpm {

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open '" + tmp + "' for writing");
        os << content;
        os.flush();
        if (!os) throw Error("write to '" + tmp + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot move output into '" + path + "'");
    }
}

std::string comment_header(const std::string& tool, const std::string& canonical_config) {
    std::string out = "# vpm " + std::string(kVersion) + " " + tool + "\n";
    std::istringstream is(canonical_config);
    for (std::string line; std::getline(is, line);) out += "# " + line + "\n";
    return out;
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw ConfigError("csv has no column '" + name + "'");
}

std::vector<double> CsvTable::numbers(std::size_t col) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (col >= rows[i].size()) throw ConfigError("csv row " + std::to_string(i + 1) + " is short");
        out.push_back(parse_double(rows[i][col]));
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream is(text);
    bool header = true;
    for (std::string line; std::getline(is, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        if (header) {
            t.columns = std::move(cells);
            header = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    if (t.columns.empty()) throw ConfigError("csv has no header row");
    return t;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

}  // namespace vpm
