#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "vpm/cylinder/cylinder.hpp"

namespace vpm {

/// One acceptance band: pass when lo <= value <= hi. Bands that cannot be
/// evaluated (no data in range) carry applicable = false and never fail.
struct BandCheck {
    std::string name;
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool applicable = true;
    bool pass = false;
};

BandCheck band(std::string name, double value, double lo, double hi);
BandCheck not_applicable(std::string name);

struct ReproOutput {
    std::string id;
    std::vector<BandCheck> checks;
    std::vector<std::pair<std::string, std::string>> files;  // file name, content
    double wall_seconds = 0.0;  // not written to any file

    bool passed() const;
};

struct ReproOptions {
    int jobs = 1;
    ExecPolicy exec = ExecPolicy::parallel;
    std::function<void(const std::string&)> log;
};

/// table1, fig4, fig5, fig6-desk, cylinder-desk
const std::vector<std::string>& repro_ids();
ReproOutput run_repro(const std::string& id, const ReproOptions& opts = {});

ReproOutput repro_table1(const ReproOptions& opts);
ReproOutput repro_fig4(const ReproOptions& opts);
ReproOutput repro_fig5(const ReproOptions& opts);
ReproOutput repro_fig6_desk(const ReproOptions& opts);
ReproOutput repro_cylinder_desk(const ReproOptions& opts);

/// CSV writers shared with the CLI.
std::string forces_csv(const ForceTorqueSeries& s, const std::string& header);

}  // namespace vpm
