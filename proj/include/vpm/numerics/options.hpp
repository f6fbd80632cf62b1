#pragma once

#include "vpm/error.hpp"

namespace vpm {

struct SolveOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_iter = 50;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ConfigError("tolerances must be positive");
        if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
    }
};

}  // namespace vpm
