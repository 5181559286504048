#pragma once

#include <algorithm>
#include <random>
#include <string>

#include "robstaff/model.hpp"

#ifndef ROBSTAFF_DATA_DIR
#define ROBSTAFF_DATA_DIR "data"
#endif

namespace robstaff::testing {

inline std::string data_path(const std::string& name) { return std::string(ROBSTAFF_DATA_DIR) + "/" + name; }

struct RandomShape {
    int max_pools = 3;
    int max_horizon = 6;
    bool allow_zero_rho = true;
};

// valid instance with eps = 0, nonincreasing availability and error bounds
inline Instance random_instance(std::mt19937_64& rng, const RandomShape& shape = {}) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Instance inst;
    inst.n_pools = 1 + static_cast<int>(rng() % shape.max_pools);
    inst.horizon = 1 + static_cast<int>(rng() % shape.max_horizon);
    for (int i = 0; i < inst.n_pools; ++i) {
        inst.pool_sizes.push_back(0.1 + 1.9 * u(rng));
        std::vector<double> rho;
        double r = 0.3 + 0.7 * u(rng);
        for (int t = 1; t <= inst.horizon; ++t) {
            if (shape.allow_zero_rho && t > 1 && u(rng) < 0.1) r = 0.0;
            rho.push_back(r);
            r *= 0.5 + 0.5 * u(rng);
        }
        inst.availability.push_back(rho);
    }
    inst.lo0 = u(rng);
    inst.hi0 = inst.lo0 + 0.2 + 1.8 * u(rng);
    double d = inst.hi0 - inst.lo0;
    for (int t = 1; t <= inst.horizon; ++t) {
        d *= 0.3 + 0.7 * u(rng);
        inst.error_bounds.push_back(d);
    }
    inst.inconsistency.assign(inst.horizon, 0.0);
    inst.under_cost = 0.5 + 2.5 * u(rng);
    inst.over_cost = 0.5 + 2.5 * u(rng);
    return validate_instance(inst);
}

inline Instance random_single_pool(std::mt19937_64& rng, int max_horizon) {
    return random_instance(rng, {1, max_horizon, false});
}

}  // namespace robstaff::testing
