#pragma once

#include <memory>
#include <string>
#include <vector>

#include "robstaff/model.hpp"

namespace robstaff {

struct DayDecision {
    std::vector<double> hires;
    std::vector<double> releases;  // empty outside release mode
};

// What the Bayesian world reveals on a day besides the interval.
struct DemandSignal {
    int horizon = 0;
    std::vector<int> partials;                  // realized partial demands of days 1..t
    std::vector<std::vector<int>> trajectories;  // trajectories[tau - 1][k - 1], meaningful for k > tau
    std::vector<double> priors;                 // true per-day priors; read only by the full-information benchmark
};

struct Observation {
    int day = 0;
    PredictionInterval interval;
    const DemandSignal* signal = nullptr;
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string name() const = 0;
    virtual void reset() = 0;
    virtual DayDecision step(const Observation& obs) = 0;
    virtual std::unique_ptr<Policy> clone() const = 0;
};

// resets the policy and plays the whole sequence
StaffingPlan run_policy(Policy& policy, int n_pools, const PredictionSequence& seq);

}  // namespace robstaff
