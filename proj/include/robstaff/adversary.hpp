#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "robstaff/model.hpp"
#include "robstaff/policy.hpp"

namespace robstaff {

PredictionSequence single_switch_sequence(const Instance& inst, int k);
PredictionSequence worst_case_sequence(const Instance& inst);
// J holds one switch day per epoch, J[l] in [t_{l-1}, t_l]
PredictionSequence configuration_sequence(const ReleaseInstance& ri, const std::vector<int>& J);
PredictionSequence random_nested_sequence(const Instance& inst, std::uint64_t seed);

// worst demand for a finished plan: the cost is convex in d, so an endpoint of [L_hat_T, R_hat_T] attains it
struct DemandCost {
    double cost = 0.0;
    double demand = 0.0;
};
DemandCost worst_demand(const Instance& inst, const StaffingPlan& plan, const PredictionSequence& seq);

struct WorstCase {
    double cost = 0.0;
    std::vector<PredictionInterval> sequence;
    double demand = 0.0;
    std::size_t leaves = 0;
};

// cost of a finished plan against a demand
using LeafCost = std::function<double(const StaffingPlan&, double)>;

inline constexpr std::size_t kDefaultNodeCap = 20'000'000;

struct GridOptions {
    double grid_step = 0.25;
    std::size_t node_cap = kDefaultNodeCap;
    int workers = 1;
};

// exhaustive search over nested grid sequences (epsilon = 0) and grid demands
WorstCase brute_force_worst_case(const Instance& inst, const Policy& policy, const GridOptions& opts);
WorstCase brute_force_worst_case(const Instance& inst, const Policy& policy, const GridOptions& opts,
                                 const LeafCost& cost);

// worst cost over the single-switch family with endpoint demands
WorstCase single_switch_worst_case(const Instance& inst, Policy& policy);
// worst staffing cost over all configuration sequences of a release instance
WorstCase configuration_worst_case(const ReleaseInstance& ri, Policy& policy);

// Stations are played independently, so the aggregate worst case combines
// per-station worst cases; returns per-station results and the aggregate.
struct MultiWorstCase {
    double aggregate = 0.0;
    std::vector<WorstCase> stations;
};
MultiWorstCase brute_force_multi_station(const MultiStationInstance& msi, const std::vector<const Policy*>& stations,
                                         const GridOptions& opts);

}  // namespace robstaff
