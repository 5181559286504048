#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "robstaff/lp.hpp"
#include "robstaff/model.hpp"

namespace robstaff {

// x[pool][day - 1] holds a variable index or -1 when the hire is fixed at zero
using VarGrid = std::vector<std::vector<int>>;

struct SingleSwitchProgram {
    LpModel model;
    int first_day = 1;
    int horizon = 0;
    VarGrid x;
    int gamma = -1;
};

SingleSwitchProgram build_lp_single_switch(const Instance& inst);
// state.index is the current day t; state.hi already includes today's prediction
SingleSwitchProgram build_lp_resolving(const Instance& inst, const EpochState& state, int day);

// the constant right-hand side of the day-k overstaffing row of the base program
double overstaffing_bound(const Instance& inst, int k);

// Which optimum becomes the canonical profile when the LP has several.
// kVertex keeps the simplex vertex; the other two fix the optimal cost and
// then push daily totals as early or as late as the optimum allows.
enum class CanonicalRule { kVertex, kEarliest, kLatest };

struct CanonicalProfile {
    double gamma = 0.0;
    Matrix hires;  // [pool][day - 1], zero before first_day
};

Matrix extract_canonical(const LpSolution& sol, const SingleSwitchProgram& prog);
CanonicalProfile solve_canonical(const SingleSwitchProgram& prog, CanonicalRule rule = CanonicalRule::kVertex);

struct MultiStationProgram {
    LpModel model;
    std::vector<VarGrid> x;  // [station][pool][day - 1]
    std::vector<int> gamma;
    int epigraph = -1;
};

MultiStationProgram build_lp_multi_station(const MultiStationInstance& msi);
std::vector<Matrix> extract_canonical(const LpSolution& sol, const MultiStationProgram& prog);

struct JointProgram {
    LpModel model;
    VarGrid x;
    std::vector<int> lambda;  // [k - 1]
    int theta = -1;
    int epigraph = -1;
};

JointProgram build_lp_joint_cost(const ReleaseInstance& ri);
Matrix extract_canonical(const LpSolution& sol, const JointProgram& prog);

// The release subprogram on the remaining days, relabelled 1..horizon.
struct ReleaseSubproblem {
    int n_pools = 0;
    int horizon = 0;
    int day_offset = 0;  // absolute day = local day + day_offset
    int epoch_offset = 0;
    std::vector<double> supply;
    std::vector<double> pre_hires;
    Matrix rho;
    double lo0 = 0.0;
    double hi0 = 0.0;
    std::vector<double> delta;  // [0..horizon], running minimum with delta[0] = hi0 - lo0
    Matrix wages;
    std::vector<int> breaks;
    std::vector<ReleaseFee> fees;
    std::optional<double> budget;
    double under_cost = 1.0;
    double over_cost = 1.0;

    int n_epochs() const { return static_cast<int>(breaks.size()); }
    int epoch_start(int l) const { return l == 0 ? 0 : breaks[l - 1]; }
};

// state.index is the 1-based epoch about to start
ReleaseSubproblem release_subproblem(const ReleaseInstance& ri, const EpochState& state);
EpochState release_fresh_state(const ReleaseInstance& ri);

// intervals of the multi-switch sequence for configuration J on a subproblem
std::vector<PredictionInterval> configuration_intervals(const ReleaseSubproblem& sub, const std::vector<int>& J);
std::vector<std::vector<int>> enumerate_configurations(const ReleaseSubproblem& sub, std::size_t cap);

struct ReleaseProgram {
    LpModel model;
    ReleaseSubproblem sub;
    std::vector<std::vector<int>> configs;
    // keys: (pool, local day, prefix J_1..J_{l-1}, min(J_l, day))
    std::map<std::vector<int>, int> x_vars;
    // keys: (pool, epoch, prefix J_1..J_l)
    std::map<std::vector<int>, int> y_vars;
    std::vector<int> lambda;
    std::vector<int> theta;
    int epigraph = -1;

    int x_var(int pool, int day, const std::vector<int>& J) const;
    int y_var(int pool, int epoch, const std::vector<int>& J) const;  // -1 when releases are forbidden
};

inline constexpr std::size_t kDefaultConfigurationCap = 100000;

ReleaseProgram build_lp_release(const ReleaseInstance& ri, const EpochState& state,
                                std::size_t config_cap = kDefaultConfigurationCap);

struct ReleaseCanonical {
    Matrix hires;                 // [pool][local day - 1] over the first epoch
    std::vector<std::vector<double>> releases;  // [t - t_0][pool] for t in the closed first epoch
};

ReleaseCanonical extract_canonical(const LpSolution& sol, const ReleaseProgram& prog);

}  // namespace robstaff
