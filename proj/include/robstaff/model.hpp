#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace robstaff {

// pool-major storage: m[pool][day - 1]
using Matrix = std::vector<std::vector<double>>;

Matrix zeros(int rows, int cols);

struct Instance {
    int n_pools = 0;
    int horizon = 0;
    std::vector<double> pool_sizes;
    Matrix availability;
    double lo0 = 0.0;
    double hi0 = 0.0;
    std::vector<double> error_bounds;
    std::vector<double> inconsistency;
    double under_cost = 1.0;
    double over_cost = 1.0;

    // days are 1-based; day 0 refers to the initial range
    double rho(int pool, int day) const { return availability[pool][day - 1]; }
    double delta(int day) const { return day == 0 ? hi0 - lo0 : error_bounds[day - 1]; }
    double eps(int day) const { return day == 0 || inconsistency.empty() ? 0.0 : inconsistency[day - 1]; }
};

struct PredictionInterval {
    double lo = 0.0;
    double hi = 0.0;
};

class PredictionSequence {
public:
    PredictionSequence() = default;
    PredictionSequence(std::vector<PredictionInterval> intervals, double lo0, double hi0,
                       std::span<const double> eps = {});

    int horizon() const { return static_cast<int>(intervals_.size()); }
    const std::vector<PredictionInterval>& intervals() const { return intervals_; }
    const PredictionInterval& at(int day) const { return intervals_[day - 1]; }

    // running bounds, index 0 is the initial range
    double effective_lo(int day) const { return lo_hat_[day]; }
    double effective_hi(int day) const { return hi_hat_[day]; }

    // restriction to days 1..t, used by online replays
    PredictionSequence prefix(int t) const;

private:
    std::vector<PredictionInterval> intervals_;
    std::vector<double> eps_;
    std::vector<double> lo_hat_;
    std::vector<double> hi_hat_;
};

PredictionSequence make_sequence(const Instance& inst, std::vector<PredictionInterval> intervals);

struct StaffingPlan {
    Matrix hires;
    Matrix releases;

    static StaffingPlan empty(int n_pools, int horizon);
    int n_pools() const { return static_cast<int>(hires.size()); }
    int horizon() const { return hires.empty() ? 0 : static_cast<int>(hires.front().size()); }
    double total_hires() const;
    double net_total() const;
};

struct Station {
    double lo0 = 0.0;
    double hi0 = 0.0;
    std::vector<double> error_bounds;
    double under_cost = 1.0;
    double over_cost = 1.0;

    double delta(int day) const { return day == 0 ? hi0 - lo0 : error_bounds[day - 1]; }
};

enum class StationObjective { kMax, kSum };

struct MultiStationInstance {
    Instance base;
    std::vector<Station> stations;
    StationObjective objective = StationObjective::kMax;

    int n_stations() const { return static_cast<int>(stations.size()); }
    // the single-station view used by the per-station emulators
    Instance station_instance(int j) const;
};

// an infinite fee forbids releases in the epoch; no float infinity is stored
struct ReleaseFee {
    bool forbidden = true;
    double value = 0.0;

    static ReleaseFee infinite() { return {}; }
    static ReleaseFee finite(double q) { return {false, q}; }
};

struct ReleaseInstance {
    Instance base;
    std::optional<double> budget;  // nullopt means unlimited
    Matrix wages;
    std::vector<int> epoch_breaks;  // t_1 < ... < t_L = T
    std::vector<ReleaseFee> release_fees;
    std::vector<double> pre_hires;

    int n_epochs() const { return static_cast<int>(epoch_breaks.size()); }
    int epoch_start(int l) const { return l == 0 ? 0 : epoch_breaks[l - 1]; }  // t_{l-1}, l is 0-based
    int epoch_of_day(int day) const;                                            // 0-based epoch
    double wage(int pool, int day) const { return wages.empty() ? 0.0 : wages[pool][day - 1]; }
};

// one epoch, infinite fee, no wages and no budget: release mode collapsed onto the base problem
ReleaseInstance plain_release_instance(const Instance& inst);

struct EpochState {
    int index = 0;  // next day (resolving) or next epoch (release), 1-based
    std::vector<double> cum_hires;
    std::vector<double> remaining_supply;
    std::optional<double> remaining_budget;
    double lo = 0.0;
    double hi = 0.0;
    Matrix availability;  // rescaled, indexed by absolute day like Instance
};

EpochState fresh_state(const Instance& inst);

// validation returns a normalized copy (empty inconsistency becomes zeros) or throws Error
Instance validate_instance(const Instance& inst);
MultiStationInstance validate_instance(const MultiStationInstance& msi);
ReleaseInstance validate_instance(const ReleaseInstance& ri);

// error bounds clamped to a running minimum starting from R0 - L0
std::vector<double> monotone_error_bounds(const Instance& inst);

double staffing_cost(double under_cost, double over_cost, double staffed, double demand);
double staffing_cost(const Instance& inst, const StaffingPlan& plan, double demand);
double multi_station_cost(const MultiStationInstance& msi, std::span<const StaffingPlan> plans,
                          std::span<const double> demands);
double joint_cost(const ReleaseInstance& ri, const StaffingPlan& plan, double demand);
double hiring_spend(const ReleaseInstance& ri, const StaffingPlan& plan);

struct FeasibilityReport {
    bool ok = true;
    std::vector<std::string> violations;
};

inline constexpr double kFeasibilityTol = 1e-9;

FeasibilityReport check_feasibility(const Instance& inst, const StaffingPlan& plan);
FeasibilityReport check_feasibility(const ReleaseInstance& ri, const StaffingPlan& plan);
// plans are per station; pools are shared across stations
FeasibilityReport check_feasibility(const MultiStationInstance& msi, std::span<const StaffingPlan> plans);

}  // namespace robstaff
