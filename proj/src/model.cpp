#include "robstaff/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "robstaff/error.hpp"

namespace robstaff {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidInput: return "InvalidInput";
        case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
        case ErrorCode::kNonMonotoneAvailability: return "NonMonotoneAvailability";
        case ErrorCode::kNegativeParameter: return "NegativeParameter";
        case ErrorCode::kEmptyHorizon: return "EmptyHorizon";
        case ErrorCode::kInfeasible: return "Infeasible";
        case ErrorCode::kUnbounded: return "Unbounded";
        case ErrorCode::kNumericFailure: return "NumericFailure";
        case ErrorCode::kInfeasibleState: return "InfeasibleState";
        case ErrorCode::kConfigurationExplosion: return "ConfigurationExplosion";
        case ErrorCode::kSplitInfeasible: return "SplitInfeasible";
        case ErrorCode::kMultiPoolUnsupported: return "MultiPoolUnsupported";
        case ErrorCode::kParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorCode::kUnsupportedBase: return "UnsupportedBase";
        case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
        case ErrorCode::kInsufficientDraws: return "InsufficientDraws";
        case ErrorCode::kStateExplosion: return "StateExplosion";
    }
    return "Unknown";
}

bool Error::is_input_error() const noexcept {
    switch (code_) {
        case ErrorCode::kInfeasible:
        case ErrorCode::kUnbounded:
        case ErrorCode::kNumericFailure:
        case ErrorCode::kSplitInfeasible:
            return false;
        default:
            return true;
    }
}

Matrix zeros(int rows, int cols) { return Matrix(rows, std::vector<double>(cols, 0.0)); }

PredictionSequence::PredictionSequence(std::vector<PredictionInterval> intervals, double lo0, double hi0,
                                       std::span<const double> eps)
    : intervals_(std::move(intervals)), eps_(intervals_.size(), 0.0) {
    for (size_t t = 0; t < eps.size() && t < eps_.size(); ++t) eps_[t] = eps[t];
    const size_t T = intervals_.size();
    lo_hat_.assign(T + 1, lo0);
    hi_hat_.assign(T + 1, hi0);
    for (size_t t = 1; t <= T; ++t) {
        const auto& p = intervals_[t - 1];
        lo_hat_[t] = std::max(lo_hat_[t - 1], p.lo - eps_[t - 1]);
        hi_hat_[t] = std::min(hi_hat_[t - 1], p.hi + eps_[t - 1]);
    }
}

PredictionSequence PredictionSequence::prefix(int t) const {
    std::vector<PredictionInterval> head(intervals_.begin(), intervals_.begin() + t);
    return PredictionSequence(std::move(head), lo_hat_[0], hi_hat_[0], std::span(eps_).first(t));
}

PredictionSequence make_sequence(const Instance& inst, std::vector<PredictionInterval> intervals) {
    return PredictionSequence(std::move(intervals), inst.lo0, inst.hi0, inst.inconsistency);
}

StaffingPlan StaffingPlan::empty(int n_pools, int horizon) {
    return {zeros(n_pools, horizon), zeros(n_pools, horizon)};
}

double StaffingPlan::total_hires() const {
    double total = 0.0;
    for (const auto& row : hires)
        for (double x : row) total += x;
    return total;
}

double StaffingPlan::net_total() const {
    double total = total_hires();
    for (const auto& row : releases)
        for (double y : row) total -= y;
    return total;
}

Instance MultiStationInstance::station_instance(int j) const {
    Instance inst = base;
    const Station& st = stations[j];
    inst.lo0 = st.lo0;
    inst.hi0 = st.hi0;
    inst.error_bounds = st.error_bounds;
    inst.inconsistency.assign(inst.horizon, 0.0);
    inst.under_cost = st.under_cost;
    inst.over_cost = st.over_cost;
    return inst;
}

int ReleaseInstance::epoch_of_day(int day) const {
    for (int l = 0; l < n_epochs(); ++l)
        if (day <= epoch_breaks[l]) return l;
    return n_epochs() - 1;
}

ReleaseInstance plain_release_instance(const Instance& inst) {
    ReleaseInstance ri;
    ri.base = inst;
    ri.wages = zeros(inst.n_pools, inst.horizon);
    ri.epoch_breaks = {inst.horizon};
    ri.release_fees = {ReleaseFee::infinite()};
    ri.pre_hires.assign(inst.n_pools, 0.0);
    return ri;
}

EpochState fresh_state(const Instance& inst) {
    EpochState s;
    s.index = 1;
    s.cum_hires.assign(inst.n_pools, 0.0);
    s.remaining_supply = inst.pool_sizes;
    s.lo = inst.lo0;
    s.hi = inst.hi0;
    s.availability = inst.availability;
    return s;
}

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

void require_finite_nonneg(double v, const std::string& what) {
    if (!std::isfinite(v)) fail(ErrorCode::kInvalidInput, what + " is not finite");
    if (v < 0.0) fail(ErrorCode::kNegativeParameter, what + " is negative");
}

void require_size(size_t got, size_t want, const std::string& what) {
    if (got != want) {
        std::ostringstream os;
        os << what << " has " << got << " entries, expected " << want;
        fail(ErrorCode::kDimensionMismatch, os.str());
    }
}

void validate_pools(const Instance& inst) {
    if (inst.horizon < 1) fail(ErrorCode::kEmptyHorizon, "horizon must be at least 1");
    if (inst.n_pools < 1) fail(ErrorCode::kInvalidInput, "n_pools must be at least 1");
    require_size(inst.pool_sizes.size(), inst.n_pools, "pool_sizes");
    require_size(inst.availability.size(), inst.n_pools, "availability");
    for (int i = 0; i < inst.n_pools; ++i) {
        require_finite_nonneg(inst.pool_sizes[i], "pool_sizes[" + std::to_string(i) + "]");
        const auto& row = inst.availability[i];
        require_size(row.size(), inst.horizon, "availability[" + std::to_string(i) + "]");
        for (int t = 0; t < inst.horizon; ++t) {
            require_finite_nonneg(row[t], "availability");
            if (row[t] > 1.0) fail(ErrorCode::kParameterOutOfRange, "availability above 1");
            if (t > 0 && row[t] > row[t - 1])
                fail(ErrorCode::kNonMonotoneAvailability,
                     "availability of pool " + std::to_string(i) + " increases on day " + std::to_string(t + 1));
        }
    }
}

void validate_range(double lo0, double hi0, const std::vector<double>& deltas, int horizon, const std::string& who) {
    if (!std::isfinite(lo0) || !std::isfinite(hi0)) fail(ErrorCode::kInvalidInput, who + " range is not finite");
    if (lo0 > hi0) fail(ErrorCode::kNegativeParameter, who + " range has L0 > R0");
    require_size(deltas.size(), horizon, who + " error_bounds");
    for (double d : deltas) require_finite_nonneg(d, who + " error bound");
}

}  // namespace

Instance validate_instance(const Instance& in) {
    Instance inst = in;
    validate_pools(inst);
    validate_range(inst.lo0, inst.hi0, inst.error_bounds, inst.horizon, "instance");
    if (inst.inconsistency.empty()) inst.inconsistency.assign(inst.horizon, 0.0);
    require_size(inst.inconsistency.size(), inst.horizon, "inconsistency");
    for (double e : inst.inconsistency) require_finite_nonneg(e, "inconsistency");
    require_finite_nonneg(inst.under_cost, "under_cost");
    require_finite_nonneg(inst.over_cost, "over_cost");
    return inst;
}

MultiStationInstance validate_instance(const MultiStationInstance& in) {
    MultiStationInstance msi = in;
    validate_pools(msi.base);
    if (msi.stations.empty()) fail(ErrorCode::kInvalidInput, "at least one station is required");
    if (msi.base.error_bounds.empty()) msi.base.error_bounds.assign(msi.base.horizon, 0.0);
    if (msi.base.inconsistency.empty()) msi.base.inconsistency.assign(msi.base.horizon, 0.0);
    for (size_t j = 0; j < msi.stations.size(); ++j) {
        const auto& st = msi.stations[j];
        const std::string who = "station " + std::to_string(j);
        validate_range(st.lo0, st.hi0, st.error_bounds, msi.base.horizon, who);
        require_finite_nonneg(st.under_cost, who + " under_cost");
        require_finite_nonneg(st.over_cost, who + " over_cost");
    }
    return msi;
}

ReleaseInstance validate_instance(const ReleaseInstance& in) {
    ReleaseInstance ri = in;
    ri.base = validate_instance(ri.base);
    const int n = ri.base.n_pools;
    const int T = ri.base.horizon;
    for (double e : ri.base.inconsistency)
        if (e != 0.0) fail(ErrorCode::kParameterOutOfRange, "release and joint modes require zero inconsistency");
    if (ri.wages.empty()) ri.wages = zeros(n, T);
    require_size(ri.wages.size(), n, "wages");
    for (const auto& row : ri.wages) {
        require_size(row.size(), T, "wages row");
        for (double p : row) require_finite_nonneg(p, "wage");
    }
    if (ri.epoch_breaks.empty()) ri.epoch_breaks = {T};
    for (size_t l = 0; l < ri.epoch_breaks.size(); ++l) {
        const int prev = l == 0 ? 0 : ri.epoch_breaks[l - 1];
        if (ri.epoch_breaks[l] <= prev) fail(ErrorCode::kInvalidInput, "epoch_breaks must be strictly increasing and positive");
    }
    if (ri.epoch_breaks.back() != T) fail(ErrorCode::kInvalidInput, "last epoch break must equal the horizon");
    if (ri.release_fees.empty()) ri.release_fees.assign(ri.epoch_breaks.size(), ReleaseFee::infinite());
    require_size(ri.release_fees.size(), ri.epoch_breaks.size(), "release_fees");
    for (const auto& q : ri.release_fees)
        if (!q.forbidden) require_finite_nonneg(q.value, "release fee");
    if (ri.budget) require_finite_nonneg(*ri.budget, "budget");
    if (ri.pre_hires.empty()) ri.pre_hires.assign(n, 0.0);
    require_size(ri.pre_hires.size(), n, "pre_hires");
    for (double z : ri.pre_hires) require_finite_nonneg(z, "pre_hires");
    return ri;
}

std::vector<double> monotone_error_bounds(const Instance& inst) {
    std::vector<double> d(inst.horizon + 1);
    d[0] = inst.hi0 - inst.lo0;
    for (int t = 1; t <= inst.horizon; ++t) d[t] = std::min(d[t - 1], inst.delta(t));
    return d;
}

double staffing_cost(double under_cost, double over_cost, double staffed, double demand) {
    if (staffed < demand) return under_cost * (demand - staffed);
    return over_cost * (staffed - demand);
}

double staffing_cost(const Instance& inst, const StaffingPlan& plan, double demand) {
    return staffing_cost(inst.under_cost, inst.over_cost, plan.net_total(), demand);
}

double multi_station_cost(const MultiStationInstance& msi, std::span<const StaffingPlan> plans,
                          std::span<const double> demands) {
    if (plans.size() != msi.stations.size() || demands.size() != msi.stations.size())
        throw Error(ErrorCode::kDimensionMismatch, "one plan and one demand per station are required");
    double agg = 0.0;
    for (size_t j = 0; j < plans.size(); ++j) {
        const auto& st = msi.stations[j];
        const double cj = staffing_cost(st.under_cost, st.over_cost, plans[j].net_total(), demands[j]);
        agg = msi.objective == StationObjective::kMax ? std::max(agg, cj) : agg + cj;
    }
    return agg;
}

double hiring_spend(const ReleaseInstance& ri, const StaffingPlan& plan) {
    double spend = 0.0;
    for (int i = 0; i < plan.n_pools(); ++i)
        for (int t = 1; t <= plan.horizon(); ++t) {
            spend += ri.wage(i, t) * plan.hires[i][t - 1];
            const double y = plan.releases[i][t - 1];
            if (y != 0.0) {
                const auto& fee = ri.release_fees[ri.epoch_of_day(t)];
                spend += fee.forbidden ? 0.0 : fee.value * y;
            }
        }
    return spend;
}

double joint_cost(const ReleaseInstance& ri, const StaffingPlan& plan, double demand) {
    return staffing_cost(ri.base, plan, demand) + hiring_spend(ri, plan);
}

namespace {

void note(FeasibilityReport& rep, const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
}

void check_shape_and_sign(const Instance& inst, const StaffingPlan& plan, FeasibilityReport& rep) {
    if (plan.n_pools() != inst.n_pools || plan.horizon() != inst.horizon ||
        plan.releases.size() != plan.hires.size()) {
        note(rep, "plan dimensions do not match the instance");
        return;
    }
    for (int i = 0; i < inst.n_pools; ++i)
        for (int t = 1; t <= inst.horizon; ++t) {
            if (plan.hires[i][t - 1] < -kFeasibilityTol)
                note(rep, "negative hire in pool " + std::to_string(i) + " on day " + std::to_string(t));
            if (plan.releases[i][t - 1] < -kFeasibilityTol)
                note(rep, "negative release in pool " + std::to_string(i) + " on day " + std::to_string(t));
        }
}

// supply usage of each pool with a shared row across stations
std::vector<double> supply_used(const Instance& inst, std::span<const StaffingPlan> plans, FeasibilityReport& rep) {
    std::vector<double> used(inst.n_pools, 0.0);
    for (const auto& plan : plans)
        for (int i = 0; i < inst.n_pools; ++i)
            for (int t = 1; t <= inst.horizon; ++t) {
                const double x = plan.hires[i][t - 1];
                if (x <= kFeasibilityTol) continue;
                const double rho = inst.rho(i, t);
                if (rho <= 0.0) {
                    note(rep, "hire from unavailable pool " + std::to_string(i) + " on day " + std::to_string(t));
                    continue;
                }
                used[i] += x / rho;
            }
    return used;
}

void check_supply(const Instance& inst, std::span<const StaffingPlan> plans, FeasibilityReport& rep) {
    const auto used = supply_used(inst, plans, rep);
    for (int i = 0; i < inst.n_pools; ++i)
        if (used[i] > inst.pool_sizes[i] + kFeasibilityTol) {
            std::ostringstream os;
            os << "supply of pool " << i << " exceeded: " << used[i] << " > " << inst.pool_sizes[i];
            note(rep, os.str());
        }
}

}  // namespace

FeasibilityReport check_feasibility(const Instance& inst, const StaffingPlan& plan) {
    FeasibilityReport rep;
    check_shape_and_sign(inst, plan, rep);
    if (!rep.ok) return rep;
    check_supply(inst, std::span(&plan, 1), rep);
    for (const auto& row : plan.releases)
        for (double y : row)
            if (y > kFeasibilityTol) {
                note(rep, "releases are not allowed outside release mode");
                return rep;
            }
    return rep;
}

FeasibilityReport check_feasibility(const ReleaseInstance& ri, const StaffingPlan& plan) {
    FeasibilityReport rep;
    check_shape_and_sign(ri.base, plan, rep);
    if (!rep.ok) return rep;
    check_supply(ri.base, std::span(&plan, 1), rep);
    if (ri.budget && hiring_spend(ri, plan) > *ri.budget + kFeasibilityTol) {
        std::ostringstream os;
        os << "budget exceeded: " << hiring_spend(ri, plan) << " > " << *ri.budget;
        note(rep, os.str());
    }
    for (int i = 0; i < ri.base.n_pools; ++i) {
        double hired = ri.pre_hires.empty() ? 0.0 : ri.pre_hires[i];
        double released = 0.0;
        for (int t = 1; t <= ri.base.horizon; ++t) {
            hired += plan.hires[i][t - 1];
            released += plan.releases[i][t - 1];
            if (released > hired + kFeasibilityTol)
                note(rep, "pool " + std::to_string(i) + " releases more than hired by day " + std::to_string(t));
            if (plan.releases[i][t - 1] > kFeasibilityTol && ri.release_fees[ri.epoch_of_day(t)].forbidden)
                note(rep, "release on day " + std::to_string(t) + " in an epoch with infinite fee");
        }
    }
    return rep;
}

FeasibilityReport check_feasibility(const MultiStationInstance& msi, std::span<const StaffingPlan> plans) {
    FeasibilityReport rep;
    if (plans.size() != msi.stations.size()) {
        note(rep, "one plan per station is required");
        return rep;
    }
    for (const auto& plan : plans) check_shape_and_sign(msi.base, plan, rep);
    if (!rep.ok) return rep;
    check_supply(msi.base, plans, rep);
    return rep;
}

}  // namespace robstaff
