#include "robstaff/algorithms.hpp"

#include <algorithm>
#include <cmath>

#include "robstaff/error.hpp"

namespace robstaff {

void BoundsTracker::observe(const PredictionInterval& p, double eps) {
    lo = std::max(lo, p.lo - eps);
    hi = std::min(hi, p.hi + eps);
}

StaffingPlan run_policy(Policy& policy, int n_pools, const PredictionSequence& seq) {
    policy.reset();
    StaffingPlan plan = StaffingPlan::empty(n_pools, seq.horizon());
    for (int t = 1; t <= seq.horizon(); ++t) {
        const DayDecision d = policy.step({t, seq.at(t), nullptr});
        for (int i = 0; i < n_pools; ++i) {
            plan.hires[i][t - 1] = d.hires[i];
            if (!d.releases.empty()) plan.releases[i][t - 1] = d.releases[i];
        }
    }
    return plan;
}

namespace {

void require_single_pool(const Instance& inst) {
    if (inst.n_pools != 1) throw Error(ErrorCode::kMultiPoolUnsupported, "this routine handles one pool only");
}

std::vector<PredictionInterval> shrinking_sequence(const Instance& inst) {
    const auto delta = monotone_error_bounds(inst);
    std::vector<PredictionInterval> out;
    for (int t = 1; t <= inst.horizon; ++t) out.push_back({inst.hi0 - delta[t], inst.hi0});
    return out;
}

}  // namespace

StaffingPlan greedy_target_overstaffing(const Instance& inst, double gamma, const PredictionSequence& seq) {
    GreedyTargetPolicy policy(inst, gamma);
    return run_policy(policy, 1, seq);
}

double greedy_understaffing(const Instance& inst, double gamma) {
    require_single_pool(inst);
    const PredictionSequence seq(shrinking_sequence(inst), inst.lo0, inst.hi0);
    const StaffingPlan plan = greedy_target_overstaffing(inst, gamma, seq);
    return inst.under_cost * std::max(0.0, inst.hi0 - plan.total_hires());
}

FixedPointResult gamma_star_single_pool(const Instance& raw) {
    require_single_pool(raw);
    Instance inst = raw;
    inst.error_bounds = monotone_error_bounds(raw);
    inst.error_bounds.erase(inst.error_bounds.begin());
    std::fill(inst.inconsistency.begin(), inst.inconsistency.end(), 0.0);

    const double c = inst.under_cost, C = inst.over_cost;
    const double first = inst.rho(0, 1) * inst.pool_sizes[0];
    const double lo1 = inst.hi0 - inst.delta(1);

    FixedPointResult out;
    auto last_hire_day = [&](double gamma) {
        const PredictionSequence seq(shrinking_sequence(inst), inst.lo0, inst.hi0);
        const auto plan = greedy_target_overstaffing(inst, gamma, seq);
        int last = 0;
        for (int t = 1; t <= inst.horizon; ++t)
            if (plan.hires[0][t - 1] > 0.0) last = t;
        return last;
    };

    if (C <= 0.0 || c * (inst.hi0 - first) > C * (first - lo1)) {
        out.gamma_star = std::max(0.0, c * (inst.hi0 - first));
        out.branch = FixedPointBranch::kLowSupply;
        out.t_dagger = last_hire_day(out.gamma_star);
        return out;
    }

    // the understaffing cost is weakly decreasing in gamma, so the fixed point is a root of a monotone map
    double a = 0.0, b = std::max(0.0, C * (first - lo1));
    const double tol = 1e-12 * std::max(1.0, b);
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        const double mid = 0.5 * (a + b);
        if (greedy_understaffing(inst, mid) > mid)
            a = mid;
        else
            b = mid;
    }
    out.gamma_star = 0.5 * (a + b);
    out.branch = FixedPointBranch::kFixedPoint;
    out.t_dagger = last_hire_day(out.gamma_star);
    return out;
}

namespace {

void check_closed_form_params(double eta, double delta, int T, double s, double c, double C) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw Error(ErrorCode::kParameterOutOfRange, "availability ratio eta must lie in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0))
        throw Error(ErrorCode::kParameterOutOfRange, "error ratio must lie in (0, 1)");
    if (T < 1) throw Error(ErrorCode::kEmptyHorizon, "horizon must be positive");
    if (s < 0.0 || c < 0.0 || C <= 0.0) throw Error(ErrorCode::kNegativeParameter, "invalid pool size or slopes");
}

// the last hiring day of the greedy target under the worst-case sequence
int t_dagger(double x, double s, double eta, double delta, int T, double C) {
    const double arg = (eta * s - x / C - std::pow(delta, T - 1)) * std::pow(delta, 1 - T) / (1.0 - delta) *
                           (1.0 - delta * eta) +
                       1.0;
    if (!(arg > 0.0)) return 1;
    const double raw = std::ceil(std::log(arg) / (-std::log(delta) - std::log(eta)) + 1.0);
    return static_cast<int>(std::clamp(raw, 1.0, static_cast<double>(T)));
}

// sum_{t=2}^{m} q^t
double geometric_tail(double q, int m) {
    if (m < 2) return 0.0;
    if (q == 1.0) return m - 1.0;
    return q * q * (std::pow(q, m - 1) - 1.0) / (q - 1.0);
}

// total hires of the greedy target with gamma under the worst-case sequence
double closed_form_total(double gamma, double s, double eta, double delta, int T, double C) {
    const int td = t_dagger(gamma, s, eta, delta, T, C);
    const double first = std::pow(delta, T - 1) + gamma / C;
    if (td <= 1) return std::min(first, eta * s);
    // supply used through day td - 1: day one plus the increments (1 - delta) delta^(T - t) / eta^t
    const double used = first / eta + (1.0 - delta) * std::pow(delta, T) * geometric_tail(1.0 / (delta * eta), td - 1);
    const double before = std::pow(delta, T - td + 1) + gamma / C;
    const double last = std::max(0.0, std::pow(eta, td) * (s - used));
    return std::min(std::pow(delta, T - td) + gamma / C, before + last);
}

}  // namespace

Instance closed_form_instance(double s, double eta, double delta, int T, double c, double C) {
    Instance inst;
    inst.n_pools = 1;
    inst.horizon = T;
    inst.pool_sizes = {s};
    inst.availability = zeros(1, T);
    inst.error_bounds.assign(T, 0.0);
    inst.inconsistency.assign(T, 0.0);
    for (int t = 1; t <= T; ++t) {
        inst.availability[0][t - 1] = std::pow(eta, t);
        inst.error_bounds[t - 1] = 1.0 - std::pow(delta, T - t);
    }
    inst.lo0 = 0.0;
    inst.hi0 = 1.0;
    inst.under_cost = c;
    inst.over_cost = C;
    return inst;
}

double gamma_star_closed_form(double s, double eta, double delta, int T, double c, double C) {
    check_closed_form_params(eta, delta, T, s, c, C);
    const double dT1 = std::pow(delta, T - 1);
    if (s <= (c + C * dT1) / ((c + C) * eta)) return std::max(0.0, c - c * eta * s);

    double a = 0.0, b = C * (eta * s - dT1);
    const double tol = 1e-12 * std::max(1.0, b);
    for (int it = 0; it < 200 && b - a > tol; ++it) {
        const double mid = 0.5 * (a + b);
        const double under = c * std::max(0.0, 1.0 - closed_form_total(mid, s, eta, delta, T, C));
        if (under > mid)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

GreedyTargetPolicy::GreedyTargetPolicy(const Instance& inst, double gamma)
    : inst_(validate_instance(inst)), gamma_(gamma) {
    require_single_pool(inst_);
    reset();
}

void GreedyTargetPolicy::reset() {
    bounds_ = BoundsTracker::start(inst_.lo0, inst_.hi0);
    prev_lo_ = inst_.lo0;
    used_ = 0.0;
}

DayDecision GreedyTargetPolicy::step(const Observation& obs) {
    bounds_.observe(obs.interval, inst_.eps(obs.day));
    const int t = obs.day;
    const double rho = inst_.rho(0, t);
    const double avail = std::max(0.0, rho * (inst_.pool_sizes[0] - used_));
    double want;
    if (t == 1)
        want = inst_.over_cost > 0.0 ? bounds_.lo + gamma_ / inst_.over_cost : avail;
    else
        want = bounds_.lo - prev_lo_;
    prev_lo_ = bounds_.lo;
    const double x = std::clamp(want, 0.0, avail);
    if (x > 0.0) used_ += x / rho;
    return {{x}, {}};
}

Instance convergence_rate_instance(int T, double s, double c, double C, double eta) {
    if (!(eta > 0.0)) throw Error(ErrorCode::kParameterOutOfRange, "eta must be positive");
    Instance inst;
    inst.n_pools = 2;
    inst.horizon = T;
    inst.pool_sizes = {s, s};
    inst.availability = zeros(2, std::max(T, 0));
    for (int t = 1; t <= T; ++t) {
        inst.availability[0][t - 1] = t <= 4 ? 1.0 : 0.0;
        inst.availability[1][t - 1] = 1.0 / (1.0 + std::exp(t - 9.0));
    }
    inst.lo0 = 0.0;
    inst.hi0 = 2.0 * s;
    for (int t = 1; t <= T; ++t) inst.error_bounds.push_back(1.0 / std::sqrt(t * eta) - 1.0 / std::sqrt((T + 1) * eta));
    inst.under_cost = c;
    inst.over_cost = C;
    return validate_instance(inst);
}

LpEmulatorPolicy::LpEmulatorPolicy(const Instance& inst, CanonicalRule rule) : inst_(validate_instance(inst)) {
    canon_ = solve_canonical(build_lp_single_switch(inst_), rule);
    reset();
}

LpEmulatorPolicy::LpEmulatorPolicy(const Instance& inst, CanonicalProfile canonical)
    : inst_(validate_instance(inst)), canon_(std::move(canonical)) {
    reset();
}

void LpEmulatorPolicy::reset() {
    oracle_ = EmulatorOracle(canon_.hires, inst_.hi0, inst_.availability);
    bounds_ = BoundsTracker::start(inst_.lo0, inst_.hi0);
}

DayDecision LpEmulatorPolicy::step(const Observation& obs) {
    bounds_.observe(obs.interval, inst_.eps(obs.day));
    return {oracle_.step(obs.day, bounds_.hi), {}};
}

LpResolvingPolicy::LpResolvingPolicy(const Instance& inst, CanonicalRule rule)
    : inst_(validate_instance(inst)), rule_(rule) {
    reset();
}

void LpResolvingPolicy::reset() {
    state_ = fresh_state(inst_);
    last_gamma_ = 0.0;
}

DayDecision LpResolvingPolicy::step(const Observation& obs) {
    const int t = obs.day;
    state_.index = t;
    state_.lo = std::max(state_.lo, obs.interval.lo - inst_.eps(t));
    state_.hi = std::min(state_.hi, obs.interval.hi + inst_.eps(t));
    EpochState view = state_;
    view.lo = std::min(view.lo, view.hi);
    const auto canon = solve_canonical(build_lp_resolving(inst_, view, t), rule_);
    last_gamma_ = canon.gamma;

    DayDecision d;
    d.hires.assign(inst_.n_pools, 0.0);
    for (int i = 0; i < inst_.n_pools; ++i) {
        const double rho = state_.availability[i][t - 1];
        const double x = rho > 0.0 ? canon.hires[i][t - 1] : 0.0;
        d.hires[i] = x;
        state_.cum_hires[i] += x;
        state_.remaining_supply[i] = rho > 0.0 ? std::max(0.0, rho * (state_.remaining_supply[i] - x / rho)) : 0.0;
        for (int k = t + 1; k <= inst_.horizon; ++k)
            state_.availability[i][k - 1] = rho > 0.0 ? state_.availability[i][k - 1] / rho : 0.0;
    }
    return d;
}

namespace {

bool is_plain(const ReleaseInstance& ri) {
    if (ri.n_epochs() != 1 || !ri.release_fees.front().forbidden || ri.budget) return false;
    for (const auto& row : ri.wages)
        for (double p : row)
            if (p != 0.0) return false;
    for (double z : ri.pre_hires)
        if (z != 0.0) return false;
    return true;
}

}  // namespace

ReleasePolicy::ReleasePolicy(const ReleaseInstance& ri, std::size_t config_cap, bool allow_reduction)
    : ri_(std::make_shared<const ReleaseInstance>(validate_instance(ri))), cap_(config_cap) {
    if (allow_reduction && is_plain(*ri_)) base_.emplace(ri_->base);
    reset();
}

void ReleasePolicy::reset() {
    if (base_) base_->reset();
    state_ = release_fresh_state(*ri_);
    runner_.reset();
    bounds_ = BoundsTracker::start(ri_->base.lo0, ri_->base.hi0);
    critical_.clear();
}

DayDecision ReleasePolicy::step(const Observation& obs) {
    if (base_) {
        auto d = base_->step(obs);
        d.releases.assign(ri_->base.n_pools, 0.0);
        return d;
    }
    bounds_.observe(obs.interval, 0.0);
    if (!runner_ || runner_->finished()) {
        if (runner_) state_ = runner_->next_state();
        const auto prog = build_lp_release(*ri_, state_, cap_);
        const auto sol = require_optimal(solve_lp(prog.model));
        runner_.emplace(*ri_, state_, prog, sol);
    }
    auto d = runner_->step(obs.day, std::min(bounds_.lo, bounds_.hi), bounds_.hi);
    if (runner_->finished()) critical_.push_back(runner_->critical_day());
    return d;
}

namespace {

CanonicalProfile joint_profile(const ReleaseInstance& ri, double& objective) {
    const auto prog = build_lp_joint_cost(ri);
    const auto sol = require_optimal(solve_lp(prog.model));
    objective = sol.objective;
    return {sol.objective, extract_canonical(sol, prog)};
}

}  // namespace

JointCostPolicy::JointCostPolicy(const ReleaseInstance& ri)
    : emu_(ri.base, joint_profile(validate_instance(ri), objective_)) {}

double joint_objective(const ReleaseInstance& ri) {
    double objective = 0.0;
    joint_profile(validate_instance(ri), objective);
    return objective;
}

MultiStationPolicy::MultiStationPolicy(const MultiStationInstance& raw) : msi_(validate_instance(raw)) {
    const auto prog = build_lp_multi_station(msi_);
    const auto sol = require_optimal(solve_lp(prog.model));
    objective_ = sol.objective;
    canon_ = extract_canonical(sol, prog);
    for (int j = 0; j < msi_.n_stations(); ++j) {
        gammas_.push_back(sol.values[prog.gamma[j]]);
        stations_.emplace_back(msi_.station_instance(j), CanonicalProfile{gammas_.back(), canon_[j]});
    }
}

void MultiStationPolicy::reset() {
    for (auto& s : stations_) s.reset();
}

std::vector<std::vector<double>> MultiStationPolicy::step(int day, const std::vector<PredictionInterval>& intervals) {
    if (intervals.size() != stations_.size())
        throw Error(ErrorCode::kDimensionMismatch, "one interval per station is required");
    std::vector<std::vector<double>> out;
    for (size_t j = 0; j < stations_.size(); ++j) out.push_back(stations_[j].step({day, intervals[j], nullptr}).hires);
    return out;
}

std::vector<StaffingPlan> MultiStationPolicy::run(const std::vector<PredictionSequence>& seqs) {
    if (seqs.size() != stations_.size())
        throw Error(ErrorCode::kDimensionMismatch, "one sequence per station is required");
    std::vector<StaffingPlan> plans;
    for (size_t j = 0; j < stations_.size(); ++j) plans.push_back(run_policy(stations_[j], msi_.base.n_pools, seqs[j]));
    return plans;
}

namespace {

const LpEmulatorPolicy& require_emulator(const Policy& base) {
    const auto* emu = dynamic_cast<const LpEmulatorPolicy*>(&base);
    if (emu == nullptr) throw Error(ErrorCode::kUnsupportedBase, "the shock wrapper only wraps the LP emulator");
    if (emu->instance().n_pools != 1) throw Error(ErrorCode::kUnsupportedBase, "the shock wrapper needs a single pool");
    return *emu;
}

}  // namespace

MiscoverageWrapper::MiscoverageWrapper(const Policy& base, ShockScenario scenario, std::vector<bool> shocked)
    : base_(require_emulator(base)), scenario_(scenario), shocked_(std::move(shocked)) {
    if (scenario_ == ShockScenario::kDetectBeforeHiring &&
        shocked_.size() < static_cast<size_t>(base_.instance().horizon))
        throw Error(ErrorCode::kDimensionMismatch, "one shock flag per day is required");
    reset();
}

void MiscoverageWrapper::reset() {
    base_.reset();
    seen_.clear();
}

DayDecision MiscoverageWrapper::step(const Observation& obs) {
    if (scenario_ == ShockScenario::kNoDetect) return base_.step(obs);
    const int t = obs.day;
    seen_.resize(t);
    seen_[t - 1] = obs.interval;
    const int n = base_.instance().n_pools;
    if (shocked_[t - 1]) return {std::vector<double>(n, 0.0), {}};

    // replay on the history where each shocked day borrows the next clean day's interval
    std::vector<PredictionInterval> history(seen_);
    for (int tau = t - 1; tau >= 1; --tau)
        if (shocked_[tau - 1]) history[tau - 1] = history[tau];
    LpEmulatorPolicy replay = base_;
    replay.reset();
    DayDecision d;
    for (int tau = 1; tau <= t; ++tau) d = replay.step({tau, history[tau - 1], nullptr});
    return d;
}

}  // namespace robstaff
