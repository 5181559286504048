#include "robstaff/release.hpp"

#include <algorithm>
#include <cmath>

#include "robstaff/error.hpp"

namespace robstaff {

ReleaseEpochRunner::ReleaseEpochRunner(const ReleaseInstance& ri, const EpochState& state, const ReleaseProgram& prog,
                                       const LpSolution& sol)
    : ri_(&ri), state_(state), sub_(prog.sub), canon_(extract_canonical(sol, prog)) {
    t0_ = sub_.day_offset;
    length_ = sub_.breaks.front();
    const int n = sub_.n_pools;
    Matrix avail = zeros(n, length_);
    for (int i = 0; i < n; ++i)
        for (int t = 1; t <= length_; ++t) avail[i][t - 1] = ri.base.rho(i, t0_ + t);
    oracle_ = EmulatorOracle(canon_.hires, state.hi, std::move(avail));
    hi_hat_.assign(length_ + 1, state.hi);
    hired_ = zeros(n, length_);
}

DayDecision ReleaseEpochRunner::step(int day, double lo_hat, double hi_hat) {
    const int tau = day - t0_;
    if (done_ || tau < 1 || tau > length_) throw Error(ErrorCode::kInfeasibleState, "day outside the running epoch");
    hi_hat_[tau] = hi_hat;
    DayDecision d;
    d.hires = oracle_.step(tau, hi_hat);
    d.releases.assign(sub_.n_pools, 0.0);
    for (int i = 0; i < sub_.n_pools; ++i) hired_[i][tau - 1] = d.hires[i];
    if (tau == length_) close_epoch(d, lo_hat);
    return d;
}

void ReleaseEpochRunner::close_epoch(DayDecision& d, double lo_hat) {
    const int n = sub_.n_pools;
    const int E = length_;
    const double scale = std::max(1.0, std::abs(sub_.hi0));

    // largest k with R_k - realized(k) = R_bar - canonical(k)
    int k_star = 0;
    double real = 0.0, canon = 0.0;
    for (int k = 1; k <= E; ++k) {
        for (int i = 0; i < n; ++i) {
            real += hired_[i][k - 1];
            canon += canon_.hires[i][k - 1];
        }
        if (std::abs((hi_hat_[k] - real) - (sub_.hi0 - canon)) <= 1e-9 * scale) k_star = k;
    }
    critical_ = t0_ + k_star;

    const auto& y_tilde = canon_.releases[k_star];
    double y_sum = 0.0;
    for (double y : y_tilde) y_sum += y;
    const double target = y_sum + hi_hat_[k_star] - sub_.delta[k_star] + sub_.delta[E] - hi_hat_[E];
    // a target above the canonical release is capped at it; a negative one releases nothing
    if (y_sum > 0.0 && target >= -1e-9 * scale) {
        double left = std::clamp(target, 0.0, y_sum);
        for (int i = 0; i < n && left > 0.0; ++i) {
            double held = state_.cum_hires[i];
            for (int t = 1; t <= E; ++t) held += hired_[i][t - 1];
            d.releases[i] = std::clamp(std::min(y_tilde[i], left), 0.0, std::max(0.0, held));
            left -= d.releases[i];
        }
    }

    next_ = state_;
    next_.index = state_.index + 1;
    double spend = 0.0;
    const auto& fee = sub_.fees.front();
    for (int i = 0; i < n; ++i) {
        double used = 0.0;
        for (int t = 1; t <= E; ++t) {
            const double x = hired_[i][t - 1];
            next_.cum_hires[i] += x;
            if (x > 0.0) used += x / sub_.rho[i][t - 1];
            spend += sub_.wages[i][t - 1] * x;
        }
        next_.cum_hires[i] -= d.releases[i];
        if (!fee.forbidden) spend += fee.value * d.releases[i];
        next_.remaining_supply[i] = std::max(0.0, sub_.rho[i][E - 1] * (state_.remaining_supply[i] - used));
    }
    if (next_.remaining_budget) next_.remaining_budget = std::max(0.0, *next_.remaining_budget - spend);
    next_.hi = hi_hat_[E];
    next_.lo = std::min(lo_hat, next_.hi);
    for (int i = 0; i < n; ++i)
        for (int t = 1; t <= ri_->base.horizon; ++t) {
            const double anchor = ri_->base.rho(i, t0_ + E);
            next_.availability[i][t - 1] = t <= t0_ + E || anchor <= 0.0 ? 0.0 : ri_->base.rho(i, t) / anchor;
        }
    done_ = true;
}

EpochRun release_epoch_run(const ReleaseInstance& ri, const EpochState& state, const ReleaseProgram& prog,
                           const LpSolution& sol, const PredictionSequence& seq) {
    ReleaseEpochRunner runner(ri, state, prog, sol);
    EpochRun out;
    out.plan = StaffingPlan::empty(ri.base.n_pools, ri.base.horizon);
    for (int t = runner.first_day(); t <= runner.last_day(); ++t) {
        const auto d = runner.step(t, seq.effective_lo(t), seq.effective_hi(t));
        for (int i = 0; i < ri.base.n_pools; ++i) {
            out.plan.hires[i][t - 1] = d.hires[i];
            out.plan.releases[i][t - 1] = d.releases[i];
        }
    }
    out.next = runner.next_state();
    out.critical_day = runner.critical_day();
    return out;
}

double release_objective(const ReleaseInstance& ri, std::size_t config_cap) {
    const auto prog = build_lp_release(ri, release_fresh_state(ri), config_cap);
    return require_optimal(solve_lp(prog.model)).objective;
}

}  // namespace robstaff
