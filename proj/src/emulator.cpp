#include "robstaff/emulator.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "robstaff/error.hpp"

namespace robstaff {

std::vector<double> split_scarcest_first(double total, std::span<const double> caps, std::span<const double> rho_day) {
    const size_t n = caps.size();
    std::vector<double> out(n, 0.0);
    double cap_sum = 0.0;
    for (double c : caps) cap_sum += c;
    if (total >= cap_sum) {
        std::copy(caps.begin(), caps.end(), out.begin());
        return out;
    }
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return rho_day[a] < rho_day[b]; });
    double left = total;
    for (size_t i : order) {
        if (left <= 0.0) break;
        out[i] = std::min(caps[i], left);
        left -= out[i];
    }
    return out;
}

namespace {

std::vector<double> day_column(const Matrix& m, int day) {
    std::vector<double> col(m.size());
    for (size_t i = 0; i < m.size(); ++i) col[i] = m[i][day - 1];
    return col;
}

double column_sum(const Matrix& m, int day) {
    double s = 0.0;
    for (const auto& row : m) s += row[day - 1];
    return s;
}

std::vector<double> finish_step(double raw_total, const std::vector<double>& caps, double cap_sum,
                                std::span<const double> rho_day, double scale) {
    const double total = std::max(0.0, raw_total);
    if (total > cap_sum + 1e-9 * std::max(1.0, scale))
        throw Error(ErrorCode::kSplitInfeasible, "emulator requires " + std::to_string(total) +
                                                     " hires but the canonical day offers " + std::to_string(cap_sum));
    return split_scarcest_first(total, caps, rho_day);
}

}  // namespace

std::vector<double> emulator_step(const Matrix& canonical, const Matrix& realized, double hi_hat, double hi0, int day,
                                  std::span<const double> rho_day) {
    double canon = 0.0, real = 0.0;
    for (int t = 1; t <= day; ++t) canon += column_sum(canonical, t);
    for (int t = 1; t < day; ++t) real += column_sum(realized, t);
    const auto caps = day_column(canonical, day);
    return finish_step(canon - real - (hi0 - hi_hat), caps, column_sum(canonical, day), rho_day, hi0);
}

EmulatorOracle::EmulatorOracle(Matrix canonical, double hi0, Matrix availability)
    : canonical_(std::move(canonical)), availability_(std::move(availability)), hi0_(hi0) {}

double EmulatorOracle::canonical_total(int day) const { return column_sum(canonical_, day); }

std::vector<double> EmulatorOracle::step(int day, double hi_hat) {
    const auto caps = day_column(canonical_, day);
    const double today = column_sum(canonical_, day);
    const auto rho = day_column(availability_, day);
    auto x = finish_step(today + gap_ - (hi0_ - hi_hat), caps, today, rho, hi0_);
    double realized = 0.0;
    for (double v : x) realized += v;
    gap_ += today - realized;
    return x;
}

void EmulatorTrace::write_csv(std::ostream& out) const {
    const auto prec = out.precision(17);
    out << "day,pool,canonical,hired,released,R_hat,L_hat\n";
    for (const auto& r : rows)
        out << r.day << ',' << r.pool + 1 << ',' << r.canonical << ',' << r.hired << ',' << r.released << ','
            << r.hi_hat << ',' << r.lo_hat << '\n';
    out.precision(prec);
}

EmulatorTrace make_trace(const Matrix& canonical, const StaffingPlan& plan, const PredictionSequence& seq) {
    EmulatorTrace trace;
    for (int t = 1; t <= plan.horizon(); ++t)
        for (int i = 0; i < plan.n_pools(); ++i) {
            const double canon = canonical.empty() ? 0.0 : canonical[i][t - 1];
            trace.rows.push_back({t, i, canon, plan.hires[i][t - 1], plan.releases[i][t - 1], seq.effective_hi(t),
                                  seq.effective_lo(t)});
        }
    return trace;
}

std::pair<StaffingPlan, EmulatorTrace> run_emulator(const Instance& inst, const Matrix& canonical,
                                                    const PredictionSequence& seq) {
    EmulatorOracle oracle(canonical, inst.hi0, inst.availability);
    StaffingPlan plan = StaffingPlan::empty(inst.n_pools, inst.horizon);
    for (int t = 1; t <= inst.horizon; ++t) {
        const auto x = oracle.step(t, seq.effective_hi(t));
        for (int i = 0; i < inst.n_pools; ++i) plan.hires[i][t - 1] = x[i];
    }
    auto trace = make_trace(canonical, plan, seq);
    return {std::move(plan), std::move(trace)};
}

}  // namespace robstaff
