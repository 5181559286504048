#include "robstaff/benchmarks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "robstaff/algorithms.hpp"
#include "robstaff/emulator.hpp"
#include "robstaff/error.hpp"
#include "robstaff/kernels.hpp"

namespace robstaff {

using nlohmann::json;

void validate_process(const DemandProcess& proc) {
    if (proc.horizon < 1) throw Error(ErrorCode::kEmptyHorizon, "demand process needs T >= 1");
    if (proc.trials < 0) throw Error(ErrorCode::kNegativeParameter, "binomial trials must be nonnegative");
    if (!(proc.prior_lo >= 0.0 && proc.prior_lo <= proc.prior_hi && proc.prior_hi <= 1.0))
        throw Error(ErrorCode::kParameterOutOfRange, "prior range must satisfy 0 <= lo <= hi <= 1");
}

int World::demand() const { return std::accumulate(signal.partials.begin(), signal.partials.end(), 0); }

World sample_world(const DemandProcess& proc, std::uint64_t seed) {
    validate_process(proc);
    const int T = proc.horizon;
    std::mt19937_64 rng(seed);
    World w;
    w.process = proc;
    w.signal.horizon = T;
    std::uniform_real_distribution<double> prior(proc.prior_lo, proc.prior_hi);
    for (int t = 0; t < T; ++t) w.signal.priors.push_back(proc.prior_hi > proc.prior_lo ? prior(rng) : proc.prior_lo);
    auto draw = [&](int k) { return std::binomial_distribution<int>(proc.trials, w.signal.priors[k - 1])(rng); };
    for (int t = 1; t <= T; ++t) {
        w.signal.partials.push_back(draw(t));
        std::vector<int> traj(T, 0);
        for (int k = t + 1; k <= T; ++k) traj[k - 1] = draw(k);
        w.signal.trajectories.push_back(std::move(traj));
    }
    return w;
}

DemandSignal signal_prefix(const World& world, int t) {
    DemandSignal s;
    s.horizon = world.signal.horizon;
    s.partials.assign(world.signal.partials.begin(), world.signal.partials.begin() + t);
    s.trajectories.assign(world.signal.trajectories.begin(), world.signal.trajectories.begin() + t);
    s.priors = world.signal.priors;
    return s;
}

double point_estimator(std::span<const int> partials, const std::vector<std::vector<int>>& trajectories, int horizon) {
    const int t = static_cast<int>(partials.size());
    if (t < 1) throw Error(ErrorCode::kInvalidInput, "point estimator needs t >= 1");
    if (static_cast<int>(trajectories.size()) < t)
        throw Error(ErrorCode::kDimensionMismatch, "one sampled profile per observed day is required");
    double realized = 0.0;
    for (int v : partials) realized += v;
    double future = 0.0;
    for (int tau = 1; tau <= t; ++tau)
        for (int k = t + 1; k <= horizon; ++k) future += trajectories[tau - 1][k - 1];
    return realized + future / t;
}

std::vector<double> CalibrationTable::widths() const {
    std::vector<double> w(left.size());
    for (size_t t = 0; t < w.size(); ++t) w[t] = left[t] + right[t];
    return w;
}

std::string CalibrationTable::to_json() const {
    json j = {{"target", target}, {"draws", draws}, {"seed", seed},       {"initial_range", {range_lo, range_hi}},
              {"left", left},     {"right", right}, {"coverage", coverage}};
    return j.dump(2);
}

CalibrationTable calibration_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        CalibrationTable c;
        c.target = j.at("target").get<double>();
        c.draws = j.at("draws").get<std::size_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.left = j.at("left").get<std::vector<double>>();
        c.right = j.at("right").get<std::vector<double>>();
        c.coverage = j.value("coverage", std::vector<double>{});
        const auto r = j.at("initial_range").get<std::vector<double>>();
        if (r.size() != 2 || r[0] > r[1]) throw Error(ErrorCode::kInvalidInput, "initial_range must be [lo, hi]");
        c.range_lo = r[0];
        c.range_hi = r[1];
        if (c.left.size() != c.right.size())
            throw Error(ErrorCode::kDimensionMismatch, "left and right offsets differ in length");
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kInvalidInput, std::string("calibration table: ") + e.what());
    }
}

double lower_quantile(std::vector<double> samples, double q) {
    if (samples.empty()) throw Error(ErrorCode::kInvalidInput, "quantile of an empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    const long k = static_cast<long>(std::ceil(q * n - 1e-9)) - 1;
    return samples[std::clamp<long>(k, 0, static_cast<long>(samples.size()) - 1)];
}

namespace {

// future partials minus the sampled future mean, per day
std::vector<double> residuals(const World& w) {
    const int T = w.signal.horizon;
    std::vector<double> out(T);
    for (int t = 1; t <= T; ++t) {
        const std::span<const int> past(w.signal.partials.data(), t);
        out[t - 1] = w.demand() - point_estimator(past, w.signal.trajectories, T);
    }
    return out;
}

constexpr double kCoverTol = 1e-9;

bool covered(double res, double l, double r) { return res >= -l - kCoverTol && res <= r + kCoverTol; }

}  // namespace

CalibrationTable calibrate_intervals(const DemandProcess& proc, double target, std::size_t draws, std::uint64_t seed) {
    validate_process(proc);
    if (draws < kMinCalibrationDraws)
        throw Error(ErrorCode::kInsufficientDraws,
                    std::to_string(draws) + " draws, at least " + std::to_string(kMinCalibrationDraws) + " needed");
    if (!(target > 0.0 && target < 1.0)) throw Error(ErrorCode::kParameterOutOfRange, "coverage target in (0, 1)");
    const int T = proc.horizon;
    std::vector<std::vector<double>> res(T, std::vector<double>(draws));
    std::vector<double> totals(draws);
    for (std::size_t j = 0; j < draws; ++j) {
        const World w = sample_world(proc, replication_seed(seed, static_cast<int>(j)));
        const auto r = residuals(w);
        for (int t = 0; t < T; ++t) res[t][j] = r[t];
        totals[j] = w.demand();
    }
    CalibrationTable c;
    c.target = target;
    c.draws = draws;
    c.seed = seed;
    const double tail = (1.0 - target) / 2.0;
    c.range_lo = lower_quantile(totals, tail);
    c.range_hi = lower_quantile(totals, 1.0 - tail);
    for (int t = 0; t < T; ++t) {
        const double l = std::max(0.0, -lower_quantile(res[t], tail));
        const double r = std::max(0.0, lower_quantile(res[t], 1.0 - tail));
        c.left.push_back(l);
        c.right.push_back(r);
        const auto hit = std::count_if(res[t].begin(), res[t].end(), [&](double x) { return covered(x, l, r); });
        c.coverage.push_back(static_cast<double>(hit) / static_cast<double>(draws));
    }
    return c;
}

std::vector<double> held_out_coverage(const DemandProcess& proc, const CalibrationTable& table, std::size_t draws,
                                      std::uint64_t seed) {
    const int T = proc.horizon;
    if (static_cast<int>(table.left.size()) != T)
        throw Error(ErrorCode::kDimensionMismatch, "calibration table does not match the horizon");
    std::vector<double> hits(T, 0.0);
    for (std::size_t j = 0; j < draws; ++j) {
        const auto r = residuals(sample_world(proc, replication_seed(seed, static_cast<int>(j))));
        for (int t = 0; t < T; ++t) hits[t] += covered(r[t], table.left[t], table.right[t]) ? 1.0 : 0.0;
    }
    for (double& h : hits) h /= static_cast<double>(draws);
    return hits;
}

PredictionInterval world_interval(const World& world, const CalibrationTable& table, int t) {
    const std::span<const int> past(world.signal.partials.data(), t);
    const double d = point_estimator(past, world.signal.trajectories, world.signal.horizon);
    return {d - table.left[t - 1], d + table.right[t - 1]};
}

PredictionSequence world_sequence(const World& world, const CalibrationTable& table) {
    std::vector<PredictionInterval> out;
    for (int t = 1; t <= world.signal.horizon; ++t) out.push_back(world_interval(world, table, t));
    return PredictionSequence(std::move(out), table.range_lo, table.range_hi);
}

Instance minimax_instance(const Instance& supply, const DemandProcess& proc, const CalibrationTable& table) {
    if (supply.horizon != proc.horizon || static_cast<int>(table.left.size()) != proc.horizon)
        throw Error(ErrorCode::kDimensionMismatch, "supply, process and calibration horizons differ");
    Instance inst = supply;
    inst.lo0 = table.range_lo;
    inst.hi0 = table.range_hi;
    inst.error_bounds = table.widths();
    inst.inconsistency.assign(proc.horizon, 0.0);
    return validate_instance(inst);
}

namespace {

// hire toward a staffing target with today's availability, scarcest pool first
std::vector<double> hire_toward(const Instance& inst, int t, double target, std::vector<double>& used, double& staffed) {
    std::vector<double> caps(inst.n_pools), rho(inst.n_pools);
    for (int i = 0; i < inst.n_pools; ++i) {
        rho[i] = inst.rho(i, t);
        caps[i] = rho[i] > 0.0 ? rho[i] * std::max(0.0, inst.pool_sizes[i] - used[i]) : 0.0;
    }
    auto x = split_scarcest_first(std::max(0.0, target - staffed), caps, rho);
    for (int i = 0; i < inst.n_pools; ++i) {
        if (x[i] <= 0.0) continue;
        used[i] += x[i] / rho[i];
        staffed += x[i];
    }
    return x;
}

const DemandSignal& require_signal(const Observation& obs, const std::string& who) {
    if (!obs.signal) throw Error(ErrorCode::kInvalidInput, who + " needs the sampled demand signal");
    if (static_cast<int>(obs.signal->partials.size()) < obs.day ||
        static_cast<int>(obs.signal->trajectories.size()) < obs.day)
        throw Error(ErrorCode::kDimensionMismatch, who + ": signal shorter than the current day");
    return *obs.signal;
}

}  // namespace

NaiveGreedyPolicy::NaiveGreedyPolicy(const Instance& inst) : inst_(validate_instance(inst)) { reset(); }

void NaiveGreedyPolicy::reset() {
    used_.assign(inst_.n_pools, 0.0);
    staffed_ = 0.0;
}

double NaiveGreedyPolicy::target(double lo, double hi, double under_cost, double over_cost) {
    const double w = under_cost + over_cost;
    return w > 0.0 ? (over_cost * lo + under_cost * hi) / w : lo;
}

DayDecision NaiveGreedyPolicy::step(const Observation& obs) {
    const double d = target(obs.interval.lo, obs.interval.hi, inst_.under_cost, inst_.over_cost);
    return {hire_toward(inst_, obs.day, d, used_, staffed_), {}};
}

NaiveBayesianPolicy::NaiveBayesianPolicy(const Instance& inst) : inst_(validate_instance(inst)) { reset(); }

void NaiveBayesianPolicy::reset() {
    used_.assign(inst_.n_pools, 0.0);
    staffed_ = 0.0;
}

double NaiveBayesianPolicy::target(const DemandSignal& signal, int t, double under_cost, double over_cost) {
    double realized = 0.0;
    for (int k = 1; k <= t; ++k) realized += signal.partials[k - 1];
    std::vector<double> samples;
    for (int tau = 1; tau <= t; ++tau) {
        double v = realized;
        for (int k = t + 1; k <= signal.horizon; ++k) v += signal.trajectories[tau - 1][k - 1];
        samples.push_back(v);
    }
    const double w = under_cost + over_cost;
    return lower_quantile(std::move(samples), w > 0.0 ? under_cost / w : 0.5);
}

DayDecision NaiveBayesianPolicy::step(const Observation& obs) {
    const auto& sig = require_signal(obs, "naive_bayesian");
    const double d = target(sig, obs.day, inst_.under_cost, inst_.over_cost);
    return {hire_toward(inst_, obs.day, d, used_, staffed_), {}};
}

std::vector<double> binomial_pmf(int trials, double p) {
    std::vector<double> pmf(trials + 1, 0.0);
    for (int k = 0; k <= trials; ++k) {
        const double logc = std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0);
        const double a = k == 0 ? 0.0 : k * std::log(p);
        const double b = k == trials ? 0.0 : (trials - k) * std::log1p(-p);
        pmf[k] = std::exp(logc + a + b);
    }
    return pmf;
}

std::vector<std::vector<double>> empirical_pmfs(const DemandSignal& signal, int t, int trials) {
    const int T = signal.horizon;
    std::vector<std::vector<double>> pmf(T, std::vector<double>(trials + 1, 0.0));
    for (int k = t + 1; k <= T; ++k) {
        for (int tau = 1; tau <= t; ++tau) {
            const int v = signal.trajectories[tau - 1][k - 1];
            if (v < 0 || v > trials) throw Error(ErrorCode::kInvalidInput, "sampled partial outside [0, trials]");
            pmf[k - 1][v] += 1.0 / t;
        }
    }
    return pmf;
}

std::vector<std::vector<double>> true_pmfs(const std::vector<double>& priors, int trials) {
    std::vector<std::vector<double>> pmf;
    for (double p : priors) pmf.push_back(binomial_pmf(trials, p));
    return pmf;
}

MdpSolver::MdpSolver(const Instance& inst, const MdpSpec& spec) : inst_(validate_instance(inst)), spec_(spec) {
    if (spec.grid_levels < 2) throw Error(ErrorCode::kInvalidInput, "MDP grid needs at least two levels");
    if (spec.trials < 0) throw Error(ErrorCode::kNegativeParameter, "binomial trials must be nonnegative");
    std::size_t cells = 1;
    for (int i = 0; i < inst_.n_pools; ++i) {
        steps_.push_back(inst_.pool_sizes[i] / (spec.grid_levels - 1));
        cells *= static_cast<std::size_t>(spec.grid_levels);
        if (cells > spec.state_cap) break;
    }
    std::size_t states = 0;
    if (cells <= spec.state_cap)
        for (int t = 1; t <= inst_.horizon; ++t) states += cells * static_cast<std::size_t>(sums(t));
    if (cells > spec.state_cap || states > spec.state_cap)
        throw Error(ErrorCode::kStateExplosion, "MDP state space exceeds " + std::to_string(spec.state_cap));
    cells_ = static_cast<int>(cells);
}

std::size_t MdpSolver::state_count() const {
    std::size_t states = 0;
    for (int t = 1; t <= inst_.horizon; ++t) states += static_cast<std::size_t>(cells_) * sums(t);
    return states;
}

int MdpSolver::reach(int pool, int day, int level) const {
    const double step = steps_[pool];
    const double rho = inst_.rho(pool, day);
    if (step <= 0.0 || rho <= 0.0) return level;
    const double prev = day == 1 ? 1.0 : inst_.rho(pool, day - 1);
    if (prev <= 0.0) return level;
    const double held = level * step;
    const double top = held + rho * std::max(0.0, inst_.pool_sizes[pool] - held / prev);
    const int lvl = static_cast<int>(std::floor(top / step + 1e-9));
    return std::clamp(lvl, level, spec_.grid_levels - 1);
}

int MdpSolver::flat(const std::vector<int>& levels) const {
    int idx = 0;
    for (int v : levels) idx = idx * spec_.grid_levels + v;
    return idx;
}

// table is [cell][sum] with `width` sums per cell; replaces each cell by the minimum over
// the cells reachable from it on `day`, one pool dimension at a time
void MdpSolver::window_min(int day, std::vector<double>& table, int width) const {
    const auto& k = kernels::active();
    const int G = spec_.grid_levels;
    std::vector<double> in;
    int stride = cells_;
    for (int i = 0; i < inst_.n_pools; ++i) {
        stride /= G;
        const std::size_t block = static_cast<std::size_t>(stride) * width;
        std::vector<int> top(G);
        for (int l = 0; l < G; ++l) top[l] = reach(i, day, l);
        in = table;
        for (int outer = 0; outer < cells_; outer += stride * G) {
            auto at = [&](std::vector<double>& v, int l) { return v.data() + (outer + l * stride) * std::size_t(width); };
            for (int l = G - 1; l >= 0; --l) {
                double* out = at(table, l);
                if (l + 1 < G && top[l] == top[l + 1]) {
                    k.vmin(at(table, l + 1), out, block);
                    continue;
                }
                for (int m = l + 1; m <= top[l]; ++m) k.vmin(at(in, m), out, block);
            }
        }
    }
}

void MdpSolver::solve(int first_day, const std::vector<std::vector<double>>& pmf) {
    const int T = inst_.horizon;
    if (first_day < 1 || first_day > T) throw Error(ErrorCode::kInvalidInput, "MDP first day outside [1, T]");
    if (static_cast<int>(pmf.size()) != T) throw Error(ErrorCode::kDimensionMismatch, "one pmf per day is required");
    for (int t = first_day + 1; t <= T; ++t)
        if (static_cast<int>(pmf[t - 1].size()) != spec_.trials + 1)
            throw Error(ErrorCode::kDimensionMismatch, "pmf support must be 0..trials");
    const auto& k = kernels::active();
    first_ = first_day;
    cont_.assign(T - first_day + 1, {});

    const int n = inst_.n_pools, G = spec_.grid_levels;
    std::vector<double> staffed(cells_, 0.0);
    for (int c = 0; c < cells_; ++c) {
        int rest = c;
        for (int i = n - 1; i >= 0; --i) {
            staffed[c] += (rest % G) * steps_[i];
            rest /= G;
        }
    }

    // after day T every partial is known, so the sum is the demand
    std::vector<double> next(static_cast<std::size_t>(cells_) * sums(T));
    for (int c = 0; c < cells_; ++c)
        for (int s = 0; s < sums(T); ++s)
            next[std::size_t(c) * sums(T) + s] = staffing_cost(inst_.under_cost, inst_.over_cost, staffed[c], s);

    for (int t = T; t >= first_day; --t) {
        auto& cont = cont_[t - first_day];
        const int w = sums(t);
        if (t == T) {
            cont = next;
        } else {
            const int wn = sums(t + 1);
            cont.assign(std::size_t(cells_) * w, 0.0);
            for (int c = 0; c < cells_; ++c)
                for (int d = 0; d <= spec_.trials; ++d) {
                    const double p = pmf[t][d];
                    if (p != 0.0) k.axpy(p, next.data() + std::size_t(c) * wn + d, cont.data() + std::size_t(c) * w, w);
                }
        }
        if (t > first_day) {
            next = cont;
            window_min(t, next, w);
        }
    }
}

namespace {

// visit every cell of the box [levels_i, top_i] in lexicographic order
template <class F>
void for_box(const std::vector<int>& from, const std::vector<int>& top, F&& f) {
    std::vector<int> cur = from;
    while (true) {
        f(cur);
        int i = static_cast<int>(cur.size()) - 1;
        while (i >= 0 && cur[i] == top[i]) {
            cur[i] = from[i];
            --i;
        }
        if (i < 0) return;
        ++cur[i];
    }
}

}  // namespace

std::vector<int> MdpSolver::best_levels(int day, int sum, const std::vector<int>& levels) const {
    if (day < first_ || day - first_ >= static_cast<int>(cont_.size()))
        throw Error(ErrorCode::kInvalidInput, "MDP not solved for day " + std::to_string(day));
    if (sum < 0 || sum >= sums(day)) throw Error(ErrorCode::kInvalidInput, "partial sum outside the MDP grid");
    const auto& cont = cont_[day - first_];
    std::vector<int> top(levels.size());
    for (size_t i = 0; i < levels.size(); ++i) top[i] = reach(static_cast<int>(i), day, levels[i]);
    std::vector<int> best = levels;
    double best_v = std::numeric_limits<double>::infinity();
    for_box(levels, top, [&](const std::vector<int>& cell) {
        const double v = cont[std::size_t(flat(cell)) * sums(day) + sum];
        if (v < best_v) {
            best_v = v;
            best = cell;
        }
    });
    return best;
}

double MdpSolver::value(int day, int sum, const std::vector<int>& levels) const {
    const auto best = best_levels(day, sum, levels);
    return cont_[day - first_][std::size_t(flat(best)) * sums(day) + sum];
}

double MdpSolver::root_value(const std::vector<double>& first_pmf) const {
    if (first_ != 1) throw Error(ErrorCode::kInvalidInput, "root value needs a solve from day 1");
    const std::vector<int> zero(inst_.n_pools, 0);
    double v = 0.0;
    for (int d = 0; d < static_cast<int>(first_pmf.size()); ++d)
        if (first_pmf[d] != 0.0) v += first_pmf[d] * value(1, d, zero);
    return v;
}

MdpPolicy::MdpPolicy(const Instance& inst, const MdpSpec& spec) : inst_(validate_instance(inst)), spec_(spec), solver_(inst_, spec) {
    reset();
}

void MdpPolicy::reset() { levels_.assign(inst_.n_pools, 0); }

DayDecision MdpPolicy::step(const Observation& obs) {
    const auto& sig = require_signal(obs, name());
    const int t = obs.day;
    if (spec_.source == TransitionSource::kEmpirical)
        solver_.solve(t, empirical_pmfs(sig, t, spec_.trials));
    else if (t == 1)
        solver_.solve(1, true_pmfs(sig.priors, spec_.trials));
    int sum = 0;
    for (int k = 0; k < t; ++k) sum += sig.partials[k];
    const auto next = solver_.best_levels(t, sum, levels_);
    DayDecision d;
    d.hires.assign(inst_.n_pools, 0.0);
    for (int i = 0; i < inst_.n_pools; ++i) d.hires[i] = (next[i] - levels_[i]) * solver_.step_size(i);
    levels_ = next;
    return d;
}

std::vector<double> BenchReport::costs(const std::string& policy) const {
    std::vector<double> out;
    for (const auto& r : records)
        if (r.policy == policy) out.push_back(r.cost);
    return out;
}

void BenchReport::write_csv(std::ostream& out) const {
    const auto prec = out.precision(17);
    out << "replication,policy,cost,runtime_ms,seed\n";
    for (const auto& r : records)
        out << r.replication << ',' << r.policy << ',' << r.cost << ',' << r.runtime_ms << ',' << r.seed << '\n';
    out.precision(prec);
}

std::uint64_t replication_seed(std::uint64_t seed, int replication) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(replication) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

BenchReport run_bayesian_world(const Instance& supply, const DemandProcess& proc, const CalibrationTable& table,
                               const std::vector<BenchPolicy>& policies, int replications, std::uint64_t seed,
                               int workers) {
    if (replications < 0) throw Error(ErrorCode::kInvalidInput, "replications must be nonnegative");
    validate_process(proc);
    if (supply.horizon != proc.horizon || static_cast<int>(table.left.size()) != proc.horizon)
        throw Error(ErrorCode::kDimensionMismatch, "supply, process and calibration horizons differ");
    BenchReport report;
    for (const auto& p : policies) report.policies.push_back(p.label);
    if (policies.empty() || replications == 0) return report;

    const int T = proc.horizon;
    auto one = [&](int rep) {
        const std::uint64_t s = replication_seed(seed, rep);
        const World world = sample_world(proc, s);
        std::vector<PredictionInterval> intervals;
        std::vector<DemandSignal> signals;
        for (int t = 1; t <= T; ++t) {
            intervals.push_back(world_interval(world, table, t));
            signals.push_back(signal_prefix(world, t));
        }
        std::vector<BenchRecord> out;
        for (const auto& p : policies) {
            const auto start = std::chrono::steady_clock::now();
            auto policy = p.make();
            policy->reset();
            double staffed = 0.0;
            for (int t = 1; t <= T; ++t) {
                const auto d = policy->step({t, intervals[t - 1], &signals[t - 1]});
                for (double x : d.hires) staffed += x;
                for (double y : d.releases) staffed -= y;
            }
            const auto stop = std::chrono::steady_clock::now();
            const double cost = staffing_cost(supply.under_cost, supply.over_cost, staffed, world.demand());
            out.push_back({rep, p.label, cost, std::chrono::duration<double, std::milli>(stop - start).count(), s});
        }
        return out;
    };

    const int w = std::max(1, std::min(workers, replications));
    std::vector<std::vector<BenchRecord>> per_rep(replications);
    auto chunk = [&](int k) {
        for (int rep = k; rep < replications; rep += w) per_rep[rep] = one(rep);
    };
    std::vector<std::future<void>> jobs;
    for (int k = 1; k < w; ++k) jobs.push_back(std::async(std::launch::async, chunk, k));
    chunk(0);
    for (auto& j : jobs) j.get();
    for (auto& r : per_rep) report.records.insert(report.records.end(), r.begin(), r.end());
    return report;
}

namespace {

PolicySummary mean_and_error(const std::string& name, const std::vector<double>& v) {
    PolicySummary s;
    s.policy = name;
    if (v.empty()) return s;
    const double n = static_cast<double>(v.size());
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return s;
}

}  // namespace

std::vector<PolicySummary> summarize(const BenchReport& report) {
    std::vector<PolicySummary> out;
    for (const auto& p : report.policies) {
        auto s = mean_and_error(p, report.costs(p));
        for (const auto& r : report.records)
            if (r.policy == p) s.total_ms += r.runtime_ms;
        out.push_back(s);
    }
    return out;
}

PairedDifference paired_difference(const BenchReport& report, const std::string& a, const std::string& b) {
    const auto ca = report.costs(a), cb = report.costs(b);
    if (ca.size() != cb.size()) throw Error(ErrorCode::kDimensionMismatch, "unpaired policies " + a + ", " + b);
    std::vector<double> diff(ca.size());
    for (size_t i = 0; i < ca.size(); ++i) diff[i] = cb[i] - ca[i];
    const auto s = mean_and_error("", diff);
    return {s.mean, s.std_error};
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::kInvalidInput, msg); }

}  // namespace

BenchConfig parse_bench_config(const std::string& text) {
    BenchConfig cfg;
    try {
        const json j = json::parse(text);
        Instance& s = cfg.supply;
        s.n_pools = j.at("n_pools").get<int>();
        s.horizon = j.at("horizon").get<int>();
        s.pool_sizes = j.at("pool_sizes").get<std::vector<double>>();
        s.availability = j.at("availability").get<Matrix>();
        s.under_cost = j.value("under_cost", 1.0);
        s.over_cost = j.value("over_cost", 1.0);

        cfg.process.horizon = s.horizon;
        if (j.contains("process")) {
            const auto& p = j.at("process");
            cfg.process.trials = p.value("trials", 5);
            if (p.contains("prior_range")) {
                const auto r = p.at("prior_range").get<std::vector<double>>();
                if (r.size() != 2) bad("prior_range must have two entries");
                cfg.process.prior_lo = r[0];
                cfg.process.prior_hi = r[1];
            }
        }
        if (j.contains("calibration")) {
            const auto& c = j.at("calibration");
            cfg.coverage = c.value("coverage", cfg.coverage);
            cfg.calibration_draws = c.value("draws", cfg.calibration_draws);
            cfg.calibration_seed = c.value("seed", cfg.calibration_seed);
        }
        cfg.replications = j.value("replications", cfg.replications);
        cfg.seed = j.value("seed", cfg.seed);
        if (j.contains("policies")) {
            for (const auto& p : j.at("policies")) {
                BenchPolicySpec ps;
                ps.kind = p.at("kind").get<std::string>();
                ps.label = p.value("label", ps.kind);
                ps.grid_levels = p.value("grid_levels", ps.grid_levels);
                cfg.policies.push_back(ps);
            }
        }
    } catch (const json::exception& e) {
        bad(std::string("bench config: ") + e.what());
    }
    validate_process(cfg.process);
    if (cfg.replications < 1) bad("replications must be at least 1");
    Instance probe = cfg.supply;
    probe.lo0 = 0.0;
    probe.hi0 = cfg.process.max_demand();
    probe.error_bounds.assign(std::max(0, probe.horizon), 0.0);
    validate_instance(probe);
    return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bench_config(ss.str());
}

BenchPolicy make_bench_policy(const BenchPolicySpec& spec, const Instance& minimax, const DemandProcess& proc) {
    const Instance inst = minimax;
    const std::string& k = spec.kind;
    if (k == "lp_emulator") return {spec.label, [inst] { return std::make_unique<LpEmulatorPolicy>(inst); }};
    if (k == "lp_resolving") return {spec.label, [inst] { return std::make_unique<LpResolvingPolicy>(inst); }};
    if (k == "naive_greedy") return {spec.label, [inst] { return std::make_unique<NaiveGreedyPolicy>(inst); }};
    if (k == "naive_bayesian") return {spec.label, [inst] { return std::make_unique<NaiveBayesianPolicy>(inst); }};
    if (k == "empirical_mdp" || k == "full_info_mdp") {
        MdpSpec ms;
        ms.grid_levels = spec.grid_levels;
        ms.trials = proc.trials;
        ms.source = k == "empirical_mdp" ? TransitionSource::kEmpirical : TransitionSource::kTrueProcess;
        return {spec.label, [inst, ms] { return std::make_unique<MdpPolicy>(inst, ms); }};
    }
    bad("unknown policy kind '" + k + "'");
}

}  // namespace robstaff
