#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "robstaff/model.hpp"
#include "robstaff/policy.hpp"

namespace robstaff {

// Bayesian demand world: xi_t ~ U(prior_lo, prior_hi), delta_t ~ Binomial(trials, xi_t).
struct DemandProcess {
    int horizon = 0;
    int trials = 5;
    double prior_lo = 0.0;
    double prior_hi = 0.5;

    int max_demand() const { return trials * horizon; }
};

void validate_process(const DemandProcess& proc);

// One realized world. signal.partials holds all T partials and signal.trajectories
// all T sampled profiles; policies only ever see the prefix of the current day.
struct World {
    DemandProcess process;
    DemandSignal signal;
    int demand() const;
};

World sample_world(const DemandProcess& proc, std::uint64_t seed);
// the day-t view of a world: partials and trajectories of days 1..t
DemandSignal signal_prefix(const World& world, int t);

// partials: days 1..t; trajectories[tau - 1][k - 1] for tau in [1, t]
double point_estimator(std::span<const int> partials, const std::vector<std::vector<int>>& trajectories, int horizon);

struct CalibrationTable {
    double target = 0.95;
    std::size_t draws = 0;
    std::uint64_t seed = 0;
    std::vector<double> left;      // l_t
    std::vector<double> right;     // r_t
    std::vector<double> coverage;  // empirical coverage per day on the calibration draws
    // day-0 interval: quantiles of the total demand before anything is observed
    double range_lo = 0.0;
    double range_hi = 0.0;

    std::vector<double> widths() const;
    std::string to_json() const;
};

inline constexpr std::size_t kMinCalibrationDraws = 10'000;

CalibrationTable calibrate_intervals(const DemandProcess& proc, double target, std::size_t draws, std::uint64_t seed);
CalibrationTable calibration_from_json(const std::string& text);
// per-day coverage of the table's intervals on fresh worlds
std::vector<double> held_out_coverage(const DemandProcess& proc, const CalibrationTable& table, std::size_t draws,
                                      std::uint64_t seed);

PredictionInterval world_interval(const World& world, const CalibrationTable& table, int t);
PredictionSequence world_sequence(const World& world, const CalibrationTable& table);

// supply side of a benchmark instance turned into a minimax instance:
// range from the day-0 quantiles, error bounds l_t + r_t, zero inconsistency
Instance minimax_instance(const Instance& supply, const DemandProcess& proc, const CalibrationTable& table);

// smallest sample whose empirical CDF reaches q
double lower_quantile(std::vector<double> samples, double q);

// Hires toward d_hat_t = (C L_t + c R_t) / (C + c) with whatever is available today.
class NaiveGreedyPolicy : public Policy {
public:
    explicit NaiveGreedyPolicy(const Instance& inst);
    std::string name() const override { return "naive_greedy"; }
    void reset() override;
    DayDecision step(const Observation& obs) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<NaiveGreedyPolicy>(*this); }

    static double target(double lo, double hi, double under_cost, double over_cost);

private:
    Instance inst_;
    std::vector<double> used_;
    double staffed_ = 0.0;
};

// Hires toward the c/(c+C) lower quantile of realized-so-far plus each sampled future.
class NaiveBayesianPolicy : public Policy {
public:
    explicit NaiveBayesianPolicy(const Instance& inst);
    std::string name() const override { return "naive_bayesian"; }
    void reset() override;
    DayDecision step(const Observation& obs) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<NaiveBayesianPolicy>(*this); }

    static double target(const DemandSignal& signal, int t, double under_cost, double over_cost);

private:
    Instance inst_;
    std::vector<double> used_;
    double staffed_ = 0.0;
};

enum class TransitionSource { kEmpirical, kTrueProcess };

struct MdpSpec {
    int grid_levels = 21;
    TransitionSource source = TransitionSource::kEmpirical;
    int trials = 5;
    std::size_t state_cap = 50'000'000;
};

// Backward induction over (day, realized partial sum, per-pool cumulative hires on a grid).
// Remaining supply is bounded from cumulative hires: hires h made by day t-1 used at most
// h / rho_{t-1} of the pool, so every action the solver allows is feasible.
class MdpSolver {
public:
    MdpSolver(const Instance& inst, const MdpSpec& spec);

    // pmf[k - 1] is the partial-demand pmf of day k (size trials + 1); only days > first_day are read.
    // Fills the continuation tables for days first_day..T.
    void solve(int first_day, const std::vector<std::vector<double>>& pmf);

    // best grid levels to reach on `day` from `levels` having observed partial sum `sum`
    std::vector<int> best_levels(int day, int sum, const std::vector<int>& levels) const;
    // expected cost from day `day` after seeing `sum`, at current levels, acting optimally
    double value(int day, int sum, const std::vector<int>& levels) const;
    // expected cost before day first_day's partial is revealed, starting from zero hires
    double root_value(const std::vector<double>& first_pmf) const;

    double step_size(int pool) const { return steps_[pool]; }
    int levels() const { return spec_.grid_levels; }
    // highest level reachable on `day` from `level` of `pool`
    int reach(int pool, int day, int level) const;
    std::size_t state_count() const;

private:
    int flat(const std::vector<int>& levels) const;
    int sums(int day) const { return spec_.trials * day + 1; }
    void window_min(int day, std::vector<double>& table, int width) const;

    Instance inst_;
    MdpSpec spec_;
    std::vector<double> steps_;
    int cells_ = 1;            // grid points over all pools
    int first_ = 1;
    // cont_[t - first_] is [cell][sum] with sum in [0, trials * t]:
    // expected cost after reaching `cell` on day t with partial sum `sum`
    std::vector<std::vector<double>> cont_;
};

std::vector<double> binomial_pmf(int trials, double p);
// per-day empirical pmfs from the trajectories seen through day t (days > t filled)
std::vector<std::vector<double>> empirical_pmfs(const DemandSignal& signal, int t, int trials);
std::vector<std::vector<double>> true_pmfs(const std::vector<double>& priors, int trials);

class MdpPolicy : public Policy {
public:
    MdpPolicy(const Instance& inst, const MdpSpec& spec);
    std::string name() const override {
        return spec_.source == TransitionSource::kEmpirical ? "empirical_mdp" : "full_info_mdp";
    }
    void reset() override;
    DayDecision step(const Observation& obs) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<MdpPolicy>(*this); }

private:
    Instance inst_;
    MdpSpec spec_;
    MdpSolver solver_;
    std::vector<int> levels_;
};

struct BenchPolicy {
    std::string label;
    std::function<std::unique_ptr<Policy>()> make;
};

struct BenchRecord {
    int replication = 0;
    std::string policy;
    double cost = 0.0;
    double runtime_ms = 0.0;
    std::uint64_t seed = 0;
};

struct BenchReport {
    std::vector<std::string> policies;
    std::vector<BenchRecord> records;  // replication-major, policies in order

    std::vector<double> costs(const std::string& policy) const;
    void write_csv(std::ostream& out) const;
};

struct PolicySummary {
    std::string policy;
    double mean = 0.0;
    double std_error = 0.0;
    double total_ms = 0.0;
};

struct PairedDifference {
    double mean = 0.0;  // mean of cost(b) - cost(a)
    double std_error = 0.0;
};

std::uint64_t replication_seed(std::uint64_t seed, int replication);

// every policy faces the same world per replication
BenchReport run_bayesian_world(const Instance& supply, const DemandProcess& proc, const CalibrationTable& table,
                               const std::vector<BenchPolicy>& policies, int replications, std::uint64_t seed,
                               int workers = 1);

std::vector<PolicySummary> summarize(const BenchReport& report);
PairedDifference paired_difference(const BenchReport& report, const std::string& a, const std::string& b);

// A checked-in benchmark configuration.
struct BenchPolicySpec {
    std::string kind;
    std::string label;
    int grid_levels = 21;
};

struct BenchConfig {
    Instance supply;  // pools, availability, costs; range and error bounds are derived
    DemandProcess process;
    double coverage = 0.95;
    std::size_t calibration_draws = 100'000;
    std::uint64_t calibration_seed = 1;
    int replications = 100;
    std::uint64_t seed = 1;
    std::vector<BenchPolicySpec> policies;
};

BenchConfig parse_bench_config(const std::string& text);
BenchConfig load_bench_config(const std::string& path);
// kinds: lp_emulator, lp_resolving, naive_greedy, naive_bayesian, empirical_mdp, full_info_mdp
BenchPolicy make_bench_policy(const BenchPolicySpec& spec, const Instance& minimax, const DemandProcess& proc);

}  // namespace robstaff
