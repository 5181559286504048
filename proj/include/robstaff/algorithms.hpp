#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robstaff/emulator.hpp"
#include "robstaff/model.hpp"
#include "robstaff/policy.hpp"
#include "robstaff/programs.hpp"
#include "robstaff/release.hpp"

namespace robstaff {

// running effective bounds seen by an online policy
struct BoundsTracker {
    double lo = 0.0;
    double hi = 0.0;

    static BoundsTracker start(double lo0, double hi0) { return {lo0, hi0}; }
    void observe(const PredictionInterval& p, double eps);
};

enum class FixedPointBranch { kLowSupply, kFixedPoint };

struct FixedPointResult {
    double gamma_star = 0.0;
    FixedPointBranch branch = FixedPointBranch::kFixedPoint;
    int t_dagger = 0;  // last day with a positive hire under the worst-case sequence
};

StaffingPlan greedy_target_overstaffing(const Instance& inst, double gamma, const PredictionSequence& seq);
// understaffing cost of the greedy plan against the worst-case sequence and d = R0
double greedy_understaffing(const Instance& inst, double gamma);
FixedPointResult gamma_star_single_pool(const Instance& inst);

// single pool, rho_t = eta^t, Delta_t = 1 - delta^(T - t), demand range [0, 1]
Instance closed_form_instance(double s, double eta, double delta, int T, double c, double C);
double gamma_star_closed_form(double s, double eta, double delta, int T, double c, double C);

// two pools of size s (fixed workers until day 4, S-shaped ready workers), range [0, 2s],
// Delta_t = 1/sqrt(t eta) - 1/sqrt((T + 1) eta)
Instance convergence_rate_instance(int T, double s, double c, double C, double eta);

class GreedyTargetPolicy : public Policy {
public:
    GreedyTargetPolicy(const Instance& inst, double gamma);
    std::string name() const override { return "greedy_target"; }
    void reset() override;
    DayDecision step(const Observation& obs) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<GreedyTargetPolicy>(*this); }

private:
    Instance inst_;
    double gamma_;
    BoundsTracker bounds_;
    double prev_lo_ = 0.0;
    double used_ = 0.0;
};

class LpEmulatorPolicy : public Policy {
public:
    explicit LpEmulatorPolicy(const Instance& inst, CanonicalRule rule = CanonicalRule::kVertex);
    LpEmulatorPolicy(const Instance& inst, CanonicalProfile canonical);
    std::string name() const override { return "lp_emulator"; }
    void reset() override;
    DayDecision step(const Observation& obs) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<LpEmulatorPolicy>(*this); }

    const Instance& instance() const { return inst_; }
    double gamma() const { return canon_.gamma; }
    const Matrix& canonical() const { return canon_.hires; }

private:
    Instance inst_;
    CanonicalProfile canon_;
    EmulatorOracle oracle_;
    BoundsTracker bounds_;
};

class LpResolvingPolicy : public Policy {
public:
    explicit LpResolvingPolicy(const Instance& inst, CanonicalRule rule = CanonicalRule::kVertex);
    std::string name() const override { return "lp_resolving"; }
    void reset() override;
    DayDecision step(const Observation& obs) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<LpResolvingPolicy>(*this); }

    const EpochState& state() const { return state_; }
    double last_gamma() const { return last_gamma_; }

private:
    Instance inst_;
    CanonicalRule rule_;
    EpochState state_;
    double last_gamma_ = 0.0;
};

class ReleasePolicy : public Policy {
public:
    explicit ReleasePolicy(const ReleaseInstance& ri, std::size_t config_cap = kDefaultConfigurationCap,
                           bool allow_reduction = true);
    std::string name() const override { return "release"; }
    void reset() override;
    DayDecision step(const Observation& obs) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<ReleasePolicy>(*this); }

    // true when the instance is the base problem and the policy delegates to the base emulator
    bool reduced() const { return base_.has_value(); }
    const std::vector<int>& critical_days() const { return critical_; }

private:
    std::shared_ptr<const ReleaseInstance> ri_;  // shared so clones keep the runner's reference valid
    std::size_t cap_;
    std::optional<LpEmulatorPolicy> base_;
    EpochState state_;
    std::optional<ReleaseEpochRunner> runner_;
    BoundsTracker bounds_;
    std::vector<int> critical_;
};

class JointCostPolicy : public Policy {
public:
    explicit JointCostPolicy(const ReleaseInstance& ri);
    std::string name() const override { return "joint"; }
    void reset() override { emu_.reset(); }
    DayDecision step(const Observation& obs) override { return emu_.step(obs); }
    std::unique_ptr<Policy> clone() const override { return std::make_unique<JointCostPolicy>(*this); }

    double objective() const { return objective_; }
    const Matrix& canonical() const { return emu_.canonical(); }

private:
    double objective_ = 0.0;
    LpEmulatorPolicy emu_;
};

double joint_objective(const ReleaseInstance& ri);

// Per-station emulators over a shared canonical solution.
class MultiStationPolicy {
public:
    explicit MultiStationPolicy(const MultiStationInstance& msi);
    void reset();
    // one interval per station; returns hires [station][pool]
    std::vector<std::vector<double>> step(int day, const std::vector<PredictionInterval>& intervals);
    std::vector<StaffingPlan> run(const std::vector<PredictionSequence>& seqs);

    double objective() const { return objective_; }
    const std::vector<double>& station_gammas() const { return gammas_; }
    const std::vector<Matrix>& canonical() const { return canon_; }

private:
    MultiStationInstance msi_;
    double objective_ = 0.0;
    std::vector<double> gammas_;
    std::vector<Matrix> canon_;
    std::vector<LpEmulatorPolicy> stations_;
};

enum class ShockScenario { kDetectBeforeHiring, kNoDetect };

class MiscoverageWrapper : public Policy {
public:
    // shocked[t - 1] marks a bad-event day; only read on that day in detect mode
    MiscoverageWrapper(const Policy& base, ShockScenario scenario, std::vector<bool> shocked);
    std::string name() const override { return "miscoverage"; }
    void reset() override;
    DayDecision step(const Observation& obs) override;
    std::unique_ptr<Policy> clone() const override { return std::make_unique<MiscoverageWrapper>(*this); }

private:
    LpEmulatorPolicy base_;
    ShockScenario scenario_;
    std::vector<bool> shocked_;
    std::vector<PredictionInterval> seen_;
};

}  // namespace robstaff
