#pragma once

#include <vector>

#include "robstaff/emulator.hpp"
#include "robstaff/lp.hpp"
#include "robstaff/model.hpp"
#include "robstaff/policy.hpp"
#include "robstaff/programs.hpp"

namespace robstaff {

// Runs one fee epoch: emulates the canonical hires day by day and decides the
// epoch-end release from the critical index.
class ReleaseEpochRunner {
public:
    ReleaseEpochRunner(const ReleaseInstance& ri, const EpochState& state, const ReleaseProgram& prog,
                       const LpSolution& sol);

    int first_day() const { return t0_ + 1; }
    int last_day() const { return t0_ + length_; }

    // absolute day, running effective bounds after today's prediction
    DayDecision step(int day, double lo_hat, double hi_hat);
    bool finished() const { return done_; }
    const EpochState& next_state() const { return next_; }
    int critical_day() const { return critical_; }  // absolute day
    const ReleaseCanonical& canonical() const { return canon_; }

private:
    void close_epoch(DayDecision& decision, double lo_hat);

    const ReleaseInstance* ri_;
    EpochState state_;
    ReleaseSubproblem sub_;
    ReleaseCanonical canon_;
    EmulatorOracle oracle_;
    int t0_ = 0;
    int length_ = 0;
    std::vector<double> hi_hat_;  // [0..length]
    Matrix hired_;                // [pool][local day - 1]
    EpochState next_;
    int critical_ = 0;
    bool done_ = false;
};

struct EpochRun {
    StaffingPlan plan;  // full horizon, only this epoch's days filled
    EpochState next;
    int critical_day = 0;
};

EpochRun release_epoch_run(const ReleaseInstance& ri, const EpochState& state, const ReleaseProgram& prog,
                           const LpSolution& sol, const PredictionSequence& seq);

// optimal value of the day-0 release program
double release_objective(const ReleaseInstance& ri, std::size_t config_cap = kDefaultConfigurationCap);

}  // namespace robstaff
