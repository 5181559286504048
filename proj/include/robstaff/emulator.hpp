#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "robstaff/model.hpp"

namespace robstaff {

// split a day's total over pools, scarcest availability first, each capped by its canonical hire
std::vector<double> split_scarcest_first(double total, std::span<const double> caps, std::span<const double> rho_day);

// stateless form: canonical and realized are [pool][day - 1]; realized covers days before `day`
std::vector<double> emulator_step(const Matrix& canonical, const Matrix& realized, double hi_hat, double hi0, int day,
                                  std::span<const double> rho_day);

// Online form that carries the running gap between canonical and realized totals.
class EmulatorOracle {
public:
    EmulatorOracle() = default;
    // availability is [pool][day - 1] on the same day axis as canonical
    EmulatorOracle(Matrix canonical, double hi0, Matrix availability);

    std::vector<double> step(int day, double hi_hat);
    const Matrix& canonical() const { return canonical_; }
    double canonical_total(int day) const;

private:
    Matrix canonical_;
    Matrix availability_;
    double hi0_ = 0.0;
    double gap_ = 0.0;  // sum over past days of (canonical total - realized total)
};

struct TraceRow {
    int day = 0;
    int pool = 0;
    double canonical = 0.0;
    double hired = 0.0;
    double released = 0.0;
    double hi_hat = 0.0;
    double lo_hat = 0.0;
};

struct EmulatorTrace {
    std::vector<TraceRow> rows;
    std::vector<int> critical_days;  // release mode: critical index per epoch

    void write_csv(std::ostream& out) const;
};

EmulatorTrace make_trace(const Matrix& canonical, const StaffingPlan& plan, const PredictionSequence& seq);

std::pair<StaffingPlan, EmulatorTrace> run_emulator(const Instance& inst, const Matrix& canonical,
                                                    const PredictionSequence& seq);

}  // namespace robstaff
