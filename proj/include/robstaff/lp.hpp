#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace robstaff {

enum class Relation { kLessEq, kGreaterEq, kEqual };

struct LpTerm {
    int var;
    double coef;
};

struct LpVariable {
    std::string name;
    double objective = 0.0;
    std::optional<double> upper;  // lower bound is always 0
};

struct LpConstraint {
    std::string name;
    std::vector<LpTerm> terms;
    Relation relation = Relation::kLessEq;
    double rhs = 0.0;
};

// minimize c'x subject to linear rows and 0 <= x <= u
class LpModel {
public:
    int add_variable(std::string name, double objective = 0.0, std::optional<double> upper = std::nullopt);
    int add_constraint(std::string name, std::vector<LpTerm> terms, Relation relation, double rhs);
    void set_objective(int var, double coef) { vars_[var].objective = coef; }
    void set_upper(int var, std::optional<double> upper) { vars_[var].upper = upper; }

    int n_variables() const { return static_cast<int>(vars_.size()); }
    int n_constraints() const { return static_cast<int>(rows_.size()); }
    const std::vector<LpVariable>& variables() const { return vars_; }
    const std::vector<LpConstraint>& constraints() const { return rows_; }

    // largest violation of a row or bound by the point
    double max_violation(const std::vector<double>& x) const;
    double objective_value(const std::vector<double>& x) const;

    bool operator==(const LpModel& other) const;

private:
    std::vector<LpVariable> vars_;
    std::vector<LpConstraint> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
    LpStatus status = LpStatus::kInfeasible;
    double objective = 0.0;
    std::vector<double> values;
    // reduced costs of the structural columns at the final basis
    std::vector<double> reduced_costs;
    int iterations = 0;

    bool optimal() const { return status == LpStatus::kOptimal; }
};

struct SimplexOptions {
    double pivot_tol = 1e-9;
    double cost_tol = 1e-9;
    double feasibility_tol = 1e-7;
    int max_iterations = 200000;
};

// two-phase dense tableau simplex with Bland's rule; throws Error(kNumericFailure)
// when the iteration cap is hit or the final point misses the rows by more than
// feasibility_tol
LpSolution solve_lp(const LpModel& model, const SimplexOptions& options = {});

// throws Error(kInfeasible / kUnbounded) unless optimal
LpSolution require_optimal(LpSolution sol);

// CPLEX-style LP text
void write_lp(std::ostream& out, const LpModel& model);

}  // namespace robstaff
