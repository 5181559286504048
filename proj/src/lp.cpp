#include "robstaff/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "robstaff/error.hpp"
#include "robstaff/kernels.hpp"

namespace robstaff {

int LpModel::add_variable(std::string name, double objective, std::optional<double> upper) {
    vars_.push_back({std::move(name), objective, upper});
    return static_cast<int>(vars_.size()) - 1;
}

int LpModel::add_constraint(std::string name, std::vector<LpTerm> terms, Relation relation, double rhs) {
    for (const auto& t : terms)
        if (t.var < 0 || t.var >= n_variables() || !std::isfinite(t.coef))
            throw Error(ErrorCode::kInvalidInput, "constraint " + name + " references a bad term");
    if (!std::isfinite(rhs)) throw Error(ErrorCode::kInvalidInput, "constraint " + name + " has a non-finite rhs");
    rows_.push_back({std::move(name), std::move(terms), relation, rhs});
    return static_cast<int>(rows_.size()) - 1;
}

double LpModel::max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (size_t j = 0; j < vars_.size(); ++j) {
        worst = std::max(worst, -x[j]);
        if (vars_[j].upper) worst = std::max(worst, x[j] - *vars_[j].upper);
    }
    for (const auto& row : rows_) {
        double lhs = 0.0;
        for (const auto& t : row.terms) lhs += t.coef * x[t.var];
        const double gap = lhs - row.rhs;
        switch (row.relation) {
            case Relation::kLessEq: worst = std::max(worst, gap); break;
            case Relation::kGreaterEq: worst = std::max(worst, -gap); break;
            case Relation::kEqual: worst = std::max(worst, std::abs(gap)); break;
        }
    }
    return worst;
}

double LpModel::objective_value(const std::vector<double>& x) const {
    double z = 0.0;
    for (size_t j = 0; j < vars_.size(); ++j) z += vars_[j].objective * x[j];
    return z;
}

bool LpModel::operator==(const LpModel& other) const {
    if (vars_.size() != other.vars_.size() || rows_.size() != other.rows_.size()) return false;
    for (size_t j = 0; j < vars_.size(); ++j) {
        const auto& a = vars_[j];
        const auto& b = other.vars_[j];
        if (a.name != b.name || a.objective != b.objective || a.upper != b.upper) return false;
    }
    for (size_t r = 0; r < rows_.size(); ++r) {
        const auto& a = rows_[r];
        const auto& b = other.rows_[r];
        if (a.name != b.name || a.relation != b.relation || a.rhs != b.rhs || a.terms.size() != b.terms.size())
            return false;
        for (size_t k = 0; k < a.terms.size(); ++k)
            if (a.terms[k].var != b.terms[k].var || a.terms[k].coef != b.terms[k].coef) return false;
    }
    return true;
}

namespace {

class Tableau {
public:
    Tableau(const LpModel& model, const SimplexOptions& opt) : opt_(opt), kern_(kernels::active()) {
        n_ = model.n_variables();
        struct Row {
            std::vector<LpTerm> terms;
            Relation rel;
            double rhs;
        };
        std::vector<Row> rows;
        for (const auto& c : model.constraints()) rows.push_back({c.terms, c.relation, c.rhs});
        for (int j = 0; j < n_; ++j)
            if (auto u = model.variables()[j].upper) rows.push_back({{{j, 1.0}}, Relation::kLessEq, *u});

        m_ = static_cast<int>(rows.size());
        for (auto& r : rows) {
            if (r.rhs < 0.0) {
                r.rhs = -r.rhs;
                for (auto& t : r.terms) t.coef = -t.coef;
                if (r.rel == Relation::kLessEq)
                    r.rel = Relation::kGreaterEq;
                else if (r.rel == Relation::kGreaterEq)
                    r.rel = Relation::kLessEq;
            }
        }
        int n_slack = 0, n_art = 0;
        for (const auto& r : rows) {
            if (r.rel != Relation::kEqual) ++n_slack;
            if (r.rel != Relation::kLessEq) ++n_art;
        }
        art_begin_ = n_ + n_slack;
        cols_ = art_begin_ + n_art;
        width_ = cols_ + 1;
        data_.assign(static_cast<size_t>(m_ + 2) * width_, 0.0);
        basis_.assign(m_, -1);

        int slack = n_, art = art_begin_;
        for (int i = 0; i < m_; ++i) {
            double* row = at(i);
            for (const auto& t : rows[i].terms) row[t.var] += t.coef;
            row[cols_] = rows[i].rhs;
            switch (rows[i].rel) {
                case Relation::kLessEq:
                    row[slack] = 1.0;
                    basis_[i] = slack++;
                    break;
                case Relation::kGreaterEq:
                    row[slack++] = -1.0;
                    row[art] = 1.0;
                    basis_[i] = art++;
                    break;
                case Relation::kEqual:
                    row[art] = 1.0;
                    basis_[i] = art++;
                    break;
            }
        }
        double* cost = at(m_);
        for (int j = 0; j < n_; ++j) cost[j] = model.variables()[j].objective;
        double* phase1 = at(m_ + 1);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= art_begin_) {
                kern_.axpy(-1.0, at(i), phase1, width_);
                phase1[basis_[i]] = 0.0;
            }
    }

    LpSolution solve(const LpModel& model) {
        LpSolution sol;
        if (art_begin_ < cols_) {
            if (!iterate(m_ + 1, cols_)) throw Error(ErrorCode::kNumericFailure, "phase one reported unbounded");
            double scale = 1.0;
            for (int i = 0; i < m_; ++i) scale = std::max(scale, std::abs(at(i)[cols_]));
            if (-at(m_ + 1)[cols_] > 1e-9 * scale) {
                sol.status = LpStatus::kInfeasible;
                sol.iterations = iterations_;
                return sol;
            }
            drive_out_artificials();
        }
        if (!iterate(m_, art_begin_)) {
            sol.status = LpStatus::kUnbounded;
            sol.iterations = iterations_;
            return sol;
        }
        sol.status = LpStatus::kOptimal;
        sol.iterations = iterations_;
        sol.values.assign(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= 0 && basis_[i] < n_) sol.values[basis_[i]] = std::max(0.0, at(i)[cols_]);
        sol.reduced_costs.assign(at(m_), at(m_) + n_);
        sol.objective = model.objective_value(sol.values);

        double scale = 1.0;
        for (const auto& c : model.constraints()) scale = std::max(scale, std::abs(c.rhs));
        const double viol = model.max_violation(sol.values);
        if (!(viol <= opt_.feasibility_tol * scale))
            throw Error(ErrorCode::kNumericFailure, "optimal basis violates the model by " + std::to_string(viol));
        return sol;
    }

private:
    double* at(int r) { return data_.data() + static_cast<size_t>(r) * width_; }

    void pivot(int p, int q) {
        if (++iterations_ > opt_.max_iterations)
            throw Error(ErrorCode::kNumericFailure, "simplex iteration cap reached");
        double* prow = at(p);
        const double piv = prow[q];
        if (!std::isfinite(piv) || std::abs(piv) < 1e-12) throw Error(ErrorCode::kNumericFailure, "tiny pivot element");
        kern_.scale(1.0 / piv, prow, width_);
        prow[q] = 1.0;
        for (int r = 0; r < m_ + 2; ++r) {
            if (r == p) continue;
            double* row = at(r);
            const double f = row[q];
            if (f == 0.0) continue;
            kern_.axpy(-f, prow, row, width_);
            row[q] = 0.0;
        }
        basis_[p] = q;
    }

    // Bland's rule on objective row obj over columns [0, limit); false when unbounded
    bool iterate(int obj, int limit) {
        for (;;) {
            const double* cost = at(obj);
            int q = -1;
            for (int j = 0; j < limit; ++j)
                if (cost[j] < -opt_.cost_tol) {
                    q = j;
                    break;
                }
            if (q < 0) return true;
            int p = -1;
            double best = 0.0;
            for (int i = 0; i < m_; ++i) {
                if (basis_[i] < 0) continue;
                const double a = at(i)[q];
                if (a <= opt_.pivot_tol) continue;
                const double ratio = std::max(0.0, at(i)[cols_]) / a;
                const double tie = 1e-12 * std::max(1.0, best);
                if (p < 0 || ratio < best - tie) {
                    p = i;
                    best = ratio;
                } else if (ratio <= best + tie && basis_[i] < basis_[p]) {
                    p = i;
                    best = std::min(best, ratio);
                }
            }
            if (p < 0) return false;
            pivot(p, q);
        }
    }

    void drive_out_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < art_begin_) continue;
            double* row = at(i);
            int q = -1;
            for (int j = 0; j < art_begin_; ++j)
                if (std::abs(row[j]) > opt_.pivot_tol) {
                    q = j;
                    break;
                }
            row[cols_] = 0.0;
            if (q >= 0) {
                pivot(i, q);
            } else {
                // redundant row
                std::fill(row, row + width_, 0.0);
                basis_[i] = -1;
            }
        }
    }

    SimplexOptions opt_;
    const kernels::Backend& kern_;
    int n_ = 0, m_ = 0, cols_ = 0, width_ = 0, art_begin_ = 0;
    int iterations_ = 0;
    std::vector<double> data_;
    std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LpModel& model, const SimplexOptions& options) {
    Tableau tab(model, options);
    return tab.solve(model);
}

LpSolution require_optimal(LpSolution sol) {
    if (sol.status == LpStatus::kInfeasible) throw Error(ErrorCode::kInfeasible, "linear program is infeasible");
    if (sol.status == LpStatus::kUnbounded) throw Error(ErrorCode::kUnbounded, "linear program is unbounded");
    return sol;
}

namespace {

void write_terms(std::ostream& out, const std::vector<LpTerm>& terms, const LpModel& model) {
    if (terms.empty()) {
        out << " 0";
        return;
    }
    for (const auto& t : terms) {
        out << (t.coef < 0 ? " - " : " + ");
        const double a = std::abs(t.coef);
        if (a != 1.0) out << a << ' ';
        out << model.variables()[t.var].name;
    }
}

}  // namespace

void write_lp(std::ostream& out, const LpModel& model) {
    const auto prec = out.precision(17);
    out << "Minimize\n obj:";
    std::vector<LpTerm> obj;
    for (int j = 0; j < model.n_variables(); ++j)
        if (model.variables()[j].objective != 0.0) obj.push_back({j, model.variables()[j].objective});
    write_terms(out, obj, model);
    out << "\nSubject To\n";
    for (const auto& c : model.constraints()) {
        out << ' ' << c.name << ':';
        write_terms(out, c.terms, model);
        out << (c.relation == Relation::kLessEq ? " <= " : c.relation == Relation::kGreaterEq ? " >= " : " = ")
            << c.rhs << '\n';
    }
    out << "Bounds\n";
    for (const auto& v : model.variables()) {
        if (v.upper)
            out << " 0 <= " << v.name << " <= " << *v.upper << '\n';
        else
            out << ' ' << v.name << " >= 0\n";
    }
    out << "End\n";
    out.precision(prec);
}

}  // namespace robstaff
