#include "robstaff/programs.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "robstaff/error.hpp"

namespace robstaff {

namespace {

std::string xname(int i, int t) { return "x_" + std::to_string(i + 1) + "_" + std::to_string(t); }

void add_cost_row(LpModel& m, std::string name, std::vector<LpTerm> terms, int slack_var, double slope,
                  Relation rel, double rhs) {
    // sum x -/+ Gamma/slope against rhs; a zero slope leaves only Gamma >= 0
    if (slope > 0.0) {
        terms.push_back({slack_var, rel == Relation::kLessEq ? -1.0 / slope : 1.0 / slope});
        m.add_constraint(std::move(name), std::move(terms), rel, rhs);
    } else {
        m.add_constraint(std::move(name), {{slack_var, 1.0}}, Relation::kGreaterEq, 0.0);
    }
}

}  // namespace

double overstaffing_bound(const Instance& inst, int k) {
    double bound = inst.lo0;
    for (int tau = 1; tau <= k; ++tau) bound = std::max(bound, inst.hi0 - inst.delta(tau) - 2.0 * inst.eps(tau));
    return bound;
}

SingleSwitchProgram build_lp_single_switch(const Instance& inst) {
    return build_lp_resolving(inst, fresh_state(inst), 1);
}

SingleSwitchProgram build_lp_resolving(const Instance& inst, const EpochState& state, int day) {
    const int n = inst.n_pools;
    const int T = inst.horizon;
    if (day < 1 || day > T) throw Error(ErrorCode::kInfeasibleState, "resolving day outside the horizon");
    if (state.cum_hires.size() != static_cast<size_t>(n) || state.remaining_supply.size() != static_cast<size_t>(n))
        throw Error(ErrorCode::kInfeasibleState, "state does not match the pool count");
    for (double s : state.remaining_supply)
        if (s < -kFeasibilityTol || !std::isfinite(s))
            throw Error(ErrorCode::kInfeasibleState, "negative remaining supply");

    SingleSwitchProgram prog;
    prog.first_day = day;
    prog.horizon = T;
    prog.x.assign(n, std::vector<int>(T, -1));
    LpModel& m = prog.model;
    for (int i = 0; i < n; ++i)
        for (int t = day; t <= T; ++t)
            if (state.availability[i][t - 1] > 0.0) prog.x[i][t - 1] = m.add_variable(xname(i, t));
    prog.gamma = m.add_variable("gamma", 1.0);

    for (int i = 0; i < n; ++i) {
        std::vector<LpTerm> row;
        for (int t = day; t <= T; ++t)
            if (prog.x[i][t - 1] >= 0) row.push_back({prog.x[i][t - 1], 1.0 / state.availability[i][t - 1]});
        m.add_constraint("supply_" + std::to_string(i + 1), std::move(row), Relation::kLessEq,
                         std::max(0.0, state.remaining_supply[i]));
    }

    double sunk = 0.0;
    for (double z : state.cum_hires) sunk += z;
    std::vector<LpTerm> cumulative;
    double bound = state.lo;
    for (int k = day; k <= T; ++k) {
        bound = std::max(bound, state.hi - inst.delta(k) - 2.0 * inst.eps(k));
        for (int i = 0; i < n; ++i)
            if (prog.x[i][k - 1] >= 0) cumulative.push_back({prog.x[i][k - 1], 1.0});
        add_cost_row(m, "over_" + std::to_string(k), cumulative, prog.gamma, inst.over_cost, Relation::kLessEq,
                     bound - sunk);
    }
    add_cost_row(m, "under", cumulative, prog.gamma, inst.under_cost, Relation::kGreaterEq, state.hi - sunk);
    return prog;
}

Matrix extract_canonical(const LpSolution& sol, const SingleSwitchProgram& prog) {
    Matrix out = zeros(static_cast<int>(prog.x.size()), prog.horizon);
    for (size_t i = 0; i < prog.x.size(); ++i)
        for (int t = 0; t < prog.horizon; ++t)
            if (prog.x[i][t] >= 0) out[i][t] = sol.values[prog.x[i][t]];
    return out;
}

CanonicalProfile solve_canonical(const SingleSwitchProgram& prog, CanonicalRule rule) {
    const LpSolution base = require_optimal(solve_lp(prog.model));
    CanonicalProfile out{base.values[prog.gamma], extract_canonical(base, prog)};
    if (rule == CanonicalRule::kVertex) return out;

    LpModel m = prog.model;
    m.set_upper(prog.gamma, out.gamma + 1e-9 * std::max(1.0, out.gamma));
    m.set_objective(prog.gamma, 0.0);
    const double sense = rule == CanonicalRule::kEarliest ? -1.0 : 1.0;
    LpSolution last = base;
    for (int t = prog.first_day; t <= prog.horizon; ++t) {
        std::vector<LpTerm> day_total;
        for (const auto& row : prog.x)
            if (row[t - 1] >= 0) day_total.push_back({row[t - 1], 1.0});
        if (day_total.empty()) continue;
        LpModel step = m;
        for (const auto& term : day_total) step.set_objective(term.var, sense);
        last = require_optimal(solve_lp(step));
        double v = 0.0;
        for (const auto& term : day_total) v += last.values[term.var];
        const double slack = 1e-9 * std::max(1.0, std::abs(v));
        if (rule == CanonicalRule::kEarliest)
            m.add_constraint("fix_" + std::to_string(t), day_total, Relation::kGreaterEq, v - slack);
        else
            m.add_constraint("fix_" + std::to_string(t), day_total, Relation::kLessEq, v + slack);
    }
    last = require_optimal(solve_lp(m));
    out.hires = extract_canonical(last, prog);
    return out;
}

MultiStationProgram build_lp_multi_station(const MultiStationInstance& msi) {
    const Instance& base = msi.base;
    const int n = base.n_pools;
    const int T = base.horizon;
    const int M = msi.n_stations();
    MultiStationProgram prog;
    LpModel& m = prog.model;
    prog.x.assign(M, VarGrid(n, std::vector<int>(T, -1)));
    for (int j = 0; j < M; ++j)
        for (int i = 0; i < n; ++i)
            for (int t = 1; t <= T; ++t)
                if (base.rho(i, t) > 0.0)
                    prog.x[j][i][t - 1] = m.add_variable("x_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) +
                                                         "_" + std::to_string(t));
    const bool egalitarian = msi.objective == StationObjective::kMax;
    for (int j = 0; j < M; ++j) prog.gamma.push_back(m.add_variable("gamma_" + std::to_string(j + 1), egalitarian ? 0.0 : 1.0));
    if (egalitarian) prog.epigraph = m.add_variable("u", 1.0);

    for (int i = 0; i < n; ++i) {
        std::vector<LpTerm> row;
        for (int j = 0; j < M; ++j)
            for (int t = 1; t <= T; ++t)
                if (prog.x[j][i][t - 1] >= 0) row.push_back({prog.x[j][i][t - 1], 1.0 / base.rho(i, t)});
        m.add_constraint("supply_" + std::to_string(i + 1), std::move(row), Relation::kLessEq, base.pool_sizes[i]);
    }
    for (int j = 0; j < M; ++j) {
        const Station& st = msi.stations[j];
        const std::string tag = std::to_string(j + 1);
        std::vector<LpTerm> cumulative;
        double bound = st.lo0;
        for (int k = 1; k <= T; ++k) {
            bound = std::max(bound, st.hi0 - st.delta(k));
            for (int i = 0; i < n; ++i)
                if (prog.x[j][i][k - 1] >= 0) cumulative.push_back({prog.x[j][i][k - 1], 1.0});
            add_cost_row(m, "over_" + tag + "_" + std::to_string(k), cumulative, prog.gamma[j], st.over_cost,
                         Relation::kLessEq, bound);
        }
        add_cost_row(m, "under_" + tag, cumulative, prog.gamma[j], st.under_cost, Relation::kGreaterEq, st.hi0);
        if (egalitarian)
            m.add_constraint("epi_" + tag, {{prog.epigraph, 1.0}, {prog.gamma[j], -1.0}}, Relation::kGreaterEq, 0.0);
    }
    return prog;
}

std::vector<Matrix> extract_canonical(const LpSolution& sol, const MultiStationProgram& prog) {
    std::vector<Matrix> out;
    for (const auto& grid : prog.x) {
        const int n = static_cast<int>(grid.size());
        const int T = n == 0 ? 0 : static_cast<int>(grid.front().size());
        Matrix h = zeros(n, T);
        for (int i = 0; i < n; ++i)
            for (int t = 0; t < T; ++t)
                if (grid[i][t] >= 0) h[i][t] = sol.values[grid[i][t]];
        out.push_back(std::move(h));
    }
    return out;
}

JointProgram build_lp_joint_cost(const ReleaseInstance& ri) {
    const Instance& inst = ri.base;
    const int n = inst.n_pools;
    const int T = inst.horizon;
    JointProgram prog;
    LpModel& m = prog.model;
    prog.x.assign(n, std::vector<int>(T, -1));
    for (int i = 0; i < n; ++i)
        for (int t = 1; t <= T; ++t)
            if (inst.rho(i, t) > 0.0) prog.x[i][t - 1] = m.add_variable(xname(i, t));
    for (int k = 1; k <= T; ++k) prog.lambda.push_back(m.add_variable("lambda_" + std::to_string(k)));
    prog.theta = m.add_variable("theta");
    prog.epigraph = m.add_variable("u", 1.0);

    for (int i = 0; i < n; ++i) {
        std::vector<LpTerm> row;
        for (int t = 1; t <= T; ++t)
            if (prog.x[i][t - 1] >= 0) row.push_back({prog.x[i][t - 1], 1.0 / inst.rho(i, t)});
        m.add_constraint("supply_" + std::to_string(i + 1), std::move(row), Relation::kLessEq, inst.pool_sizes[i]);
    }
    std::vector<LpTerm> cumulative;
    std::vector<LpTerm> spend;  // -p x, accumulated by day
    double bound = inst.lo0;
    for (int k = 1; k <= T; ++k) {
        bound = std::max(bound, inst.hi0 - inst.delta(k));
        for (int i = 0; i < n; ++i) {
            const int v = prog.x[i][k - 1];
            if (v < 0) continue;
            cumulative.push_back({v, 1.0});
            if (ri.wage(i, k) != 0.0) spend.push_back({v, -ri.wage(i, k)});
        }
        auto over = cumulative;
        over.push_back({prog.lambda[k - 1], -1.0});
        m.add_constraint("over_" + std::to_string(k), std::move(over), Relation::kLessEq, bound);
        auto epi = spend;
        epi.push_back({prog.epigraph, 1.0});
        epi.push_back({prog.lambda[k - 1], -inst.over_cost});
        m.add_constraint("epi_over_" + std::to_string(k), std::move(epi), Relation::kGreaterEq, 0.0);
    }
    auto under = cumulative;
    under.push_back({prog.theta, 1.0});
    m.add_constraint("under", std::move(under), Relation::kGreaterEq, inst.hi0);
    auto epi = spend;
    epi.push_back({prog.epigraph, 1.0});
    epi.push_back({prog.theta, -inst.under_cost});
    m.add_constraint("epi_under", std::move(epi), Relation::kGreaterEq, 0.0);
    return prog;
}

Matrix extract_canonical(const LpSolution& sol, const JointProgram& prog) {
    const int n = static_cast<int>(prog.x.size());
    const int T = n == 0 ? 0 : static_cast<int>(prog.x.front().size());
    Matrix out = zeros(n, T);
    for (int i = 0; i < n; ++i)
        for (int t = 0; t < T; ++t)
            if (prog.x[i][t] >= 0) out[i][t] = sol.values[prog.x[i][t]];
    return out;
}

EpochState release_fresh_state(const ReleaseInstance& ri) {
    EpochState s = fresh_state(ri.base);
    s.cum_hires = ri.pre_hires.empty() ? std::vector<double>(ri.base.n_pools, 0.0) : ri.pre_hires;
    s.remaining_budget = ri.budget;
    return s;
}

ReleaseSubproblem release_subproblem(const ReleaseInstance& ri, const EpochState& state) {
    const Instance& inst = ri.base;
    const int ell = state.index;
    if (ell < 1 || ell > ri.n_epochs()) throw Error(ErrorCode::kInfeasibleState, "epoch index out of range");
    const int t0 = ri.epoch_start(ell - 1);
    ReleaseSubproblem sub;
    sub.n_pools = inst.n_pools;
    sub.horizon = inst.horizon - t0;
    sub.day_offset = t0;
    sub.epoch_offset = ell - 1;
    sub.supply = state.remaining_supply;
    sub.pre_hires = state.cum_hires;
    sub.lo0 = state.lo;
    sub.hi0 = state.hi;
    sub.rho = zeros(sub.n_pools, sub.horizon);
    sub.wages = zeros(sub.n_pools, sub.horizon);
    for (int i = 0; i < sub.n_pools; ++i) {
        const double anchor = t0 == 0 ? 1.0 : inst.rho(i, t0);
        for (int t = 1; t <= sub.horizon; ++t) {
            sub.rho[i][t - 1] = anchor > 0.0 ? inst.rho(i, t0 + t) / anchor : 0.0;
            sub.wages[i][t - 1] = ri.wage(i, t0 + t);
        }
    }
    sub.delta.assign(sub.horizon + 1, 0.0);
    sub.delta[0] = std::max(0.0, sub.hi0 - sub.lo0);
    for (int t = 1; t <= sub.horizon; ++t) sub.delta[t] = std::min(sub.delta[t - 1], inst.delta(t0 + t));
    for (int l = ell - 1; l < ri.n_epochs(); ++l) {
        sub.breaks.push_back(ri.epoch_breaks[l] - t0);
        sub.fees.push_back(ri.release_fees[l]);
    }
    sub.budget = state.remaining_budget;
    sub.under_cost = inst.under_cost;
    sub.over_cost = inst.over_cost;
    return sub;
}

std::vector<PredictionInterval> configuration_intervals(const ReleaseSubproblem& sub, const std::vector<int>& J) {
    std::vector<PredictionInterval> out;
    double lo = sub.lo0, hi = sub.hi0;
    for (int l = 0; l < sub.n_epochs(); ++l) {
        for (int t = sub.epoch_start(l) + 1; t <= sub.breaks[l]; ++t) {
            if (t <= J[l]) {
                lo = hi - sub.delta[t];
            } else {
                hi = lo + sub.delta[t];
            }
            out.push_back({lo, hi});
        }
    }
    return out;
}

std::vector<std::vector<int>> enumerate_configurations(const ReleaseSubproblem& sub, std::size_t cap) {
    double count = 1.0;
    for (int l = 0; l < sub.n_epochs(); ++l) count *= sub.breaks[l] - sub.epoch_start(l) + 1;
    if (count > static_cast<double>(cap))
        throw Error(ErrorCode::kConfigurationExplosion,
                    std::to_string(static_cast<long long>(count)) + " configurations exceed the cap of " + std::to_string(cap));
    std::vector<std::vector<int>> out;
    std::vector<int> J(sub.n_epochs());
    for (int l = 0; l < sub.n_epochs(); ++l) J[l] = sub.epoch_start(l);
    for (;;) {
        out.push_back(J);
        int l = sub.n_epochs() - 1;
        while (l >= 0 && J[l] == sub.breaks[l]) {
            J[l] = sub.epoch_start(l);
            --l;
        }
        if (l < 0) break;
        ++J[l];
    }
    return out;
}

namespace {

int epoch_of(const ReleaseSubproblem& sub, int day) {
    for (int l = 0; l < sub.n_epochs(); ++l)
        if (day <= sub.breaks[l]) return l;
    return sub.n_epochs() - 1;
}

std::vector<int> x_key(const ReleaseSubproblem& sub, int pool, int day, const std::vector<int>& J) {
    const int l = epoch_of(sub, day);
    std::vector<int> key{pool, day};
    key.insert(key.end(), J.begin(), J.begin() + l);
    key.push_back(std::min(J[l], day));
    return key;
}

std::vector<int> y_key(int pool, int epoch, const std::vector<int>& J) {
    std::vector<int> key{pool, epoch};
    key.insert(key.end(), J.begin(), J.begin() + epoch + 1);
    return key;
}

std::string key_name(char prefix, const std::vector<int>& key) {
    std::string s(1, prefix);
    for (int v : key) s += "_" + std::to_string(v);
    return s;
}

}  // namespace

int ReleaseProgram::x_var(int pool, int day, const std::vector<int>& J) const {
    auto it = x_vars.find(x_key(sub, pool, day, J));
    return it == x_vars.end() ? -1 : it->second;
}

int ReleaseProgram::y_var(int pool, int epoch, const std::vector<int>& J) const {
    auto it = y_vars.find(y_key(pool, epoch, J));
    return it == y_vars.end() ? -1 : it->second;
}

ReleaseProgram build_lp_release(const ReleaseInstance& ri, const EpochState& state, std::size_t config_cap) {
    ReleaseProgram prog;
    prog.sub = release_subproblem(ri, state);
    const ReleaseSubproblem& sub = prog.sub;
    const int n = sub.n_pools;
    const int T = sub.horizon;
    const int L = sub.n_epochs();
    prog.configs = enumerate_configurations(sub, config_cap);
    LpModel& m = prog.model;

    for (const auto& J : prog.configs) {
        for (int i = 0; i < n; ++i) {
            for (int t = 1; t <= T; ++t) {
                if (sub.rho[i][t - 1] <= 0.0) continue;
                auto key = x_key(sub, i, t, J);
                if (!prog.x_vars.count(key)) prog.x_vars.emplace(key, m.add_variable(key_name('x', key)));
            }
            for (int l = 0; l < L; ++l) {
                if (sub.fees[l].forbidden) continue;
                auto key = y_key(i, l, J);
                if (!prog.y_vars.count(key)) prog.y_vars.emplace(key, m.add_variable(key_name('y', key)));
            }
        }
    }
    for (size_t c = 0; c < prog.configs.size(); ++c) {
        prog.lambda.push_back(m.add_variable("lambda_" + std::to_string(c)));
        prog.theta.push_back(m.add_variable("theta_" + std::to_string(c)));
    }
    prog.epigraph = m.add_variable("u", 1.0);

    double sunk = 0.0;
    for (double z : sub.pre_hires) sunk += z;
    std::set<std::vector<int>> release_rows;
    for (size_t c = 0; c < prog.configs.size(); ++c) {
        const auto& J = prog.configs[c];
        const std::string tag = std::to_string(c);
        std::vector<LpTerm> net;
        std::vector<LpTerm> spend;
        for (int i = 0; i < n; ++i) {
            std::vector<LpTerm> supply;
            for (int t = 1; t <= T; ++t) {
                const int v = prog.x_var(i, t, J);
                if (v < 0) continue;
                supply.push_back({v, 1.0 / sub.rho[i][t - 1]});
                net.push_back({v, 1.0});
                if (sub.wages[i][t - 1] != 0.0) spend.push_back({v, sub.wages[i][t - 1]});
            }
            m.add_constraint("supply_" + std::to_string(i + 1) + "_" + tag, std::move(supply), Relation::kLessEq,
                             std::max(0.0, sub.supply[i]));
            std::vector<LpTerm> released;
            for (int l = 0; l < L; ++l) {
                const int y = prog.y_var(i, l, J);
                if (y < 0) continue;
                released.push_back({y, 1.0});
                net.push_back({y, -1.0});
                if (sub.fees[l].value != 0.0) spend.push_back({y, sub.fees[l].value});
                if (!release_rows.insert(y_key(i, l, J)).second) continue;
                auto row = released;
                for (int t = 1; t <= sub.breaks[l]; ++t) {
                    const int v = prog.x_var(i, t, J);
                    if (v >= 0) row.push_back({v, -1.0});
                }
                m.add_constraint("release_" + key_name('r', y_key(i, l, J)), std::move(row), Relation::kLessEq,
                                 sub.pre_hires[i]);
            }
        }
        if (sub.budget) m.add_constraint("budget_" + tag, spend, Relation::kLessEq, std::max(0.0, *sub.budget));
        const auto seq = configuration_intervals(sub, J);
        const double lo_T = T == 0 ? sub.lo0 : seq.back().lo;
        const double hi_T = T == 0 ? sub.hi0 : seq.back().hi;
        auto over = net;
        over.push_back({prog.lambda[c], -1.0});
        m.add_constraint("over_" + tag, std::move(over), Relation::kLessEq, lo_T - sunk);
        auto under = net;
        under.push_back({prog.theta[c], 1.0});
        m.add_constraint("under_" + tag, std::move(under), Relation::kGreaterEq, hi_T - sunk);
        m.add_constraint("epi_under_" + tag, {{prog.epigraph, 1.0}, {prog.theta[c], -sub.under_cost}},
                         Relation::kGreaterEq, 0.0);
        m.add_constraint("epi_over_" + tag, {{prog.epigraph, 1.0}, {prog.lambda[c], -sub.over_cost}},
                         Relation::kGreaterEq, 0.0);
    }
    return prog;
}

ReleaseCanonical extract_canonical(const LpSolution& sol, const ReleaseProgram& prog) {
    const ReleaseSubproblem& sub = prog.sub;
    const int n = sub.n_pools;
    const int end = sub.breaks.front();
    ReleaseCanonical out;
    out.hires = zeros(n, end);
    std::vector<int> J(sub.n_epochs());
    for (int l = 0; l < sub.n_epochs(); ++l) J[l] = sub.epoch_start(l);
    J[0] = end;
    for (int i = 0; i < n; ++i)
        for (int t = 1; t <= end; ++t) {
            const int v = prog.x_var(i, t, J);
            if (v >= 0) out.hires[i][t - 1] = sol.values[v];
        }
    out.releases.assign(end + 1, std::vector<double>(n, 0.0));
    for (int k = 0; k <= end; ++k) {
        J[0] = k;
        for (int i = 0; i < n; ++i) {
            const int y = prog.y_var(i, 0, J);
            if (y >= 0) out.releases[k][i] = sol.values[y];
        }
    }
    return out;
}

}  // namespace robstaff
