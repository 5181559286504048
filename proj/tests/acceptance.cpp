// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "robstaff/adversary.hpp"
#include "robstaff/algorithms.hpp"
#include "robstaff/benchmarks.hpp"
#include "robstaff/error.hpp"
#include "robstaff/io.hpp"
#include "robstaff/programs.hpp"
#include "robstaff/release.hpp"
#include "support.hpp"

using namespace robstaff;
using robstaff::testing::data_path;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double lp_gamma(const Instance& inst) { return require_optimal(solve_lp(build_lp_single_switch(inst).model)).objective; }

// small certification instances: single pool T = 2, 3 and two pools T = 2
std::vector<Instance> oracle_instances() {
    std::vector<Instance> out;
    for (int T : {2, 3}) {
        Instance inst;
        inst.n_pools = 1;
        inst.horizon = T;
        inst.pool_sizes = {0.8};
        inst.availability = {{}};
        for (int t = 1; t <= T; ++t) inst.availability[0].push_back(1.0 - 0.2 * t / T);
        inst.lo0 = 0.0;
        inst.hi0 = 1.0;
        for (int t = 1; t <= T; ++t) inst.error_bounds.push_back(std::max(0.1, 1.0 - 0.3 * t));
        inst.error_bounds.back() = 0.1;
        inst.under_cost = 1.0;
        inst.over_cost = 2.0;
        out.push_back(validate_instance(inst));
    }
    Instance two;
    two.n_pools = 2;
    two.horizon = 2;
    two.pool_sizes = {0.4, 0.5};
    two.availability = {{1.0, 0.0}, {0.9, 0.5}};
    two.lo0 = 0.0;
    two.hi0 = 1.0;
    two.error_bounds = {0.5, 0.25};
    two.under_cost = 1.5;
    two.over_cost = 1.0;
    out.push_back(validate_instance(two));
    return out;
}

Verdict single_pool_reproduction() {
    const double want[] = {0.0, 0.476, 0.338};
    const double tol[] = {1e-6, 5e-3, 5e-3};
    const char* files[] = {"single_pool_a.json", "single_pool_b.json", "single_pool_c.json"};
    bool ok = true;
    std::ostringstream os;
    for (int k = 0; k < 3; ++k) {
        const auto t0 = Clock::now();
        const double g = solve_canonical(build_lp_single_switch(load_problem(data_path(files[k])).base)).gamma;
        const double sec = seconds_since(t0);
        ok = ok && std::abs(g - want[k]) <= tol[k] && sec < 1.0;
        os << files[k] << '=' << fmt("%.6f", g) << " (" << fmt("%.3f", sec) << "s) ";
    }
    return {ok, os.str()};
}

Verdict fixed_point_equivalence() {
    std::mt19937_64 rng(20240601);
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const Instance inst = robstaff::testing::random_single_pool(rng, 10);
        worst = std::max(worst, std::abs(gamma_star_single_pool(inst).gamma_star - lp_gamma(inst)));
    }
    const double sec = seconds_since(t0);
    return {worst <= 1e-6 && sec < 10.0, "max |fixed point - LP| " + fmt("%.3g", worst) + ", " + fmt("%.2f", sec) + "s"};
}

Verdict closed_form() {
    int ok = 0, total = 0, domain = 0;
    double worst = 0.0;
    for (double eta : {0.25, 0.5, 1.0, 2.0})
        for (double delta : {0.3, 0.5, 0.8})
            for (double s : {0.3, 0.6, 1.5, 4.0}) {
                ++total;
                try {
                    const double cf = gamma_star_closed_form(s, eta, delta, 10, 1.0, 1.0);
                    const double lp = require_optimal(solve_lp(build_lp_single_switch(closed_form_instance(s, eta, delta, 10, 1.0, 1.0)).model)).objective;
                    worst = std::max(worst, std::abs(cf - lp));
                    if (std::abs(cf - lp) <= 1e-6) ++ok;
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::kParameterOutOfRange) ++domain;
                }
            }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " cells within 1e-6 (max err " +
                             fmt("%.2g", worst) + "); " + std::to_string(domain) +
                             " cells with eta > 1 rejected as out of range"};
}

Verdict emulator_invariants() {
    std::mt19937_64 rng(777);
    int unsolvable = 0, above = 0, lemma = 0, infeasible = 0;
    const int cases = 10000;
    for (int k = 0; k < cases; ++k) {
        const Instance inst = robstaff::testing::random_instance(rng);
        const auto seq = random_nested_sequence(inst, rng());
        LpEmulatorPolicy emu(inst);
        StaffingPlan plan;
        try {
            plan = run_policy(emu, inst.n_pools, seq);
        } catch (const Error&) {
            ++unsolvable;
            continue;
        }
        const Matrix& canon = emu.canonical();
        const double slack = 1e-9 * std::max(1.0, inst.hi0);
        bool over = false;
        double canon_total = 0.0, run_max = -1e300, prefix = 0.0;
        for (int t = 1; t <= inst.horizon; ++t) {
            for (int i = 0; i < inst.n_pools; ++i) {
                over = over || plan.hires[i][t - 1] > canon[i][t - 1] + slack;
                prefix += canon[i][t - 1];
            }
            run_max = std::max(run_max, prefix - overstaffing_bound(inst, t));
        }
        canon_total = prefix;
        const int T = inst.horizon;
        const double total = plan.total_hires();
        const bool over_ok = total - seq.effective_lo(T) <= std::max(0.0, run_max) + slack;
        const bool under_ok = seq.effective_hi(T) - total <= inst.hi0 - canon_total + slack;
        above += over;
        lemma += !(over_ok && under_ok);
        infeasible += !check_feasibility(inst, plan).ok;
    }
    std::ostringstream os;
    os << cases << " cases: unsolvable " << unsolvable << ", x > canonical " << above << ", bound violations " << lemma
       << ", infeasible plans " << infeasible;
    return {unsolvable + above + lemma + infeasible == 0, os.str()};
}

Verdict brute_force_certification() {
    const auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream os;
    GridOptions g;
    g.grid_step = 0.25;
    for (const auto& inst : oracle_instances()) {
        LpEmulatorPolicy emu(inst);
        const double gamma = emu.gamma();
        const auto grid = brute_force_worst_case(inst, emu, g);
        const auto ss = single_switch_worst_case(inst, emu);
        NaiveGreedyPolicy naive(inst);
        const auto heur = brute_force_worst_case(inst, naive, g);
        ok = ok && grid.cost <= gamma + 1e-6 && ss.cost >= gamma - 1e-6 && heur.cost >= gamma - 1e-6;
        os << "T=" << inst.horizon << ",n=" << inst.n_pools << ": G*=" << fmt("%.6f", gamma)
           << " grid=" << fmt("%.6f", grid.cost) << " switch=" << fmt("%.6f", ss.cost)
           << " naive=" << fmt("%.6f", heur.cost) << "; ";
    }
    const double sec = seconds_since(t0);
    os << fmt("%.2f", sec) << "s";
    return {ok && sec < 60.0, os.str()};
}

Verdict resolving_equivalence() {
    const Instance inst = load_problem(data_path("single_pool_b.json")).base;
    LpEmulatorPolicy emu(inst);
    LpResolvingPolicy res(inst);
    double diff = 0.0;
    for (int k = 1; k <= inst.horizon; ++k) {
        const auto seq = single_switch_sequence(inst, k);
        const auto a = run_policy(emu, 1, seq), b = run_policy(res, 1, seq);
        for (int t = 0; t < inst.horizon; ++t) diff = std::max(diff, std::abs(a.hires[0][t] - b.hires[0][t]));
    }
    bool ok = diff <= 1e-9;
    std::ostringstream os;
    os << "single_pool_b max plan diff " << fmt("%.2g", diff) << "; grid worst vs G*:";
    for (const auto& small : oracle_instances()) {
        LpResolvingPolicy r(small);
        const double gamma = lp_gamma(small);
        const double worst = brute_force_worst_case(small, r, {0.25}).cost;
        ok = ok && worst <= gamma + 1e-6;
        os << ' ' << fmt("%.6f", worst) << '/' << fmt("%.6f", gamma);
    }
    return {ok, os.str()};
}

Verdict release_reduction_and_bounds() {
    bool ok = true;
    std::ostringstream os;
    // reduction: the plain release instance replays the emulator exactly
    int mismatches = 0, runs = 0;
    std::vector<Instance> bases;
    for (const char* f : {"single_pool_a.json", "single_pool_b.json", "single_pool_c.json"}) bases.push_back(load_problem(data_path(f)).base);
    std::mt19937_64 rng(99);
    for (int k = 0; k < 20; ++k) bases.push_back(robstaff::testing::random_instance(rng));
    for (const auto& inst : bases) {
        LpEmulatorPolicy emu(inst);
        ReleasePolicy rel(plain_release_instance(inst));
        std::vector<PredictionSequence> seqs;
        for (int k = 1; k <= inst.horizon; ++k) seqs.push_back(single_switch_sequence(inst, k));
        for (int r = 0; r < 5; ++r) seqs.push_back(random_nested_sequence(inst, rng()));
        for (const auto& seq : seqs) {
            ++runs;
            const auto a = run_policy(emu, inst.n_pools, seq), b = run_policy(rel, inst.n_pools, seq);
            mismatches += !(a.hires == b.hires && a.releases == b.releases);
        }
    }
    ok = mismatches == 0;
    os << "reduction " << runs - mismatches << "/" << runs << " identical; ";

    const ReleaseInstance base = load_problem(data_path("release_t4.json")).release.value();
    std::vector<ReleaseInstance> variants(3, base);
    variants[1].release_fees = {ReleaseFee::finite(0.0), ReleaseFee::infinite()};
    variants[2].release_fees = {ReleaseFee::finite(0.3), ReleaseFee::finite(0.1)};
    variants[2].budget = 0.5;
    variants[2].wages = {{0.1, 0.1, 0.2, 0.2}, {0.05, 0.05, 0.1, 0.1}};
    for (auto& ri : variants) {
        ri = validate_instance(ri);
        const double obj = release_objective(ri);
        ReleasePolicy pol(ri, kDefaultConfigurationCap, false);
        const auto conf = configuration_worst_case(ri, pol);
        const auto grid = brute_force_worst_case(ri.base, pol, {0.5});
        bool feasible = check_feasibility(ri, run_policy(pol, ri.base.n_pools, make_sequence(ri.base, grid.sequence))).ok;
        const auto sub = release_subproblem(ri, release_fresh_state(ri));
        for (const auto& J : enumerate_configurations(sub, kDefaultConfigurationCap))
            feasible = feasible && check_feasibility(ri, run_policy(pol, ri.base.n_pools, configuration_sequence(ri, J))).ok;
        ok = ok && conf.cost <= obj + 1e-6 && grid.cost <= obj + 1e-6 && feasible;
        os << "obj " << fmt("%.6f", obj) << " config " << fmt("%.6f", conf.cost) << " grid " << fmt("%.6f", grid.cost)
           << (feasible ? " feasible; " : " INFEASIBLE; ");
    }
    return {ok, os.str()};
}

Verdict multi_station() {
    bool ok = true;
    std::ostringstream os;
    const MultiStationInstance base = load_problem(data_path("multi_t2.json")).multi.value();
    std::mt19937_64 rng(5);
    for (auto obj : {StationObjective::kMax, StationObjective::kSum}) {
        MultiStationInstance msi = base;
        msi.objective = obj;
        msi = validate_instance(msi);
        MultiStationPolicy joint(msi);
        std::vector<LpEmulatorPolicy> alone;
        for (int j = 0; j < msi.n_stations(); ++j)
            alone.emplace_back(msi.station_instance(j), CanonicalProfile{joint.station_gammas()[j], joint.canonical()[j]});
        int mismatches = 0;
        for (int r = 0; r < 50; ++r) {
            std::vector<PredictionSequence> seqs;
            for (int j = 0; j < msi.n_stations(); ++j) seqs.push_back(random_nested_sequence(msi.station_instance(j), rng()));
            const auto plans = joint.run(seqs);
            for (int j = 0; j < msi.n_stations(); ++j)
                mismatches += !(run_policy(alone[j], msi.base.n_pools, seqs[j]).hires == plans[j].hires);
        }
        std::vector<const Policy*> ptrs;
        for (const auto& p : alone) ptrs.push_back(&p);
        const auto worst = brute_force_multi_station(msi, ptrs, {0.25});
        ok = ok && mismatches == 0 && worst.aggregate <= joint.objective() + 1e-6;
        os << (obj == StationObjective::kMax ? "max" : "sum") << ": independence mismatches " << mismatches
           << ", grid " << fmt("%.6f", worst.aggregate) << " <= LP " << fmt("%.6f", joint.objective()) << "; ";
    }
    return {ok, os.str()};
}

Verdict bayesian_benchmark() {
    bool ok = true;
    std::ostringstream os;
    for (const char* f : {"bench_short.json", "bench_long.json"}) {
        const auto cfg = load_bench_config(data_path(f));
        const auto table = calibrate_intervals(cfg.process, cfg.coverage, cfg.calibration_draws, cfg.calibration_seed);
        const auto inst = minimax_instance(cfg.supply, cfg.process, table);
        std::vector<BenchPolicy> policies;
        for (const auto& spec : cfg.policies)
            if (spec.kind.find("mdp") == std::string::npos) policies.push_back(make_bench_policy(spec, inst, cfg.process));
        const auto rep = run_bayesian_world(cfg.supply, cfg.process, table, policies, cfg.replications, cfg.seed, 4);
        // b - a must be positive at two standard errors
        auto beats = [&](const char* a, const char* b) {
            const auto d = paired_difference(rep, a, b);
            const double z = d.std_error > 0.0 ? d.mean / d.std_error : 0.0;
            os << b << '-' << a << " z=" << fmt("%.2f", z) << ' ';
            return z >= 2.0;
        };
        os << "T=" << cfg.process.horizon << " [";
        for (const auto& s : summarize(rep)) os << s.policy << ' ' << fmt("%.3f", s.mean) << ' ';
        os << "] ";
        const bool a = beats("minimax_opt_pp", "minimax_opt");
        const bool b = beats("minimax_opt", "naive_greedy");
        const bool c = beats("minimax_opt_pp", "naive_bayesian");
        ok = ok && a && b && c;
        os << "; ";
    }
    return {ok, os.str()};
}

Verdict mdp_sanity() {
    std::ostringstream os;
    bool ok = true;
    // T = 1: the partial is seen before hiring, so the MDP solves a grid newsvendor on known demand
    Instance one;
    one.n_pools = 2;
    one.horizon = 1;
    one.pool_sizes = {5.0, 5.0};
    one.availability = {{1.0}, {0.88}};
    one.lo0 = 0.0;
    one.hi0 = 5.0;
    one.error_bounds = {0.0};
    one.under_cost = 1.0;
    one.over_cost = 3.0;
    one = validate_instance(one);
    MdpSpec spec;
    spec.grid_levels = 21;
    MdpSolver solver(one, spec);
    solver.solve(1, {binomial_pmf(5, 0.3)});
    int exact = 0;
    for (int d = 0; d <= 5; ++d) {
        double best = 1e300;
        for (int a = 0; a <= solver.reach(0, 1, 0); ++a)
            for (int b = 0; b <= solver.reach(1, 1, 0); ++b)
                best = std::min(best, staffing_cost(1.0, 3.0, a * solver.step_size(0) + b * solver.step_size(1), d));
        exact += solver.value(1, d, {0, 0}) == best;
    }
    ok = exact == 6;
    os << "T=1 newsvendor matches " << exact << "/6; ";

    // T = 2: empirical pmfs from 1e5 samples against the true pmfs
    Instance two = one;
    two.horizon = 2;
    two.availability = {{1.0, 0.0}, {0.88, 0.73}};
    two.error_bounds = {0.0, 0.0};
    two.inconsistency.clear();
    two.hi0 = 10.0;
    two.under_cost = 1.0;
    two.over_cost = 1.0;
    two = validate_instance(two);
    std::mt19937_64 rng(31);
    const std::vector<double> priors{0.17, 0.41};
    const auto truth = true_pmfs(priors, 5);
    std::vector<std::vector<double>> emp(2, std::vector<double>(6, 0.0));
    const int n = 100000;
    for (int k = 0; k < 2; ++k) {
        std::binomial_distribution<int> draw(5, priors[k]);
        for (int j = 0; j < n; ++j) emp[k][draw(rng)] += 1.0 / n;
    }
    MdpSolver full(two, spec), est(two, spec);
    full.solve(1, truth);
    est.solve(1, emp);
    const double v_full = full.root_value(truth[0]);
    double v_emp = 0.0;  // the empirical policy's expected cost under the true process
    for (int d1 = 0; d1 <= 5; ++d1) {
        const auto l1 = est.best_levels(1, d1, {0, 0});
        for (int d2 = 0; d2 <= 5; ++d2) {
            const auto l2 = est.best_levels(2, d1 + d2, l1);
            const double staffed = l2[0] * est.step_size(0) + l2[1] * est.step_size(1);
            v_emp += truth[0][d1] * truth[1][d2] * staffing_cost(1.0, 1.0, staffed, d1 + d2);
        }
    }
    const double rel = (v_emp - v_full) / v_full;
    ok = ok && std::abs(rel) <= 0.05;
    os << "T=2 full-info " << fmt("%.6f", v_full) << ", empirical policy " << fmt("%.6f", v_emp) << " (" << fmt("%+.3f", 100 * rel) << "%)";
    return {ok, os.str()};
}

Verdict comparative_statics() {
    std::ostringstream os;
    bool ok = true;
    double prev = 0.0;
    bool first = true;
    for (double eta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double g = lp_gamma(convergence_rate_instance(14, 1.0, 1.0, 1.0, eta));
        if (!first && g > prev + 1e-9) ok = false;
        first = false;
        prev = g;
        os << "eta " << eta << ": " << fmt("%.6f", g) << "; ";
    }
    return {ok, os.str()};
}

Verdict miscoverage() {
    const Instance inst = load_problem(data_path("single_pool_b.json")).base;
    const LpEmulatorPolicy base(inst);
    const double deltas[] = {0.0, 0.05, 0.1};
    double mean[3] = {0.0, 0.0, 0.0};
    int identical = 0;
    const int reps = 1000;
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int r = 0; r < reps; ++r) {
        const auto seq = random_nested_sequence(inst, rng());
        LpEmulatorPolicy clean = base;
        const auto clean_plan = run_policy(clean, 1, seq);
        const double d = worst_demand(inst, clean_plan, seq).demand;
        const double clean_cost = staffing_cost(inst, clean_plan, d);
        // one uniform per day couples the shock sets across delta
        std::vector<double> draw(inst.horizon);
        std::vector<PredictionInterval> bad(inst.horizon);
        for (int t = 0; t < inst.horizon; ++t) {
            draw[t] = u(rng);
            const double a = u(rng), b = u(rng);
            bad[t] = {std::min(a, b), std::max(a, b)};
        }
        for (int k = 0; k < 3; ++k) {
            std::vector<bool> shocked(inst.horizon);
            std::vector<PredictionInterval> seen = seq.intervals();
            for (int t = 0; t < inst.horizon; ++t) {
                shocked[t] = draw[t] < deltas[k];
                if (shocked[t]) seen[t] = bad[t];
            }
            MiscoverageWrapper w(base, ShockScenario::kDetectBeforeHiring, shocked);
            const auto plan = run_policy(w, 1, PredictionSequence(seen, inst.lo0, inst.hi0));
            mean[k] += (staffing_cost(inst, plan, d) - clean_cost) / reps;
            if (k == 0) identical += plan.hires == clean_plan.hires;
        }
    }
    const bool ok = identical == reps && mean[1] >= mean[0] && mean[2] >= mean[1];
    std::ostringstream os;
    os << "mean extra cost " << fmt("%.6f", mean[0]) << ", " << fmt("%.6f", mean[1]) << ", " << fmt("%.6f", mean[2])
       << "; delta=0 identical " << identical << "/" << reps;
    return {ok, os.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"single-pool gamma reproduction", single_pool_reproduction},
        {"fixed point equals LP", fixed_point_equivalence},
        {"closed form equals LP", closed_form},
        {"emulator invariant fuzz", emulator_invariants},
        {"brute-force minimax certification", brute_force_certification},
        {"resolving equivalence", resolving_equivalence},
        {"release reduction and bounds", release_reduction_and_bounds},
        {"multi-station", multi_station},
        {"bayesian benchmark ordering", bayesian_benchmark},
        {"mdp sanity", mdp_sanity},
        {"comparative statics", comparative_statics},
        {"miscoverage wrapper", miscoverage},
    };
    int failed = 0;
    for (size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += !v.pass;
        std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, v.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
