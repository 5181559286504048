#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "robstaff/adversary.hpp"
#include "robstaff/algorithms.hpp"
#include "robstaff/benchmarks.hpp"
#include "robstaff/emulator.hpp"
#include "robstaff/error.hpp"
#include "robstaff/io.hpp"
#include "robstaff/programs.hpp"
#include "robstaff/release.hpp"

using namespace robstaff;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::kInvalidInput, msg); }

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) bad("cannot write " + path);
    out << text;
}

struct Options {
    std::string instance;
    std::string program = "single_switch";
    std::string policy = "lp_emulator";
    std::string bench_policy = "all";
    std::string sequence = "worst";
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int reps = 0;
    int workers = 1;
    double grid_step = 0.25;
    double demand = std::nan("");
    int horizon = 14;
    double supply = 1.0;
    double under = 1.0;
    double over = 1.0;
    std::vector<double> etas{0.25, 0.5, 1.0, 2.0, 4.0};
};

int cmd_solve(const Options& o) {
    const auto pf = load_problem(o.instance);
    json dump;
    double value = 0.0;
    if (o.program == "single_switch") {
        const auto canon = solve_canonical(build_lp_single_switch(pf.base));
        value = canon.gamma;
        dump = {{"program", o.program}, {"gamma", canon.gamma}, {"canonical", canon.hires}};
    } else if (o.program == "multi_station") {
        if (!pf.multi) bad("instance has no stations");
        const MultiStationPolicy msp(*pf.multi);
        value = msp.objective();
        dump = {{"program", o.program},
                {"objective", value},
                {"station_gammas", msp.station_gammas()},
                {"canonical", msp.canonical()}};
    } else if (o.program == "release") {
        const auto ri = pf.release ? *pf.release : plain_release_instance(pf.base);
        value = release_objective(ri);
        dump = {{"program", o.program}, {"objective", value}};
    } else if (o.program == "joint") {
        const auto ri = pf.release ? *pf.release : plain_release_instance(pf.base);
        const JointCostPolicy jp(ri);
        value = jp.objective();
        dump = {{"program", o.program}, {"objective", value}, {"canonical", jp.canonical()}};
    } else {
        bad("unknown program '" + o.program + "'");
    }
    std::cout << "objective " << fixed6(value) << '\n';
    if (!o.out.empty()) write_text(o.out, dump.dump(2) + "\n");
    return 0;
}

PredictionSequence sequence_from_spec(const Instance& inst, const std::string& spec) {
    if (spec == "worst") return worst_case_sequence(inst);
    if (spec.rfind("switch:", 0) == 0) return single_switch_sequence(inst, std::stoi(spec.substr(7)));
    if (spec.rfind("random:", 0) == 0) return random_nested_sequence(inst, std::stoull(spec.substr(7)));
    return make_sequence(inst, load_sequence_csv(spec));
}

std::unique_ptr<Policy> make_policy(const ProblemFile& pf, const std::string& kind, Matrix& canonical) {
    const Instance& inst = pf.base;
    if (kind == "lp_emulator") {
        auto p = std::make_unique<LpEmulatorPolicy>(inst);
        canonical = p->canonical();
        return p;
    }
    if (kind == "lp_resolving") return std::make_unique<LpResolvingPolicy>(inst);
    if (kind == "greedy_target") return std::make_unique<GreedyTargetPolicy>(inst, gamma_star_single_pool(inst).gamma_star);
    if (kind == "naive_greedy") return std::make_unique<NaiveGreedyPolicy>(inst);
    if (kind == "release") return std::make_unique<ReleasePolicy>(pf.release ? *pf.release : plain_release_instance(inst));
    if (kind == "joint") {
        auto p = std::make_unique<JointCostPolicy>(pf.release ? *pf.release : plain_release_instance(inst));
        canonical = p->canonical();
        return p;
    }
    bad("policy '" + kind + "' cannot run on a prediction sequence alone");
}

int cmd_run(const Options& o) {
    const auto pf = load_problem(o.instance);
    const Instance& inst = pf.base;
    Matrix canonical;
    auto policy = make_policy(pf, o.policy, canonical);
    const auto seq = sequence_from_spec(inst, o.sequence);
    if (seq.horizon() != inst.horizon) bad("sequence length differs from the horizon");
    const auto plan = run_policy(*policy, inst.n_pools, seq);
    const auto trace = make_trace(canonical, plan, seq);
    if (o.out.empty()) {
        trace.write_csv(std::cout);
    } else {
        std::ofstream out(o.out);
        if (!out) bad("cannot write " + o.out);
        trace.write_csv(out);
    }
    const DemandCost dc = std::isnan(o.demand) ? worst_demand(inst, plan, seq)
                                               : DemandCost{staffing_cost(inst, plan, o.demand), o.demand};
    std::cout << "cost " << fixed6(dc.cost) << " demand " << fixed6(dc.demand) << '\n';
    if (pf.release && (o.policy == "release" || o.policy == "joint"))
        std::cout << "spend " << fixed6(hiring_spend(*pf.release, plan)) << '\n';
    return 0;
}

CalibrationTable calibrate_config(const BenchConfig& cfg, std::uint64_t seed) {
    return calibrate_intervals(cfg.process, cfg.coverage, cfg.calibration_draws, seed);
}

int cmd_bench(const Options& o) {
    const auto cfg = load_bench_config(o.instance);
    const int reps = o.reps > 0 ? o.reps : cfg.replications;
    const std::uint64_t seed = o.seed_set ? o.seed : cfg.seed;
    const auto table = calibrate_config(cfg, cfg.calibration_seed);
    const auto inst = minimax_instance(cfg.supply, cfg.process, table);
    std::vector<BenchPolicy> policies;
    for (const auto& spec : cfg.policies) {
        if (o.bench_policy != "all" && o.bench_policy != spec.label && o.bench_policy != spec.kind) continue;
        policies.push_back(make_bench_policy(spec, inst, cfg.process));
    }
    if (policies.empty()) bad("no policy matches '" + o.bench_policy + "'");
    const auto report = run_bayesian_world(cfg.supply, cfg.process, table, policies, reps, seed, o.workers);
    if (!o.out.empty()) {
        std::ofstream out(o.out);
        if (!out) bad("cannot write " + o.out);
        report.write_csv(out);
    }
    const std::string& ref = report.policies.front();
    std::printf("reference %s, %d replications, seed %llu\n", ref.c_str(), reps, static_cast<unsigned long long>(seed));
    std::printf("%-20s %10s %10s %12s %12s %10s\n", "policy", "mean", "std_err", "runtime_ms", "diff_vs_ref", "diff_se");
    for (const auto& s : summarize(report)) {
        const auto d = paired_difference(report, ref, s.policy);
        std::printf("%-20s %10s %10s %12s %12s %10s\n", s.policy.c_str(), fixed6(s.mean).c_str(),
                    fixed6(s.std_error).c_str(), fixed6(s.total_ms).c_str(), fixed6(d.mean).c_str(),
                    fixed6(d.std_error).c_str());
    }
    return 0;
}

int cmd_calibrate(const Options& o) {
    const auto cfg = load_bench_config(o.instance);
    const auto table = calibrate_config(cfg, o.seed_set ? o.seed : cfg.calibration_seed);
    std::printf("initial_range %s %s\n", fixed6(table.range_lo).c_str(), fixed6(table.range_hi).c_str());
    std::printf("%4s %10s %10s %10s\n", "day", "left", "right", "coverage");
    for (size_t t = 0; t < table.left.size(); ++t)
        std::printf("%4zu %10s %10s %10s\n", t + 1, fixed6(table.left[t]).c_str(), fixed6(table.right[t]).c_str(),
                    fixed6(table.coverage[t]).c_str());
    if (!o.out.empty()) write_text(o.out, table.to_json() + "\n");
    return 0;
}

int cmd_sweep_eta(const Options& o) {
    if (o.etas.empty()) bad("empty eta grid");
    std::vector<double> etas = o.etas;
    std::sort(etas.begin(), etas.end());
    if (etas.front() <= 0.0) bad("eta must be positive");
    std::printf("%10s %12s\n", "eta", "gamma_star");
    json rows = json::array();
    bool monotone = true;
    double prev = 0.0;
    for (size_t k = 0; k < etas.size(); ++k) {
        const double g = solve_canonical(build_lp_single_switch(convergence_rate_instance(o.horizon, o.supply, o.under, o.over, etas[k]))).gamma;
        if (k > 0 && g > prev + 1e-9) monotone = false;
        prev = g;
        rows.push_back({{"eta", etas[k]}, {"gamma_star", g}});
        std::printf("%10s %12s\n", fixed6(etas[k]).c_str(), fixed6(g).c_str());
    }
    std::cout << (monotone ? "nonincreasing" : "NOT nonincreasing") << '\n';
    if (!o.out.empty()) write_text(o.out, json{{"rows", rows}, {"nonincreasing", monotone}}.dump(2) + "\n");
    return monotone ? 0 : kExitSolver;
}

int cmd_oracle(const Options& o) {
    const auto pf = load_problem(o.instance);
    Matrix canonical;
    auto policy = make_policy(pf, o.policy, canonical);
    GridOptions g;
    g.grid_step = o.grid_step;
    g.workers = o.workers;
    const auto wc = brute_force_worst_case(pf.base, *policy, g);
    const double gamma = solve_canonical(build_lp_single_switch(pf.base)).gamma;
    std::cout << "worst_cost " << fixed6(wc.cost) << " demand " << fixed6(wc.demand) << " leaves " << wc.leaves << '\n';
    std::cout << "gamma_star " << fixed6(gamma) << '\n';
    if (!o.out.empty()) {
        std::ofstream out(o.out);
        if (!out) bad("cannot write " + o.out);
        write_sequence_csv(out, wc.sequence);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robstaff: minimax online staffing with interval predictions"};
    app.require_subcommand(1);
    Options o;

    auto* solve = app.add_subcommand("solve", "solve a minimax program and print its objective");
    solve->add_option("--instance", o.instance, "instance JSON")->required();
    solve->add_option("--program", o.program, "single_switch | multi_station | release | joint");
    solve->add_option("--out", o.out, "write the solution as JSON");

    auto* run = app.add_subcommand("run", "play a policy against a prediction sequence");
    run->add_option("--instance", o.instance, "instance JSON")->required();
    run->add_option("--policy", o.policy, "lp_emulator | lp_resolving | greedy_target | naive_greedy | release | joint");
    run->add_option("--sequence", o.sequence, "CSV file, worst, switch:K or random:SEED");
    run->add_option("--demand", o.demand, "final demand; default is the worst endpoint");
    run->add_option("--out", o.out, "trace CSV (default stdout)");

    auto* bench = app.add_subcommand("bench", "Monte Carlo comparison in the Bayesian demand world");
    bench->add_option("--instance", o.instance, "benchmark config JSON")->required();
    bench->add_option("--policy", o.bench_policy, "policy label or kind, or all");
    bench->add_option("--reps", o.reps, "replications (default from config)");
    bench->add_option("--workers", o.workers, "replication threads");
    bench->add_option("--out", o.out, "results CSV");

    auto* sweep = app.add_subcommand("sweep-eta", "optimal minimax cost against the convergence rate");
    sweep->add_option("--horizon", o.horizon, "T");
    sweep->add_option("--supply", o.supply, "size of each pool");
    sweep->add_option("--under-cost", o.under, "c");
    sweep->add_option("--over-cost", o.over, "C");
    sweep->add_option("--etas", o.etas, "eta grid")->delimiter(',');
    sweep->add_option("--out", o.out, "JSON table");

    auto* oracle = app.add_subcommand("oracle", "brute-force grid adversary against a policy");
    oracle->add_option("--instance", o.instance, "instance JSON")->required();
    oracle->add_option("--policy", o.policy, "policy kind");
    oracle->add_option("--grid-step", o.grid_step, "grid step");
    oracle->add_option("--workers", o.workers, "threads over day-one choices");
    oracle->add_option("--out", o.out, "worst sequence CSV");

    auto* calib = app.add_subcommand("calibrate", "calibrate prediction-interval offsets");
    calib->add_option("--instance", o.instance, "benchmark config JSON")->required();
    calib->add_option("--out", o.out, "calibration JSON");

    for (auto* sub : {bench, calib})
        sub->add_option_function<std::uint64_t>(
            "--seed",
            [&o](const std::uint64_t& s) {
                o.seed = s;
                o.seed_set = true;
            },
            "seed (default from config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*solve) return cmd_solve(o);
        if (*run) return cmd_run(o);
        if (*bench) return cmd_bench(o);
        if (*sweep) return cmd_sweep_eta(o);
        if (*oracle) return cmd_oracle(o);
        if (*calib) return cmd_calibrate(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_input_error() ? kExitInput : kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return 0;
}
