#include <memory>
#include <random>
#include <sstream>

#include "doctest.h"
#include "robstaff/benchmarks.hpp"
#include "robstaff/error.hpp"
#include "support.hpp"

using namespace robstaff;

namespace {

DemandProcess short_process() { return {5, 5, 0.0, 0.5}; }

const CalibrationTable& short_table() {
    static const CalibrationTable table = calibrate_intervals(short_process(), 0.95, 20000, 9);
    return table;
}

}  // namespace

TEST_CASE("point estimator averages sampled futures") {
    // days 1,2 realized 1 + 2; futures of day 3 sampled on days 1 and 2 are 1 and 2
    const std::vector<int> partials{1, 2};
    const std::vector<std::vector<int>> traj{{0, 3, 1}, {0, 0, 2}};
    CHECK(point_estimator(partials, traj, 3) == doctest::Approx(4.5));
    // at the horizon the estimate is the realized total
    const std::vector<int> all{1, 2, 0};
    CHECK(point_estimator(all, {{0, 3, 1}, {0, 0, 2}, {0, 0, 0}}, 3) == 3.0);
}

TEST_CASE("lower empirical quantile") {
    CHECK(lower_quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
    CHECK(lower_quantile({7.0}, 0.975) == 7.0);
    CHECK(lower_quantile({7.0}, 0.025) == 7.0);
    CHECK(lower_quantile({4.0, 1.0, 3.0, 2.0}, 0.25) == 1.0);
}

TEST_CASE("naive greedy target") {
    CHECK(NaiveGreedyPolicy::target(0.0, 1.0, 1.0, 3.0) == doctest::Approx(0.25));
    CHECK(NaiveGreedyPolicy::target(2.0, 2.0, 1.0, 3.0) == doctest::Approx(2.0));
}

TEST_CASE("binomial pmf") {
    const auto p = binomial_pmf(2, 0.5);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(0.5));
    CHECK(binomial_pmf(3, 0.0)[0] == 1.0);
}

TEST_CASE("calibration needs enough draws") {
    try {
        calibrate_intervals(short_process(), 0.95, kMinCalibrationDraws - 1, 1);
        FAIL("accepted too few draws");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kInsufficientDraws);
    }
}

TEST_CASE("a degenerate process has zero-width intervals") {
    const auto table = calibrate_intervals({4, 3, 0.0, 0.0}, 0.95, kMinCalibrationDraws, 2);
    for (int t = 0; t < 4; ++t) {
        CHECK(table.left[t] == 0.0);
        CHECK(table.right[t] == 0.0);
    }
    CHECK(table.range_lo == 0.0);
    CHECK(table.range_hi == 0.0);
}

TEST_CASE("calibrated intervals cover held-out worlds") {
    const auto& table = short_table();
    const auto cov = held_out_coverage(short_process(), table, 20000, 12345);
    for (int t = 0; t + 1 < 5; ++t) {
        CHECK(cov[t] >= 0.93);
        CHECK(cov[t] <= 0.97);
    }
    CHECK(cov[4] == 1.0);
    const auto w = table.widths();
    for (size_t t = 1; t < w.size(); ++t) CHECK(w[t] <= w[t - 1]);
    CHECK(w.back() == 0.0);
}

TEST_CASE("calibration json round trip") {
    const auto& table = short_table();
    const auto back = calibration_from_json(table.to_json());
    CHECK(back.left == table.left);
    CHECK(back.right == table.right);
    CHECK(back.range_hi == table.range_hi);
}

TEST_CASE("world sequences contain the realized demand") {
    const auto& table = short_table();
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const World w = sample_world(short_process(), seed);
        const auto seq = world_sequence(w, table);
        CHECK(seq.at(5).lo == w.demand());
        CHECK(seq.at(5).hi == w.demand());
    }
}

TEST_CASE("one-day mdp solves the newsvendor on known demand") {
    Instance inst;
    inst.n_pools = 1;
    inst.horizon = 1;
    inst.pool_sizes = {5.0};
    inst.availability = {{1.0}};
    inst.hi0 = 5.0;
    inst.error_bounds = {0.0};
    inst = validate_instance(inst);
    MdpSolver solver(inst, {});
    solver.solve(1, {binomial_pmf(5, 0.2)});
    // grid step 0.25 contains every integer demand
    for (int d = 0; d <= 5; ++d) CHECK(solver.value(1, d, {0}) == 0.0);
    CHECK(solver.root_value(binomial_pmf(5, 0.2)) == 0.0);
}

TEST_CASE("state cap is enforced") {
    Instance inst = robstaff::testing::random_instance(*std::make_unique<std::mt19937_64>(4));
    MdpSpec spec;
    spec.grid_levels = 101;
    spec.state_cap = 10;
    try {
        MdpSolver(inst, spec).solve(1, true_pmfs(std::vector<double>(inst.horizon, 0.2), 5));
        FAIL("state cap ignored");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kStateExplosion);
    }
}

TEST_CASE("bench runs are deterministic across worker counts") {
    const auto cfg = load_bench_config(robstaff::testing::data_path("bench_short.json"));
    const auto table = calibrate_intervals(cfg.process, cfg.coverage, 20000, cfg.calibration_seed);
    const auto inst = minimax_instance(cfg.supply, cfg.process, table);
    std::vector<BenchPolicy> pols;
    for (const auto& spec : cfg.policies) pols.push_back(make_bench_policy(spec, inst, cfg.process));
    const auto a = run_bayesian_world(cfg.supply, cfg.process, table, pols, 12, 3, 1);
    const auto b = run_bayesian_world(cfg.supply, cfg.process, table, pols, 12, 3, 3);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t k = 0; k < a.records.size(); ++k) {
        CHECK(a.records[k].cost == b.records[k].cost);
        CHECK(a.records[k].seed == b.records[k].seed);
        CHECK(a.records[k].policy == b.records[k].policy);
    }
    std::ostringstream csv;
    a.write_csv(csv);
    CHECK(csv.str().rfind("replication,policy,cost,runtime_ms,seed\n", 0) == 0);
    const auto d = paired_difference(a, "minimax_opt", "minimax_opt");
    CHECK(d.mean == 0.0);
}

TEST_CASE("minimax instance uses the calibrated range") {
    const auto cfg = load_bench_config(robstaff::testing::data_path("bench_short.json"));
    const auto& table = short_table();
    const auto inst = minimax_instance(cfg.supply, cfg.process, table);
    CHECK(inst.lo0 == table.range_lo);
    CHECK(inst.hi0 == table.range_hi);
    for (int t = 1; t <= inst.horizon; ++t) CHECK(inst.delta(t) == table.left[t - 1] + table.right[t - 1]);
}

TEST_CASE("unknown bench policy kinds are rejected") {
    const auto cfg = load_bench_config(robstaff::testing::data_path("bench_short.json"));
    CHECK_THROWS_AS(make_bench_policy({"oracle", "x"}, cfg.supply, cfg.process), Error);
}
