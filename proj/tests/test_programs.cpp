#include <random>
#include <sstream>

#include "doctest.h"
#include "robstaff/adversary.hpp"
#include "robstaff/algorithms.hpp"
#include "robstaff/emulator.hpp"
#include "robstaff/io.hpp"
#include "robstaff/programs.hpp"
#include "support.hpp"

using namespace robstaff;

namespace {

Instance one_day(double s, double delta, double c, double C) {
    Instance inst;
    inst.n_pools = 1;
    inst.horizon = 1;
    inst.pool_sizes = {s};
    inst.availability = {{1.0}};
    inst.lo0 = 0.0;
    inst.hi0 = 1.0;
    inst.error_bounds = {delta};
    inst.under_cost = c;
    inst.over_cost = C;
    return validate_instance(inst);
}

}  // namespace

TEST_CASE("one-day minimax newsvendor") {
    // no information: hire (c R + C L) / (c + C) = 1/3, Gamma = c C (R - L) / (c + C) = 2/3
    const auto blind = solve_canonical(build_lp_single_switch(one_day(1.0, 1.0, 1.0, 2.0)));
    CHECK(blind.gamma == doctest::Approx(2.0 / 3.0));
    CHECK(blind.hires[0][0] == doctest::Approx(1.0 / 3.0));
    // exact information but only half the demand range can be staffed
    CHECK(solve_canonical(build_lp_single_switch(one_day(0.5, 0.0, 1.0, 1.0))).gamma == doctest::Approx(0.5));
}

TEST_CASE("canonical rules share the optimal value") {
    const Instance inst = load_problem(robstaff::testing::data_path("single_pool_c.json")).base;
    const auto prog = build_lp_single_switch(inst);
    const double v = solve_canonical(prog).gamma;
    for (auto rule : {CanonicalRule::kEarliest, CanonicalRule::kLatest}) {
        const auto alt = solve_canonical(prog, rule);
        CHECK(alt.gamma == doctest::Approx(v).epsilon(1e-9));
        StaffingPlan p = StaffingPlan::empty(inst.n_pools, inst.horizon);
        p.hires = alt.hires;
        CHECK(check_feasibility(inst, p).ok);
    }
}

TEST_CASE("scarcest pool is filled first") {
    const std::vector<double> caps{0.6, 0.8}, rho{0.9, 0.5};
    const auto split = split_scarcest_first(1.0, caps, rho);
    CHECK(split[0] == doctest::Approx(0.2));
    CHECK(split[1] == doctest::Approx(0.8));
    CHECK(split_scarcest_first(5.0, caps, rho) == caps);
}

TEST_CASE("emulator meets the guarantee on every single-switch sequence") {
    for (const char* f : {"single_pool_a.json", "single_pool_b.json", "single_pool_c.json"}) {
        const Instance inst = load_problem(robstaff::testing::data_path(f)).base;
        LpEmulatorPolicy emu(inst);
        for (int k = 1; k <= inst.horizon; ++k) {
            const auto seq = single_switch_sequence(inst, k);
            const auto plan = run_policy(emu, inst.n_pools, seq);
            CHECK(worst_demand(inst, plan, seq).cost <= emu.gamma() + 1e-9);
            CHECK(check_feasibility(inst, plan).ok);
        }
    }
}

TEST_CASE("stateless and online emulator agree") {
    std::mt19937_64 rng(11);
    for (int r = 0; r < 50; ++r) {
        const Instance inst = robstaff::testing::random_instance(rng);
        LpEmulatorPolicy emu(inst);
        const auto seq = random_nested_sequence(inst, rng());
        const auto [plan, trace] = run_emulator(inst, emu.canonical(), seq);
        CHECK(run_policy(emu, inst.n_pools, seq).hires == plan.hires);
        CHECK(trace.rows.size() == static_cast<size_t>(inst.n_pools * inst.horizon));
    }
}

TEST_CASE("resolved guarantees never exceed the day-0 value") {
    const Instance inst = load_problem(robstaff::testing::data_path("single_pool_b.json")).base;
    LpResolvingPolicy res(inst);
    const double gamma = solve_canonical(build_lp_single_switch(inst)).gamma;
    for (int k = 1; k <= inst.horizon; ++k) {
        run_policy(res, 1, single_switch_sequence(inst, k));
        CHECK(res.last_gamma() <= gamma + 1e-9);
    }
}

TEST_CASE("multi-station program with one station is the base program") {
    const Instance inst = load_problem(robstaff::testing::data_path("single_pool_c.json")).base;
    MultiStationInstance msi;
    msi.base = inst;
    msi.stations = {{inst.lo0, inst.hi0, inst.error_bounds, inst.under_cost, inst.over_cost}};
    msi = validate_instance(msi);
    MultiStationPolicy pol(msi);
    CHECK(pol.objective() == doctest::Approx(solve_canonical(build_lp_single_switch(inst)).gamma).epsilon(1e-9));
}

TEST_CASE("lp text output names every row") {
    const auto prog = build_lp_single_switch(one_day(1.0, 1.0, 1.0, 2.0));
    std::ostringstream out;
    write_lp(out, prog.model);
    const std::string text = out.str();
    CHECK(text.find("Minimize") != std::string::npos);
    for (const auto& row : prog.model.constraints()) CHECK(text.find(row.name) != std::string::npos);
}
