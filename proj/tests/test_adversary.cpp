#include <random>

#include "doctest.h"
#include "robstaff/adversary.hpp"
#include "robstaff/algorithms.hpp"
#include "robstaff/io.hpp"
#include "support.hpp"

using namespace robstaff;

namespace {

bool nested(const PredictionSequence& seq, const Instance& inst) {
    double lo = inst.lo0, hi = inst.hi0;
    for (int t = 1; t <= seq.horizon(); ++t) {
        const auto& p = seq.at(t);
        if (p.lo < lo - 1e-12 || p.hi > hi + 1e-12 || p.hi - p.lo > inst.delta(t) + 1e-12) return false;
        lo = p.lo;
        hi = p.hi;
    }
    return true;
}

}  // namespace

TEST_CASE("generated sequences are nested and within the error bounds") {
    std::mt19937_64 rng(21);
    for (int r = 0; r < 200; ++r) {
        const Instance inst = robstaff::testing::random_instance(rng);
        CHECK(nested(random_nested_sequence(inst, rng()), inst));
        for (int k = 1; k <= inst.horizon; ++k) CHECK(nested(single_switch_sequence(inst, k), inst));
        CHECK(nested(worst_case_sequence(inst), inst));
    }
}

TEST_CASE("random sequences are reproducible from the seed") {
    const Instance inst = load_problem(robstaff::testing::data_path("single_pool_b.json")).base;
    const auto a = random_nested_sequence(inst, 5), b = random_nested_sequence(inst, 5);
    for (int t = 1; t <= inst.horizon; ++t) {
        CHECK(a.at(t).lo == b.at(t).lo);
        CHECK(a.at(t).hi == b.at(t).hi);
    }
}

TEST_CASE("worst demand is an endpoint") {
    Instance inst;
    inst.n_pools = 1;
    inst.horizon = 1;
    inst.pool_sizes = {1.0};
    inst.availability = {{1.0}};
    inst.hi0 = 1.0;
    inst.error_bounds = {1.0};
    inst = validate_instance(inst);
    StaffingPlan plan = StaffingPlan::empty(1, 1);
    plan.hires[0][0] = 0.3;
    const auto wd = worst_demand(inst, plan, make_sequence(inst, {{0.2, 0.6}}));
    CHECK(wd.cost == doctest::Approx(0.3));
    CHECK(wd.demand == doctest::Approx(0.6));
}

TEST_CASE("grid adversary on the one-day newsvendor") {
    Instance inst;
    inst.n_pools = 1;
    inst.horizon = 1;
    inst.pool_sizes = {1.0};
    inst.availability = {{1.0}};
    inst.hi0 = 1.0;
    inst.error_bounds = {1.0};
    inst.over_cost = 2.0;
    inst = validate_instance(inst);
    LpEmulatorPolicy emu(inst);
    const auto worst = brute_force_worst_case(inst, emu, {0.25});
    CHECK(worst.cost == doctest::Approx(2.0 / 3.0));
    CHECK(worst.leaves > 0);
    CHECK(single_switch_worst_case(inst, emu).cost == doctest::Approx(2.0 / 3.0));
}

// near-ties within 1e-12 keep whichever witness a worker saw first
TEST_CASE("parallel grid search matches the serial one") {
    const Instance inst = load_problem(robstaff::testing::data_path("single_pool_c.json")).base;
    LpEmulatorPolicy emu(inst);
    GridOptions serial{0.5, kDefaultNodeCap, 1}, parallel{0.5, kDefaultNodeCap, 4};
    const auto a = brute_force_worst_case(inst, emu, serial), b = brute_force_worst_case(inst, emu, parallel);
    CHECK(a.cost == doctest::Approx(b.cost).epsilon(1e-12));
    CHECK(a.leaves == b.leaves);
}

TEST_CASE("node cap is enforced") {
    const Instance inst = load_problem(robstaff::testing::data_path("single_pool_b.json")).base;
    LpEmulatorPolicy emu(inst);
    CHECK_THROWS(brute_force_worst_case(inst, emu, {0.05, 1000, 1}));
}
