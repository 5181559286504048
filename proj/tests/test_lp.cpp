#include "doctest.h"
#include "robstaff/error.hpp"
#include "robstaff/lp.hpp"

using namespace robstaff;

TEST_CASE("two-variable vertex") {
    // min -x - y, x + 2y <= 4, 3x + y <= 6: optimum at (8/5, 6/5)
    LpModel m;
    const int x = m.add_variable("x", -1.0), y = m.add_variable("y", -1.0);
    m.add_constraint("a", {{x, 1.0}, {y, 2.0}}, Relation::kLessEq, 4.0);
    m.add_constraint("b", {{x, 3.0}, {y, 1.0}}, Relation::kLessEq, 6.0);
    const auto sol = require_optimal(solve_lp(m));
    CHECK(sol.objective == doctest::Approx(-14.0 / 5.0));
    CHECK(sol.values[x] == doctest::Approx(1.6));
    CHECK(sol.values[y] == doctest::Approx(1.2));
    CHECK(m.max_violation(sol.values) <= 1e-9);
}

TEST_CASE("equality, >= rows and upper bounds") {
    // min x + 2y, x + y = 3, x >= 1, x <= 2: x = 2, y = 1
    LpModel m;
    const int x = m.add_variable("x", 1.0, 2.0), y = m.add_variable("y", 2.0);
    m.add_constraint("sum", {{x, 1.0}, {y, 1.0}}, Relation::kEqual, 3.0);
    m.add_constraint("floor", {{x, 1.0}}, Relation::kGreaterEq, 1.0);
    const auto sol = require_optimal(solve_lp(m));
    CHECK(sol.objective == doctest::Approx(4.0));
    CHECK(sol.values[x] == doctest::Approx(2.0));
}

TEST_CASE("negative right-hand sides") {
    // min x, -x <= -2
    LpModel m;
    const int x = m.add_variable("x", 1.0);
    m.add_constraint("r", {{x, -1.0}}, Relation::kLessEq, -2.0);
    CHECK(require_optimal(solve_lp(m)).objective == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded statuses") {
    LpModel bad;
    const int x = bad.add_variable("x", 1.0);
    bad.add_constraint("lo", {{x, 1.0}}, Relation::kGreaterEq, 2.0);
    bad.add_constraint("hi", {{x, 1.0}}, Relation::kLessEq, 1.0);
    CHECK(solve_lp(bad).status == LpStatus::kInfeasible);
    CHECK_THROWS_AS(require_optimal(solve_lp(bad)), Error);

    LpModel open;
    open.add_variable("x", -1.0);
    CHECK(solve_lp(open).status == LpStatus::kUnbounded);
}

TEST_CASE("degenerate rows do not cycle") {
    // classic degenerate vertex at the origin
    LpModel m;
    const int a = m.add_variable("a", -0.75), b = m.add_variable("b", 150.0), c = m.add_variable("c", -0.02),
              d = m.add_variable("d", 6.0);
    m.add_constraint("r1", {{a, 0.25}, {b, -60.0}, {c, -0.04}, {d, 9.0}}, Relation::kLessEq, 0.0);
    m.add_constraint("r2", {{a, 0.5}, {b, -90.0}, {c, -0.02}, {d, 3.0}}, Relation::kLessEq, 0.0);
    m.add_constraint("r3", {{c, 1.0}}, Relation::kLessEq, 1.0);
    const auto sol = require_optimal(solve_lp(m));
    CHECK(sol.objective == doctest::Approx(-0.05));
}
