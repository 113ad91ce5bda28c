#include "fhm/ratlp.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace fhm;

namespace {

// Asserts the outcome's certificate verifies, then returns it.
LpOutcome solve_checked(const LinearProgram& lp) {
  LpOutcome out = lp_solve(lp);
  CHECK(check_certificate(lp, out));
  return out;
}

}  // namespace

TEST_CASE("two-variable maximization with a known vertex optimum") {
  LinearProgram lp(2);
  lp.objective = {Rat(1), Rat(1)};
  lp.add_row({Rat(1), Rat(2)}, Rel::LE, Rat(4));
  lp.add_row({Rat(3), Rat(1)}, Rel::LE, Rat(6));
  LpOutcome out = solve_checked(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == Rat(14, 5));
  CHECK(out.primal == RatVec{Rat(8, 5), Rat(6, 5)});
}

TEST_CASE("infeasible system yields a verified Farkas certificate") {
  LinearProgram lp(2);
  lp.objective = {Rat(1), Rat(0)};
  lp.add_row({Rat(1), Rat(1)}, Rel::LE, Rat(1));
  lp.add_row({Rat(1), Rat(1)}, Rel::GE, Rat(2));
  LpOutcome out = solve_checked(lp);
  REQUIRE(out.status == LpStatus::Infeasible);
  REQUIRE(!out.farkas.empty());
  // The combination must weigh both rows and certify sum a = 0, sum b < 0.
  const auto rows = lp_canonical_rows(lp);
  RatVec combo(2, Rat(0));
  Rat rhs = 0;
  for (size_t k = 0; k < rows.size(); ++k) {
    for (int j = 0; j < 2; ++j) combo[j] += out.farkas[k] * rows[k].coeffs[j];
    rhs += out.farkas[k] * rows[k].rhs;
  }
  CHECK(combo == RatVec{Rat(0), Rat(0)});
  CHECK(rhs < 0);
}

TEST_CASE("unbounded program yields a feasible point and improving ray") {
  LinearProgram lp(2);
  lp.objective = {Rat(1), Rat(0)};
  lp.add_row({Rat(-1), Rat(1)}, Rel::LE, Rat(1));
  LpOutcome out = solve_checked(lp);
  REQUIRE(out.status == LpStatus::Unbounded);
  REQUIRE(out.ray.size() == 2);
  Rat gain = out.ray[0] * lp.objective[0] + out.ray[1] * lp.objective[1];
  CHECK(gain > 0);
}

TEST_CASE("minimization with a free variable") {
  LinearProgram lp(2);
  lp.sense = Sense::Minimize;
  lp.objective = {Rat(1), Rat(1)};
  lp.set_free(0);
  lp.add_row({Rat(1), Rat(1)}, Rel::GE, Rat(-3));
  lp.add_row({Rat(1), Rat(-1)}, Rel::EQ, Rat(-5));
  LpOutcome out = solve_checked(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == Rat(-3));  // x = -4, y = 1
  CHECK(out.primal == RatVec{Rat(-4), Rat(1)});
}

TEST_CASE("upper bounds and two-sided bounds") {
  LinearProgram lp(2);
  lp.objective = {Rat(3), Rat(2)};
  lp.upper[0] = Rat(1, 2);
  lp.lower[1] = Rat(1, 4);
  lp.upper[1] = Rat(2);
  lp.add_row({Rat(1), Rat(1)}, Rel::LE, Rat(2));
  LpOutcome out = solve_checked(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == Rat(3, 2) + Rat(3));  // x=1/2, y=3/2
  CHECK(out.primal == RatVec{Rat(1, 2), Rat(3, 2)});
}

TEST_CASE("degenerate ties terminate (Bland's rule)") {
  // Classic cycling-prone instance; exact pivoting must still terminate.
  LinearProgram lp(4);
  lp.objective = {Rat(3, 4), Rat(-150), Rat(1, 50), Rat(-6)};
  lp.add_row({Rat(1, 4), Rat(-60), Rat(-1, 25), Rat(9)}, Rel::LE, Rat(0));
  lp.add_row({Rat(1, 2), Rat(-90), Rat(-1, 50), Rat(3)}, Rel::LE, Rat(0));
  lp.add_row({Rat(0), Rat(0), Rat(1), Rat(0)}, Rel::LE, Rat(1));
  LpOutcome out = solve_checked(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == Rat(1, 20));
}

TEST_CASE("check_certificate rejects tampered certificates") {
  LinearProgram lp(2);
  lp.objective = {Rat(1), Rat(1)};
  lp.add_row({Rat(1), Rat(2)}, Rel::LE, Rat(4));
  lp.add_row({Rat(3), Rat(1)}, Rel::LE, Rat(6));
  LpOutcome out = lp_solve(lp);
  REQUIRE(check_certificate(lp, out));

  LpOutcome bad = out;
  bad.value += 1;
  CHECK(!check_certificate(lp, bad));

  bad = out;
  bad.primal[0] += Rat(1, 7);
  CHECK(!check_certificate(lp, bad));

  bad = out;
  bad.dual[0] += Rat(1, 3);
  CHECK(!check_certificate(lp, bad));

  bad = out;
  bad.status = LpStatus::Unbounded;
  bad.ray = RatVec(2, Rat(0));  // shape-correct, but no improving direction
  CHECK(!check_certificate(lp, bad));

  LinearProgram infeas(1);
  infeas.objective = {Rat(1)};
  infeas.add_row({Rat(1)}, Rel::LE, Rat(-1));
  LpOutcome inf = lp_solve(infeas);
  REQUIRE(inf.status == LpStatus::Infeasible);
  REQUIRE(check_certificate(infeas, inf));
  LpOutcome forged = inf;
  for (Rat& y : forged.farkas) y = 0;
  CHECK(!check_certificate(infeas, forged));
}

TEST_CASE("check_certificate rejects dimension mismatches") {
  LinearProgram lp(2);
  lp.objective = {Rat(1), Rat(1)};
  lp.add_row({Rat(1), Rat(1)}, Rel::LE, Rat(1));
  LpOutcome out = lp_solve(lp);
  LpOutcome bad = out;
  bad.primal.pop_back();
  CHECK_THROWS_AS(check_certificate(lp, bad), std::invalid_argument);
  bad = out;
  bad.dual.push_back(Rat(1));
  CHECK_THROWS_AS(check_certificate(lp, bad), std::invalid_argument);
}

TEST_CASE("random battery agrees with the vertex-enumeration oracle") {
  std::mt19937_64 g(0xAB12);
  auto small = [&](int lo, int hi) { return lo + static_cast<int>(g() % (hi - lo + 1)); };
  int optimal = 0, infeasible = 0, unbounded = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int v = small(1, 3);
    LinearProgram lp(v);
    lp.sense = g() % 2 ? Sense::Maximize : Sense::Minimize;
    for (int j = 0; j < v; ++j) {
      lp.objective[j] = Rat(small(-4, 4));
      if (g() % 4 == 0) lp.upper[j] = Rat(small(0, 3));
    }
    const int rows = small(1, 5);
    for (int r = 0; r < rows; ++r) {
      RatVec a(v);
      for (int j = 0; j < v; ++j) a[j] = Rat(small(-3, 3));
      Rel rel = g() % 3 == 0 ? Rel::GE : (g() % 2 ? Rel::LE : Rel::EQ);
      lp.add_row(std::move(a), rel, Rat(small(-4, 6)));
    }
    LpOutcome out = lp_solve(lp);
    CHECK(check_certificate(lp, out));
    fhm::testing::OracleLpResult oracle = fhm::testing::oracle_lp(lp);
    CHECK(out.status == oracle.status);
    if (out.status == LpStatus::Optimal) {
      CHECK(out.value == oracle.value);
      ++optimal;
    } else if (out.status == LpStatus::Infeasible) {
      ++infeasible;
    } else {
      ++unbounded;
    }
  }
  // The battery must actually exercise all three outcomes.
  CHECK(optimal > 50);
  CHECK(infeasible > 20);
  CHECK(unbounded > 5);
}
