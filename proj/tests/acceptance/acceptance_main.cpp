// Acceptance battery. Each criterion prints exactly one line:
//   criterion N: PASS (<details>, <elapsed> ms)
//   criterion N: FAIL (<first reason>)
// The process exits nonzero if any criterion fails.

#include "fhm/blocking.hpp"
#include "fhm/core.hpp"
#include "fhm/dominance.hpp"
#include "fhm/economy.hpp"
#include "fhm/equilibrium.hpp"
#include "fhm/fixtures.hpp"
#include "fhm/ratlp.hpp"
#include "fhm/sampling.hpp"
#include "fhm/scenario.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "oracles.hpp"

using namespace fhm;
using Clock = std::chrono::steady_clock;

namespace {

long ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FHM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Prints the one-line verdict; `detail` carries either the PASS summary or
// the first failure reason.
bool report(int number, bool pass, const std::string& detail, long elapsed_ms) {
  std::cout << "criterion " << number << ": " << (pass ? "PASS" : "FAIL") << " (" << detail
            << ", " << elapsed_ms << " ms)" << std::endl;
  return pass;
}

// ---------------------------------------------------------------- criterion 1

bool criterion1() {
  const auto t0 = Clock::now();
  std::string why;
  bool ok = true;
  auto need = [&](bool cond, const std::string& reason) {
    if (!cond && ok) {
      ok = false;
      why = reason;
    }
  };

  need(run_cli("reproduce statement1") == 0, "CLI exit code nonzero");

  Economy a = parse_economy(fixtures::kEconomyProfileA);
  ScenarioReport r = certify_statement1(a);
  need(r.success, "certification chain reported failure");
  need(r.steps.size() == 13, "unexpected step count");
  if (r.steps.size() == 13) {
    // Combined {o1,o2} share forced to exactly 1/2 for every agent.
    for (int k = 1; k <= 4; ++k) {
      need(r.steps[k].bound_min && *r.steps[k].bound_min == Rat(1, 2) &&
               *r.steps[k].bound_max == Rat(1, 2),
           "agent " + std::to_string(k) + " bound is not exactly 1/2");
    }
    // Agent 4 pinned entrywise to its endowment (0, 1/2, 0, 1/2).
    const RatVec omega4 = a.endow[3];
    for (int o = 0; o < 4; ++o) {
      const ScenarioStep& s = r.steps[5 + o];
      need(s.bound_min && *s.bound_min == omega4[o] && *s.bound_max == omega4[o],
           "agent 4 share of object " + std::to_string(o + 1) + " not pinned to its endowment");
    }
    // Best-exchange dominance for coalitions {1,3} and {2,3}: all prefix
    // gaps nonnegative.
    const std::vector<std::vector<int>> want = {{0, 2}, {1, 2}};
    for (int b = 0; b < 2; ++b) {
      const ScenarioStep& s = r.steps[9 + b];
      need(s.ok && s.members == want[b], "best-exchange step has wrong coalition");
      need(!s.gaps.empty(), "best-exchange step carries no gaps");
      for (const RatVec& g : s.gaps)
        for (const Rat& v : g) need(v >= 0, "negative dominance gap");
    }
    const ScenarioStep& last = r.steps.back();
    need(last.ok && last.farkas_checked, "final system not certified infeasible via Farkas");
  }

  long el = ms_since(t0);
  if (el >= 10000 && ok) {
    ok = false;
    why = "exceeded the 10 s budget";
  }
  return report(1, ok,
                ok ? "strong-core emptiness certified; bounds, endowment pins, exchange gaps, "
                     "and the Farkas certificate are all exact"
                   : why,
                el);
}

// ---------------------------------------------------------------- criterion 2

bool criterion2() {
  const auto t0 = Clock::now();
  std::string why;
  bool ok = true;
  auto need = [&](bool cond, const std::string& reason) {
    if (!cond && ok) {
      ok = false;
      why = reason;
    }
  };

  need(run_cli("reproduce statement3") == 0, "CLI exit code nonzero");

  Economy b = parse_economy(fixtures::kEconomyProfileB);
  ScenarioReport r = certify_statement3(b);
  need(r.success, "certification chain reported failure");
  need(r.steps.size() == 6, "unexpected step count");
  if (r.steps.size() == 6) {
    need(r.steps[3].bound_max && *r.steps[3].bound_max == Rat(1, 4),
         "max share p[1,o4] is not exactly 1/4");
    need(r.steps[4].bound_max && *r.steps[4].bound_max == Rat(1, 4),
         "max share p[3,o1] is not exactly 1/4");
    const ScenarioStep& ub = r.steps.back();
    need(ub.ok && ub.members == std::vector<int>{0, 2}, "uniform block is not over {1,3}");
    need(ub.gaps.size() == 2, "uniform block carries wrong gap count");
    if (ub.gaps.size() == 2) {
      // Strict improvement margins: exactly 1/4 at agent 1's three-object
      // prefix (o2,o1,o4) and at agent 3's one-object prefix (o1).
      need(ub.gaps[0][2] == Rat(1, 4), "agent 1 strict gap is not exactly 1/4");
      need(ub.gaps[1][0] == Rat(1, 4), "agent 3 strict gap is not exactly 1/4");
      for (const RatVec& g : ub.gaps)
        for (const Rat& v : g) need(v >= 0, "negative uniform-block gap");
    }
  }

  long el = ms_since(t0);
  if (el >= 10000 && ok) {
    ok = false;
    why = "exceeded the 10 s budget";
  }
  return report(2, ok,
                ok ? "weak-core/EENE incompatibility certified; both maxima and both strict "
                     "gaps are exactly 1/4"
                   : why,
                el);
}

// ---------------------------------------------------------------- criterion 3

bool criterion3() {
  const auto t0 = Clock::now();
  std::string why;
  bool ok = true;

  int total = 0, converged = 0;
  long worst_ms = 0;

  auto run_one = [&](const Economy& e) {
    const auto s0 = Clock::now();
    FindCoreResult f = find_weak_core_ETE(e);
    long el = ms_since(s0);
    worst_ms = std::max(worst_ms, el);
    ++total;
    if (el >= 60000 && ok) {
      ok = false;
      why = "instance " + std::to_string(total) + " took " + std::to_string(el) + " ms";
    }
    if (!f.success) return;
    ++converged;
    // Exact re-verification of every reported success.
    if (ok && !(is_doubly_stochastic(f.allocation) && is_IR(e, f.allocation) &&
                satisfies_ETE(e, f.allocation) && in_weak_core(e, f.allocation).member)) {
      ok = false;
      why = "instance " + std::to_string(total) + " returned an unverified allocation";
    }
  };

  run_one(parse_economy(fixtures::kEconomyProfileA));
  run_one(parse_economy(fixtures::kEconomyProfileB));

  Rng rng(0xC0FFEE);
  for (int t = 0; t < 100; ++t) {
    int n = 2 + static_cast<int>(rng.below(4));
    RandomEconomyOptions ro;
    ro.force_equal_pair = t % 3 == 0;
    run_one(random_economy(rng, n, ro));
  }

  // At least 95% of all instances must converge (and every success above
  // already re-verified exactly).
  const int needed = (total * 95 + 99) / 100;
  if (ok && converged < needed) {
    ok = false;
    why = "only " + std::to_string(converged) + "/" + std::to_string(total) +
          " converged (need " + std::to_string(needed) + ")";
  }

  std::ostringstream d;
  d << converged << "/" << total << " converged (need " << needed
    << "); every success re-verified exactly; worst instance " << worst_ms << " ms";
  return report(3, ok, ok ? d.str() : why, ms_since(t0));
}

// ---------------------------------------------------------------- criterion 4

bool criterion4() {
  const auto t0 = Clock::now();
  std::string why;
  bool ok = true;

  Rng rng(0x7C7C);
  int members = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    int n = 2 + static_cast<int>(rng.below(5));  // n in 2..6
    Economy e = random_integral_market(rng, n);
    Allocation p = ttc(e);
    CoreMembershipReport r = in_strong_core(e, p);
    if (r.member) {
      ++members;
    } else if (ok) {
      ok = false;
      why = "market " + std::to_string(t) + " (n=" + std::to_string(n) +
            "): TTC outcome rejected from the strong core";
    }
  }

  long el = ms_since(t0);
  if (el >= 60000 && ok) {
    ok = false;
    why = "battery took " + std::to_string(el) + " ms (60 s budget)";
  }
  return report(4, ok,
                ok ? std::to_string(members) + "/" + std::to_string(trials) +
                         " TTC outcomes are strong-core members"
                   : why,
                el);
}

// ---------------------------------------------------------------- criterion 5

bool criterion5() {
  const auto t0 = Clock::now();
  std::string why;
  bool ok = true;
  long grid_hits = 0, lp_certs = 0, cases = 0;

  auto probe = [&](const Economy& e, const Allocation& p, const Coalition& s) {
    for (BlockMode mode : {BlockMode::Weak, BlockMode::Strong}) {
      ++cases;
      const bool grid = fhm::testing::oracle_grid_block(e, p, s, mode);
      std::optional<BlockCertificate> cert =
          mode == BlockMode::Weak ? weak_block_lp(e, p, s) : strong_block_lp(e, p, s);
      if (grid) ++grid_hits;
      if (cert) ++lp_certs;
      if (grid && !cert && ok) {
        ok = false;
        why = "grid found a block the LP missed (case " + std::to_string(cases) + ")";
      }
      if (cert && !verify_block_certificate(e, p, *cert) && ok) {
        ok = false;
        why = "LP certificate failed re-verification (case " + std::to_string(cases) + ")";
      }
    }
  };

  // n = 2: every preference profile, three endowments, all nine step-1/8
  // doubly stochastic allocations, the only non-singleton coalition.
  const std::vector<std::vector<int>> orders2 = {{0, 1}, {1, 0}};
  const std::vector<Allocation> endows2 = {
      {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}},
      {{Rat(1, 2), Rat(1, 2)}, {Rat(1, 2), Rat(1, 2)}},
      {{Rat(3, 4), Rat(1, 4)}, {Rat(1, 4), Rat(3, 4)}}};
  for (const auto& pref0 : orders2)
    for (const auto& pref1 : orders2)
      for (const Allocation& w : endows2) {
        Economy e;
        e.n = 2;
        e.prefs = {pref0, pref1};
        e.endow = w;
        e.rebuild_ranks();
        for (int k = 0; k <= 8; ++k) {
          Rat q = make_rat(k, 8);
          Allocation p = {{q, 1 - q}, {1 - q, q}};
          probe(e, p, {0, 1});
        }
      }

  // n = 3: seeded economies; even trials use permutation endowments, odd
  // trials mix two permutation matrices with a step-1/8 weight, so pooled
  // coalition endowments always stay on the grid.
  Rng rng(0x5171);
  for (int t = 0; t < 20; ++t) {
    Economy e;
    e.n = 3;
    e.prefs = random_preferences(rng, 3);
    e.endow.assign(3, RatVec(3, Rat(0)));
    std::vector<int> w1 = random_permutation(rng, 3), w2 = random_permutation(rng, 3);
    long j = (t % 2 == 0) ? 8 : 1 + static_cast<long>(rng.below(7));
    for (int i = 0; i < 3; ++i) {
      e.endow[i][w1[i]] += make_rat(j, 8);
      e.endow[i][w2[i]] += make_rat(8 - j, 8);
    }
    e.rebuild_ranks();

    long k = 1 + static_cast<long>(rng.below(7));
    std::vector<int> p1 = random_permutation(rng, 3), p2 = random_permutation(rng, 3);
    Allocation p(3, RatVec(3, Rat(0)));
    for (int i = 0; i < 3; ++i) {
      p[i][p1[i]] += make_rat(k, 8);
      p[i][p2[i]] += make_rat(8 - k, 8);
    }
    for (const Coalition& s : std::vector<Coalition>{{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}})
      probe(e, p, s);
  }

  if (ok && grid_hits < 30) {  // the equivalence must actually be exercised
    ok = false;
    why = "only " + std::to_string(grid_hits) + " grid blocks found; battery too weak";
  }

  std::ostringstream d;
  d << cases << " cases, " << grid_hits << " grid blocks, " << lp_certs
    << " LP certificates, 0 discrepancies";
  return report(5, ok, ok ? d.str() : why, ms_since(t0));
}

// ---------------------------------------------------------------- criterion 6

bool criterion6() {
  const auto t0 = Clock::now();
  std::string why;
  bool ok = true;

  Rng rng(0x1B);
  int optimal = 0, infeasible = 0, unbounded = 0;
  for (int t = 0; t < 1000 && ok; ++t) {
    int v = 1 + static_cast<int>(rng.below(20));
    int m = 1 + static_cast<int>(rng.below(30));
    LinearProgram lp(v);
    lp.sense = t % 2 == 0 ? Sense::Maximize : Sense::Minimize;
    for (int j = 0; j < v; ++j) {
      lp.objective[j] = Rat(static_cast<long>(rng.below(11)) - 5);
      if (rng.below(5) == 0) lp.upper[j] = Rat(static_cast<long>(rng.below(4)));
      if (rng.below(7) == 0) lp.set_free(j);
    }
    for (int r = 0; r < m; ++r) {
      RatVec coeffs(v);
      for (Rat& c : coeffs) c = Rat(static_cast<long>(rng.below(11)) - 5);
      Rel rel = rng.below(3) == 0 ? Rel::EQ : (rng.below(2) == 0 ? Rel::LE : Rel::GE);
      lp.add_row(std::move(coeffs), rel, Rat(static_cast<long>(rng.below(21)) - 10));
    }

    LpOutcome out = lp_solve(lp);
    bool pass = false;
    try {
      pass = check_certificate(lp, out);
    } catch (const std::invalid_argument&) {
      pass = false;
    }
    if (!pass) {
      ok = false;
      why = "instance " + std::to_string(t) + " failed certificate verification";
    }
    switch (out.status) {
      case LpStatus::Optimal: ++optimal; break;
      case LpStatus::Infeasible: ++infeasible; break;
      case LpStatus::Unbounded: ++unbounded; break;
    }
  }

  if (ok && infeasible == 0) {
    ok = false;
    why = "no infeasible instance arose; Farkas path unexercised";
  }

  std::ostringstream d;
  d << "1000 solves all certificate-verified (" << optimal << " optimal, " << infeasible
    << " infeasible, " << unbounded << " unbounded)";
  return report(6, ok, ok ? d.str() : why, ms_since(t0));
}

// ---------------------------------------------------------------- criterion 7

bool criterion7() {
  const auto t0 = Clock::now();
  std::string why;
  bool ok = true;

  Rng rng(0xFA17);
  int eene_cases = 0;
  for (int t = 0; t < 500; ++t) {
    int n = 2 + static_cast<int>(rng.below(4));
    RandomEconomyOptions ro;
    ro.force_equal_pair = t % 2 == 0;
    Economy e = random_economy(rng, n, ro);
    Allocation p = random_allocation(rng, n);
    if (t % 4 == 0) {
      // Uniform rows make EENE likely, so the implication is exercised.
      RatVec mean(n, Rat(0));
      for (int i = 0; i < n; ++i)
        for (int o = 0; o < n; ++o) mean[o] += p[i][o] / n;
      for (int i = 0; i < n; ++i) p[i] = mean;
    }
    if (satisfies_EENE(e, p)) {
      ++eene_cases;
      if (!satisfies_ETE(e, p) && ok) {
        ok = false;
        why = "pair " + std::to_string(t) + " satisfies EENE but violates ETE";
      }
    }
  }

  if (ok && eene_cases < 25) {
    ok = false;
    why = "only " + std::to_string(eene_cases) + " EENE cases; battery too weak";
  }
  return report(7, ok,
                ok ? "500 pairs, " + std::to_string(eene_cases) +
                         " satisfied EENE, every one also satisfied ETE"
                   : why,
                ms_since(t0));
}

}  // namespace

int main() {
  int failed = 0;
  if (!criterion1()) ++failed;
  if (!criterion2()) ++failed;
  if (!criterion3()) ++failed;
  if (!criterion4()) ++failed;
  if (!criterion5()) ++failed;
  if (!criterion6()) ++failed;
  if (!criterion7()) ++failed;
  return failed == 0 ? 0 : 1;
}
