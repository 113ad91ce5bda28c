#pragma once

// Walrasian equilibrium with budget slack, and the weak-core ETE allocation
// search built on it.
//
// For a slack parameter eps >= 0, agent i's consumption set X^eps_i contains
// the nonnegative bundles x with sum(x) <= 1 whose preference prefixes fall
// at most eps below the endowment's: cum(x)_tau >= cum(omega_i)_tau - eps.
// Prices live in the subsimplex (P >= 0, sum P <= 1); budgets carry an
// additive slack alpha >= 0: P.x <= P.omega_i + alpha. An equilibrium is a
// price/slack pair plus bundles, each bundle utility-maximal for its agent
// on X^eps_i within budget, with markets clearing (column sums 1).
//
// Utilities are linear proxies consistent with the strict preference order;
// any strict sd-improvement strictly raises them, which is what links
// equilibria to strong-blocking immunity. The search keeps every quantity an
// exact rational: a solution with residual exactly 0 is an exact equilibrium.

#include "fhm/economy.hpp"
#include "fhm/ratlp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fhm {

struct UtilityProfile {
  RatMat u;  // u[i][o] > 0, strictly decreasing along agent i's order
};

// Rank-based default: u[i][o] = n + 1 - rank_i(o), rank 1 = favorite.
UtilityProfile default_utilities(const Economy& e);

// The rows of X^eps_i over n bundle variables (nonnegativity is carried as
// variable bounds by the consumers of these rows).
std::vector<LpRow> consumption_constraints(const Economy& e, int agent, const Rat& eps);

// Utility-maximal bundle on X^eps_i within budget, ties broken
// lexicographically: among maximizers, maximize the share of the favorite
// object, then of the runner-up, and so on.
Assignment demand(const Economy& e, const UtilityProfile& u, int agent, const RatVec& prices,
                  const Rat& alpha, const Rat& eps);

struct WeSlack {
  RatVec prices;  // subsimplex member
  Rat alpha;      // budget slack
  Rat eps;        // consumption-set slack
  Allocation x;   // per-agent bundles, utility-maximal within budget
};

struct WeSolveOptions {
  int max_iterations = 160;   // tatonnement steps per restart
  int restarts = 4;
  int snap_period = 12;       // try small-denominator price snaps this often
  int stall_limit = 28;       // abandon a restart after this many steps without
                              // improving the best residual seen in it
  unsigned long price_maxden = 1u << 16;
  std::uint64_t seed = 0x5eedULL;
  std::vector<Rat> alpha_ladder;  // defaults to {0, eps/4, eps, 1/8} variants
};

struct WeSolveResult {
  bool converged = false;  // residual <= tol (0 when tol = 0)
  WeSlack we;              // best configuration found (bundles always
                           // exactly utility-maximal for we.prices/alpha)
  Rat residual;            // total |column sum - 1| at we
  int iterations = 0;
};

// Tatonnement over (P, alpha): each step solves one demand-value LP per
// agent and one clearing LP that picks bundles on the demand faces
// minimizing the total market-clearing violation; prices then move along
// the excess-demand signal and are periodically snapped to small
// denominators with an exact retest. All arithmetic is rational; a residual
// of exactly 0 is an exact equilibrium.
WeSolveResult solve_we_slack(const Economy& e, const UtilityProfile& u, const Rat& eps,
                             const Rat& tol, const WeSolveOptions& opts = {});

// Averages rows within each equal class. Exact; preserves double
// stochasticity, and maps an equilibrium allocation to an equilibrium
// allocation (members share preferences, endowments, and budgets).
Allocation symmetrize(const Allocation& x, const EqualClassPartition& part);

// Entrywise best rational approximation with denominator <= maxden, then an
// exact repair back to a doubly stochastic matrix: row deficits move onto
// the largest entries, column deficits are fixed by row-preserving
// transport. When `part` is given, class rows are averaged first and
// repaired jointly so equal classes stay equal. Returns std::nullopt when
// the repair cannot restore double stochasticity.
std::optional<Allocation> rationalize(const Allocation& m, unsigned long maxden,
                                      const EqualClassPartition* part = nullptr);

struct FindCoreOptions {
  int schedule_len = 16;          // eps = 2^-k for k = 1..schedule_len
  unsigned long maxden = 64;      // rounding ladder cap for candidates
  Rat tol = Rat(0);               // clearing tolerance passed to the solver
  std::uint64_t seed = 0x5eedULL;
  int time_budget_ms = 50000;     // soft cap on the whole search
};

struct FindCoreResult {
  bool success = false;
  Allocation allocation;  // verified: IR, ETE, weak-core member
  bool ir = false, ete = false, eene = false;  // eene is informational
  long coalitions_checked = 0;
  Rat eps_used;
  std::vector<std::string> transcript;  // deterministic search log
};

// Walks eps = 0 then the 2^-k schedule; for each converged equilibrium,
// symmetrizes, rounds through a denominator ladder, and accepts the first
// candidate that passes the exact verifications (is_IR, satisfies_ETE,
// in_weak_core). Exact verification is the sole source of truth.
FindCoreResult find_weak_core_ETE(const Economy& e, const FindCoreOptions& opts = {});

}  // namespace fhm
