#pragma once

// First-order stochastic dominance machinery for strict preference orders,
// and the allocation properties built on it: individual rationality, envy,
// equal treatment of equals, equal-endowment no-envy, and sd-efficiency.

#include "fhm/economy.hpp"
#include "fhm/ratlp.hpp"

#include <optional>
#include <utility>

namespace fhm {

// Prefix sums of `a` in the order given by `pref`: entry t is the total
// share of the t+1 best-ranked objects. Nondecreasing, ends at sum(a).
RatVec cum(const std::vector<int>& pref, const Assignment& a);

// a weakly sd-dominates b under pref: every cum prefix of a >= that of b.
bool weak_sd(const std::vector<int>& pref, const Assignment& a, const Assignment& b);

// Weak dominance plus at least one strictly larger prefix (equivalently,
// weak dominance and a != b, since cum is invertible).
bool strict_sd(const std::vector<int>& pref, const Assignment& a, const Assignment& b);

// Individual rationality: every agent's bundle weakly sd-dominates their
// endowment. On failure, *violator (if given) is the lowest 0-based agent.
bool is_IR(const Economy& e, const Allocation& p, int* violator = nullptr);

// Agent i envies agent j when p_i fails to weakly sd-dominate p_j under
// i's preferences.
bool envies(const Economy& e, const Allocation& p, int i, int j);

// Equal treatment of equals: agents in the same equal class (identical
// preferences and endowments) receive identical rows. On failure *witness
// is the lexicographically first offending pair (i, j), i < j, 0-based.
bool satisfies_ETE(const Economy& e, const Allocation& p,
                   std::pair<int, int>* witness = nullptr);

// Equal-endowment no-envy: no agent envies another agent with the same
// endowment row (preferences may differ). On failure *witness is the first
// ordered pair (i, j) with i envying j, scanning i then j ascending.
bool satisfies_EENE(const Economy& e, const Allocation& p,
                    std::pair<int, int>* witness = nullptr);

struct SdEfficiencyResult {
  bool efficient = false;
  Rat improvement;                  // LP optimum: total strict prefix slack
  std::optional<Allocation> witness;  // dominating allocation when inefficient
};

// sd-efficiency via one exact LP: maximize the total prefix slack of a
// doubly stochastic q that weakly sd-dominates p agentwise. Optimum zero
// means no allocation weakly dominates p with any strict prefix, i.e. p is
// sd-efficient; a positive optimum yields a dominating witness.
SdEfficiencyResult is_sd_efficient(const Economy& e, const Allocation& p);

}  // namespace fhm
