#pragma once

// Core membership and the constraint-polytope toolkit behind the two
// built-in certification chains. The strong core admits no weakly blocking
// coalition; the weak core admits no strongly blocking coalition; both
// require individual rationality.

#include "fhm/blocking.hpp"
#include "fhm/dominance.hpp"
#include "fhm/economy.hpp"
#include "fhm/ratlp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fhm {

struct ConstraintTags {
  bool ir = false;
  bool eene = false;
};

// A labelled linear system over allocation variables p[i][o] (flattened as
// i*n+o). The doubly-stochastic rows are always present; nonnegativity is
// carried as variable bounds when the set is turned into an LP.
struct ConstraintSet {
  int n = 0;
  struct Row {
    RatVec coeffs;
    Rel rel;
    Rat rhs;
    std::string label;
  };
  std::vector<Row> rows;

  int var(int agent, int object) const { return agent * n + object; }
  LinearProgram to_lp(const RatVec& objective, Sense sense) const;
  void add(RatVec coeffs, Rel rel, Rat rhs, std::string label);
};

// Doubly-stochastic rows plus, per tag: IR prefix rows (cum of p_i at least
// cum of omega_i, every prefix) and EENE rows (for ordered equal-endowment
// pairs (i, j): cum_i(p_i) - cum_i(p_j) >= 0, every prefix).
ConstraintSet build_constraints(const Economy& e, ConstraintTags tags);

struct ForcedBounds {
  bool feasible = false;
  Rat min, max;
  LpOutcome min_outcome, max_outcome;  // certificates for both solves
};

// Exact min and max of a linear functional over the set.
ForcedBounds forced_bounds(const ConstraintSet& c, const RatVec& functional);

struct PolytopeDominance {
  bool feasible = false;   // the constraint set is nonempty
  bool dominates = false;  // all gaps >= 0
  RatVec gaps;             // per prefix: cum(b)_tau - max over the set of cum(p_agent)_tau
};

// Does bundle b weakly sd-dominate *every* point of the set in `agent`'s
// row? Gap tau compares cum(b) against the set's maximal tau-prefix.
PolytopeDominance dominates_over_polytope(const Economy& e, const ConstraintSet& c, int agent,
                                          const Assignment& b);

struct UniformBlockCertificate {
  bool success = false;
  Coalition coalition;
  Allocation bundles;              // aligned with coalition
  RatMat gaps;                     // per member, per prefix
  std::vector<int> strict_prefix;  // per member: first prefix with gap > 0, -1 if none
  std::string failure;             // empty on success
};

// Certifies that coalition s strongly blocks *every* allocation in the set
// with the fixed bundles b: per member all prefix gaps nonnegative and at
// least one strictly positive. Throws std::invalid_argument when the
// bundles are not a redistribution of the coalition's pooled endowment.
UniformBlockCertificate certify_uniform_strong_block(const Economy& e, const ConstraintSet& c,
                                                     const Coalition& s, const Allocation& b);

// Top trading cycles on an integral market (endowment a permutation
// matrix). Deterministic; throws std::invalid_argument otherwise.
Allocation ttc(const Economy& e);

struct CoreMembershipReport {
  bool member = false;
  BlockMode blocking_mode = BlockMode::Weak;  // mode used for the search
  std::optional<int> ir_violator;             // 0-based, set when IR fails
  std::optional<BlockCertificate> certificate;
  long coalitions_checked = 0;
};

// Strong core: IR and no weakly blocking coalition. Weak core: IR and no
// strongly blocking coalition. max_size caps the coalition search (0 = n).
CoreMembershipReport in_strong_core(const Economy& e, const Allocation& p, int max_size = 0);
CoreMembershipReport in_weak_core(const Economy& e, const Allocation& p, int max_size = 0);

}  // namespace fhm
