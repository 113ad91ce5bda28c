#pragma once

// Coalitional blocking tests. A coalition S blocks an allocation p by
// redistributing its pooled endowment: a family (q_i, i in S) of assignments
// with sum_S q_i = sum_S omega_i. Weak blocking: every member weakly
// sd-prefers q_i to p_i and at least one strictly. Strong blocking: every
// member strictly sd-prefers q_i.
//
// Both tests are single exact LPs over prefix slack variables; a returned
// certificate always re-verifies by direct substitution.

#include "fhm/dominance.hpp"
#include "fhm/economy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fhm {

using Coalition = std::vector<int>;  // 0-based agents, strictly ascending

enum class BlockMode { Weak, Strong };

struct BlockCertificate {
  Coalition coalition;
  BlockMode mode = BlockMode::Weak;
  Allocation bundles;  // one row per member, aligned with coalition order
  RatMat slacks;       // per member: cum(q_i) - cum(p_i) by prefix

  std::string to_text() const;  // 1-based agents, lowest-term rationals
};

// LP test for one coalition. Returns a certificate iff S blocks p in the
// given mode; std::nullopt otherwise. Throws std::invalid_argument on a
// coalition that is not ascending, out of range, or has fewer than two
// members.
std::optional<BlockCertificate> weak_block_lp(const Economy& e, const Allocation& p,
                                              const Coalition& s);
std::optional<BlockCertificate> strong_block_lp(const Economy& e, const Allocation& p,
                                                const Coalition& s);

// Scans coalitions in canonical order (size 2 upward, lexicographic within
// a size) up to max_size (0 = all sizes) and returns the first certificate.
// `checked` (if given) receives the number of coalitions tested.
std::optional<BlockCertificate> find_blocking_coalition(const Economy& e, const Allocation& p,
                                                        BlockMode mode, int max_size = 0,
                                                        long* checked = nullptr);

// Substitution-only re-verification of a certificate against (e, p).
bool verify_block_certificate(const Economy& e, const Allocation& p,
                              const BlockCertificate& cert);

}  // namespace fhm
