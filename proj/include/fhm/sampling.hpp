#pragma once

// Deterministic random generators for markets, preference profiles and
// doubly stochastic matrices. All draws go through Rng::below so results
// are identical across platforms and standard library implementations.
// Doubly stochastic matrices are built as convex combinations of
// permutation matrices with exact rational weights.

#include "fhm/economy.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fhm {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  std::uint64_t next() { return gen(); }
  // Uniform-ish value in [0, n); the modulo bias is irrelevant here, the
  // point is bit-for-bit reproducibility for a given seed.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen() % n; }
};

std::vector<int> random_permutation(Rng& rng, int n);

// One strict preference order per agent.
std::vector<std::vector<int>> random_preferences(Rng& rng, int n);

// Convex combination of `terms` random permutation matrices; weights are
// integers in [1, weight_scale] normalized to sum 1.
Allocation random_doubly_stochastic(Rng& rng, int n, int terms, int weight_scale = 8);

struct RandomEconomyOptions {
  int endowment_terms = 3;     // permutation matrices mixed into the endowment
  int weight_scale = 8;
  bool force_equal_pair = false;  // make agents 1 and 2 an equal class
};

Economy random_economy(Rng& rng, int n, const RandomEconomyOptions& opts = {});

// Random preferences with a permutation-matrix endowment.
Economy random_integral_market(Rng& rng, int n);

Allocation random_allocation(Rng& rng, int n, int terms = 3, int weight_scale = 8);

}  // namespace fhm
