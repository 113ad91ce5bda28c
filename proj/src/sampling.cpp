#include "fhm/sampling.hpp"

#include <numeric>

namespace fhm {

std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(p[i], p[static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1))]);
  return p;
}

std::vector<std::vector<int>> random_preferences(Rng& rng, int n) {
  std::vector<std::vector<int>> prefs(n);
  for (int i = 0; i < n; ++i) prefs[i] = random_permutation(rng, n);
  return prefs;
}

Allocation random_doubly_stochastic(Rng& rng, int n, int terms, int weight_scale) {
  if (terms < 1) terms = 1;
  std::vector<long> w(terms);
  long total = 0;
  for (int t = 0; t < terms; ++t) {
    w[t] = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(weight_scale)));
    total += w[t];
  }
  Allocation m(n, RatVec(n, Rat(0)));
  for (int t = 0; t < terms; ++t) {
    std::vector<int> perm = random_permutation(rng, n);
    Rat weight(w[t], total);
    weight.canonicalize();
    for (int i = 0; i < n; ++i) m[i][perm[i]] += weight;
  }
  return m;
}

Economy random_economy(Rng& rng, int n, const RandomEconomyOptions& opts) {
  Economy e;
  e.n = n;
  e.prefs = random_preferences(rng, n);
  e.endow = random_doubly_stochastic(rng, n, opts.endowment_terms, opts.weight_scale);
  if (opts.force_equal_pair && n >= 2) {
    e.prefs[1] = e.prefs[0];
    // Averaging two rows keeps both row sums and column sums intact.
    for (int o = 0; o < n; ++o) {
      Rat mean = (e.endow[0][o] + e.endow[1][o]) / 2;
      e.endow[0][o] = e.endow[1][o] = mean;
    }
  }
  e.rebuild_ranks();
  return e;
}

Economy random_integral_market(Rng& rng, int n) {
  Economy e;
  e.n = n;
  e.prefs = random_preferences(rng, n);
  e.endow.assign(n, RatVec(n, Rat(0)));
  std::vector<int> perm = random_permutation(rng, n);
  for (int i = 0; i < n; ++i) e.endow[i][perm[i]] = 1;
  e.rebuild_ranks();
  return e;
}

Allocation random_allocation(Rng& rng, int n, int terms, int weight_scale) {
  return random_doubly_stochastic(rng, n, terms, weight_scale);
}

}  // namespace fhm
