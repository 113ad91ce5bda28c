#include "fhm/blocking.hpp"

#include <sstream>
#include <stdexcept>

namespace fhm {

namespace {

void check_coalition(const Economy& e, const Coalition& s) {
  if (s.size() < 2) throw std::invalid_argument("coalition needs at least two members");
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0 || s[k] >= e.n) throw std::invalid_argument("coalition member out of range");
    if (k && s[k] <= s[k - 1]) throw std::invalid_argument("coalition must be strictly ascending");
  }
}

// Shared LP: variables q[k][o] (member k's bundle) and prefix slacks
// t[k][tau] >= 0 tied by  cum(q_k)_tau - t[k][tau] = cum(p_k)_tau. Strong
// mode appends delta >= 0 with  sum_tau t[k][tau] >= delta  per member and
// maximizes delta; weak mode maximizes the total slack.
std::optional<BlockCertificate> block_lp(const Economy& e, const Allocation& p,
                                         const Coalition& s, BlockMode mode) {
  check_coalition(e, s);
  const int n = e.n;
  const int m = static_cast<int>(s.size());
  const bool strong = mode == BlockMode::Strong;
  const int nvars = 2 * m * n + (strong ? 1 : 0);
  LinearProgram lp(nvars);
  auto qv = [&](int k, int o) { return k * n + o; };
  auto tv = [&](int k, int t) { return m * n + k * n + t; };
  const int dv = 2 * m * n;

  for (int k = 0; k < m; ++k) {
    RatVec row(nvars, Rat(0));
    for (int o = 0; o < n; ++o) row[qv(k, o)] = 1;
    lp.add_row(std::move(row), Rel::EQ, Rat(1));
  }
  for (int o = 0; o < n; ++o) {
    RatVec row(nvars, Rat(0));
    Rat pooled = 0;
    for (int k = 0; k < m; ++k) {
      row[qv(k, o)] = 1;
      pooled += e.endow[s[k]][o];
    }
    lp.add_row(std::move(row), Rel::EQ, pooled);
  }
  for (int k = 0; k < m; ++k) {
    const int agent = s[k];
    RatVec target = cum(e.prefs[agent], p[agent]);
    RatVec prefix(nvars, Rat(0));
    for (int t = 0; t < n; ++t) {
      prefix[qv(k, e.prefs[agent][t])] = 1;
      RatVec row = prefix;
      row[tv(k, t)] = -1;
      lp.add_row(std::move(row), Rel::EQ, target[t]);
    }
  }
  if (strong) {
    for (int k = 0; k < m; ++k) {
      RatVec row(nvars, Rat(0));
      for (int t = 0; t < n; ++t) row[tv(k, t)] = 1;
      row[dv] = -1;
      lp.add_row(std::move(row), Rel::GE, Rat(0));
    }
    lp.objective[dv] = 1;
  } else {
    for (int k = 0; k < m; ++k)
      for (int t = 0; t < n; ++t) lp.objective[tv(k, t)] = 1;
  }

  LpOutcome out = lp_solve(lp);
  // Infeasible means no weakly-dominating redistribution exists at all.
  if (out.status != LpStatus::Optimal || out.value == 0) return std::nullopt;

  BlockCertificate cert;
  cert.coalition = s;
  cert.mode = mode;
  cert.bundles.assign(m, RatVec(n));
  cert.slacks.assign(m, RatVec(n));
  for (int k = 0; k < m; ++k)
    for (int o = 0; o < n; ++o) cert.bundles[k][o] = out.primal[qv(k, o)];
  for (int k = 0; k < m; ++k)
    for (int t = 0; t < n; ++t) cert.slacks[k][t] = out.primal[tv(k, t)];
  return cert;
}

}  // namespace

std::optional<BlockCertificate> weak_block_lp(const Economy& e, const Allocation& p,
                                              const Coalition& s) {
  return block_lp(e, p, s, BlockMode::Weak);
}

std::optional<BlockCertificate> strong_block_lp(const Economy& e, const Allocation& p,
                                                const Coalition& s) {
  return block_lp(e, p, s, BlockMode::Strong);
}

std::optional<BlockCertificate> find_blocking_coalition(const Economy& e, const Allocation& p,
                                                        BlockMode mode, int max_size,
                                                        long* checked) {
  const int n = e.n;
  if (max_size == 1)
    throw std::invalid_argument("max_size 1 is meaningless: singletons never block");
  if (max_size <= 0 || max_size > n) max_size = n;
  long count = 0;
  for (int size = 2; size <= max_size; ++size) {
    // Lexicographic combinations of {0..n-1} of the given size.
    Coalition s(size);
    for (int k = 0; k < size; ++k) s[k] = k;
    for (;;) {
      ++count;
      if (auto cert = block_lp(e, p, s, mode)) {
        if (checked) *checked = count;
        return cert;
      }
      int k = size - 1;
      while (k >= 0 && s[k] == n - size + k) --k;
      if (k < 0) break;
      ++s[k];
      for (int j = k + 1; j < size; ++j) s[j] = s[j - 1] + 1;
    }
  }
  if (checked) *checked = count;
  return std::nullopt;
}

bool verify_block_certificate(const Economy& e, const Allocation& p,
                              const BlockCertificate& cert) {
  const int m = static_cast<int>(cert.coalition.size());
  if (m < 2 || static_cast<int>(cert.bundles.size()) != m) return false;
  for (int k = 0; k < m; ++k) {
    int agent = cert.coalition[k];
    if (agent < 0 || agent >= e.n) return false;
    if (k && cert.coalition[k] <= cert.coalition[k - 1]) return false;
    if (static_cast<int>(cert.bundles[k].size()) != e.n) return false;
    if (!is_assignment(cert.bundles[k])) return false;
  }
  for (int o = 0; o < e.n; ++o) {
    Rat lhs = 0, rhs = 0;
    for (int k = 0; k < m; ++k) {
      lhs += cert.bundles[k][o];
      rhs += e.endow[cert.coalition[k]][o];
    }
    if (lhs != rhs) return false;
  }
  bool any_strict = false;
  for (int k = 0; k < m; ++k) {
    int agent = cert.coalition[k];
    if (!weak_sd(e.prefs[agent], cert.bundles[k], p[agent])) return false;
    bool strict = cert.bundles[k] != p[agent] &&
                  strict_sd(e.prefs[agent], cert.bundles[k], p[agent]);
    if (cert.mode == BlockMode::Strong && !strict) return false;
    any_strict = any_strict || strict;
  }
  return any_strict;
}

std::string BlockCertificate::to_text() const {
  std::ostringstream out;
  out << "block certificate\n";
  out << "  mode: " << (mode == BlockMode::Strong ? "strong" : "weak") << "\n";
  out << "  coalition: {";
  for (size_t k = 0; k < coalition.size(); ++k)
    out << (k ? "," : "") << (coalition[k] + 1);
  out << "}\n";
  for (size_t k = 0; k < coalition.size(); ++k)
    out << "  bundle[" << (coalition[k] + 1) << "]: " << rat_row_str(bundles[k]) << "\n";
  for (size_t k = 0; k < coalition.size(); ++k)
    out << "  slack[" << (coalition[k] + 1) << "]: " << rat_row_str(slacks[k]) << "\n";
  return out.str();
}

}  // namespace fhm
