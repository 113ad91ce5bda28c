#include "fhm/dominance.hpp"

namespace fhm {

RatVec cum(const std::vector<int>& pref, const Assignment& a) {
  RatVec out(pref.size());
  Rat run = 0;
  for (size_t t = 0; t < pref.size(); ++t) {
    run += a[pref[t]];
    out[t] = run;
  }
  return out;
}

bool weak_sd(const std::vector<int>& pref, const Assignment& a, const Assignment& b) {
  Rat ca = 0, cb = 0;
  for (size_t t = 0; t < pref.size(); ++t) {
    ca += a[pref[t]];
    cb += b[pref[t]];
    if (ca < cb) return false;
  }
  return true;
}

bool strict_sd(const std::vector<int>& pref, const Assignment& a, const Assignment& b) {
  return weak_sd(pref, a, b) && a != b;
}

bool is_IR(const Economy& e, const Allocation& p, int* violator) {
  for (int i = 0; i < e.n; ++i)
    if (!weak_sd(e.prefs[i], p[i], e.endow[i])) {
      if (violator) *violator = i;
      return false;
    }
  return true;
}

bool envies(const Economy& e, const Allocation& p, int i, int j) {
  return !weak_sd(e.prefs[i], p[i], p[j]);
}

bool satisfies_ETE(const Economy& e, const Allocation& p, std::pair<int, int>* witness) {
  EqualClassPartition part = equal_class_partition(e);
  for (int i = 0; i < e.n; ++i)
    for (int j = i + 1; j < e.n; ++j) {
      if (part.class_of[i] != part.class_of[j]) continue;
      if (p[i] != p[j]) {
        if (witness) *witness = {i, j};
        return false;
      }
    }
  return true;
}

bool satisfies_EENE(const Economy& e, const Allocation& p, std::pair<int, int>* witness) {
  for (int i = 0; i < e.n; ++i)
    for (int j = 0; j < e.n; ++j) {
      if (i == j || e.endow[i] != e.endow[j]) continue;
      if (envies(e, p, i, j)) {
        if (witness) *witness = {i, j};
        return false;
      }
    }
  return true;
}

SdEfficiencyResult is_sd_efficient(const Economy& e, const Allocation& p) {
  const int n = e.n;
  // Variables: q[i][o] at i*n+o, then prefix slacks s[i][t] at n*n + i*n + t.
  LinearProgram lp(2 * n * n);
  auto qv = [&](int i, int o) { return i * n + o; };
  auto sv = [&](int i, int t) { return n * n + i * n + t; };

  for (int i = 0; i < n; ++i) {
    RatVec row(lp.num_vars, Rat(0));
    for (int o = 0; o < n; ++o) row[qv(i, o)] = 1;
    lp.add_row(std::move(row), Rel::EQ, Rat(1));
  }
  for (int o = 0; o < n; ++o) {
    RatVec row(lp.num_vars, Rat(0));
    for (int i = 0; i < n; ++i) row[qv(i, o)] = 1;
    lp.add_row(std::move(row), Rel::EQ, Rat(1));
  }
  for (int i = 0; i < n; ++i) {
    RatVec target = cum(e.prefs[i], p[i]);
    RatVec row(lp.num_vars, Rat(0));
    for (int t = 0; t < n; ++t) {
      row[qv(i, e.prefs[i][t])] = 1;  // running prefix: extend by one object
      RatVec r = row;
      r[sv(i, t)] = -1;
      lp.add_row(std::move(r), Rel::EQ, target[t]);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < n; ++t) lp.objective[sv(i, t)] = 1;

  LpOutcome out = lp_solve(lp);
  // q = p with zero slack is always feasible and the slack total is bounded,
  // so the solve is Optimal by construction.
  SdEfficiencyResult res;
  res.improvement = out.value;
  res.efficient = (out.value == 0);
  if (!res.efficient) {
    Allocation q(n, RatVec(n));
    for (int i = 0; i < n; ++i)
      for (int o = 0; o < n; ++o) q[i][o] = out.primal[qv(i, o)];
    res.witness = std::move(q);
  }
  return res;
}

}  // namespace fhm
