#include "fhm/core.hpp"

#include <stdexcept>

namespace fhm {

void ConstraintSet::add(RatVec coeffs, Rel rel, Rat rhs, std::string label) {
  rows.push_back(Row{std::move(coeffs), rel, std::move(rhs), std::move(label)});
}

LinearProgram ConstraintSet::to_lp(const RatVec& objective, Sense sense) const {
  LinearProgram lp(n * n);
  lp.objective = objective;
  lp.sense = sense;
  for (const Row& r : rows) lp.add_row(r.coeffs, r.rel, r.rhs);
  return lp;  // default bounds keep every share >= 0
}

ConstraintSet build_constraints(const Economy& e, ConstraintTags tags) {
  const int n = e.n;
  ConstraintSet c;
  c.n = n;
  for (int i = 0; i < n; ++i) {
    RatVec row(n * n, Rat(0));
    for (int o = 0; o < n; ++o) row[c.var(i, o)] = 1;
    c.add(std::move(row), Rel::EQ, Rat(1), "row sum agent " + std::to_string(i + 1));
  }
  for (int o = 0; o < n; ++o) {
    RatVec row(n * n, Rat(0));
    for (int i = 0; i < n; ++i) row[c.var(i, o)] = 1;
    c.add(std::move(row), Rel::EQ, Rat(1), "column sum " + object_name(o));
  }
  if (tags.ir) {
    for (int i = 0; i < n; ++i) {
      RatVec target = cum(e.prefs[i], e.endow[i]);
      RatVec prefix(n * n, Rat(0));
      for (int t = 0; t < n; ++t) {
        prefix[c.var(i, e.prefs[i][t])] = 1;
        c.add(prefix, Rel::GE, target[t],
              "ir agent " + std::to_string(i + 1) + " prefix " + std::to_string(t + 1));
      }
    }
  }
  if (tags.eene) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j || e.endow[i] != e.endow[j]) continue;
        RatVec prefix(n * n, Rat(0));
        for (int t = 0; t < n; ++t) {
          prefix[c.var(i, e.prefs[i][t])] += 1;
          prefix[c.var(j, e.prefs[i][t])] -= 1;
          c.add(prefix, Rel::GE, Rat(0),
                "eene " + std::to_string(i + 1) + " vs " + std::to_string(j + 1) + " prefix " +
                    std::to_string(t + 1));
        }
      }
  }
  return c;
}

ForcedBounds forced_bounds(const ConstraintSet& c, const RatVec& functional) {
  ForcedBounds fb;
  LpOutcome lo = lp_solve(c.to_lp(functional, Sense::Minimize));
  if (lo.status != LpStatus::Optimal) return fb;  // infeasible (unbounded impossible here)
  LpOutcome hi = lp_solve(c.to_lp(functional, Sense::Maximize));
  fb.feasible = true;
  fb.min = lo.value;
  fb.max = hi.value;
  fb.min_outcome = std::move(lo);
  fb.max_outcome = std::move(hi);
  return fb;
}

PolytopeDominance dominates_over_polytope(const Economy& e, const ConstraintSet& c, int agent,
                                          const Assignment& b) {
  if (agent < 0 || agent >= e.n) throw std::invalid_argument("agent out of range");
  if (static_cast<int>(b.size()) != e.n || !is_assignment(b))
    throw std::invalid_argument("bundle is not an assignment");
  PolytopeDominance res;
  RatVec target = cum(e.prefs[agent], b);
  res.gaps.assign(e.n, Rat(0));
  RatVec functional(c.n * c.n, Rat(0));
  for (int t = 0; t < e.n; ++t) {
    functional[c.var(agent, e.prefs[agent][t])] = 1;
    LpOutcome out = lp_solve(c.to_lp(functional, Sense::Maximize));
    if (out.status != LpStatus::Optimal) return res;  // infeasible set
    res.gaps[t] = target[t] - out.value;
  }
  res.feasible = true;
  res.dominates = true;
  for (const Rat& g : res.gaps)
    if (g < 0) res.dominates = false;
  return res;
}

UniformBlockCertificate certify_uniform_strong_block(const Economy& e, const ConstraintSet& c,
                                                     const Coalition& s, const Allocation& b) {
  if (s.size() < 2) throw std::invalid_argument("coalition needs at least two members");
  if (b.size() != s.size()) throw std::invalid_argument("one bundle row per member required");
  for (size_t k = 0; k < s.size(); ++k) {
    if (s[k] < 0 || s[k] >= e.n) throw std::invalid_argument("coalition member out of range");
    if (k && s[k] <= s[k - 1]) throw std::invalid_argument("coalition must be strictly ascending");
    if (static_cast<int>(b[k].size()) != e.n || !is_assignment(b[k]))
      throw std::invalid_argument("bundle row is not an assignment");
  }
  for (int o = 0; o < e.n; ++o) {
    Rat lhs = 0, rhs = 0;
    for (size_t k = 0; k < s.size(); ++k) {
      lhs += b[k][o];
      rhs += e.endow[s[k]][o];
    }
    if (lhs != rhs)
      throw std::invalid_argument("bundles do not redistribute the coalition's endowment");
  }

  UniformBlockCertificate cert;
  cert.coalition = s;
  cert.bundles = b;
  cert.gaps.assign(s.size(), RatVec());
  cert.strict_prefix.assign(s.size(), -1);
  bool all_ok = true;
  for (size_t k = 0; k < s.size(); ++k) {
    PolytopeDominance d = dominates_over_polytope(e, c, s[k], b[k]);
    if (!d.feasible) {
      cert.failure = "constraint set is infeasible";
      return cert;
    }
    cert.gaps[k] = d.gaps;
    for (int t = 0; t < e.n; ++t)
      if (d.gaps[t] > 0) {
        cert.strict_prefix[k] = t;
        break;
      }
    if (!d.dominates) {
      all_ok = false;
      if (cert.failure.empty())
        cert.failure = "agent " + std::to_string(s[k] + 1) + " has a negative prefix gap";
    } else if (cert.strict_prefix[k] < 0) {
      all_ok = false;
      if (cert.failure.empty())
        cert.failure = "agent " + std::to_string(s[k] + 1) + " has no strictly positive prefix";
    }
  }
  cert.success = all_ok;
  return cert;
}

Allocation ttc(const Economy& e) {
  if (!is_integral_market(e)) throw std::invalid_argument("ttc requires an integral market");
  const int n = e.n;
  std::vector<int> owner(n, -1);  // object -> owning agent
  for (int i = 0; i < n; ++i)
    for (int o = 0; o < n; ++o)
      if (e.endow[i][o] == 1) owner[o] = i;
  for (int o = 0; o < n; ++o)
    if (owner[o] < 0) throw std::invalid_argument("ttc requires a permutation endowment");

  Allocation p(n, RatVec(n, Rat(0)));
  std::vector<bool> agent_done(n, false), object_gone(n, false);
  int remaining = n;
  std::vector<int> points_to(n, -1);
  while (remaining > 0) {
    // Each live agent points at the owner of their best live object; any
    // walk in this functional graph ends in a cycle, which trades and exits.
    for (int i = 0; i < n; ++i) {
      if (agent_done[i]) continue;
      for (int o : e.prefs[i])
        if (!object_gone[o]) {
          points_to[i] = owner[o];
          break;
        }
    }
    int start = 0;
    while (agent_done[start]) ++start;
    std::vector<int> stamp(n, -1);
    int walk = start, step = 0;
    while (stamp[walk] < 0) {
      stamp[walk] = step++;
      walk = points_to[walk];
    }
    // walk is now on the cycle; collect it.
    std::vector<int> cycle;
    int cur = walk;
    do {
      cycle.push_back(cur);
      cur = points_to[cur];
    } while (cur != walk);
    for (int i : cycle) {
      int best = -1;
      for (int o : e.prefs[i])
        if (!object_gone[o]) {
          best = o;
          break;
        }
      p[i][best] = 1;
    }
    for (int i : cycle) {
      int got = -1;
      for (int o = 0; o < n; ++o)
        if (p[i][o] == 1) got = o;
      object_gone[got] = true;
      agent_done[i] = true;
      --remaining;
    }
  }
  return p;
}

namespace {

CoreMembershipReport core_membership(const Economy& e, const Allocation& p, BlockMode mode,
                                     int max_size) {
  CoreMembershipReport rep;
  rep.blocking_mode = mode;
  int violator = -1;
  if (!is_IR(e, p, &violator)) {
    rep.member = false;
    rep.ir_violator = violator;
    return rep;
  }
  rep.certificate = find_blocking_coalition(e, p, mode, max_size, &rep.coalitions_checked);
  rep.member = !rep.certificate.has_value();
  return rep;
}

}  // namespace

CoreMembershipReport in_strong_core(const Economy& e, const Allocation& p, int max_size) {
  return core_membership(e, p, BlockMode::Weak, max_size);
}

CoreMembershipReport in_weak_core(const Economy& e, const Allocation& p, int max_size) {
  return core_membership(e, p, BlockMode::Strong, max_size);
}

}  // namespace fhm
