#include "fhm/equilibrium.hpp"

#include "fhm/blocking.hpp"
#include "fhm/core.hpp"
#include "fhm/dominance.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

namespace fhm {

UtilityProfile default_utilities(const Economy& e) {
  UtilityProfile up;
  up.u.assign(e.n, RatVec(e.n, Rat(0)));
  for (int i = 0; i < e.n; ++i)
    for (int o = 0; o < e.n; ++o) up.u[i][o] = e.n - e.rank_of(i, o);
  return up;
}

std::vector<LpRow> consumption_constraints(const Economy& e, int agent, const Rat& eps) {
  std::vector<LpRow> rows;
  RatVec ones(e.n, Rat(1));
  rows.push_back(LpRow{ones, Rel::LE, Rat(1)});
  RatVec target = cum(e.prefs[agent], e.endow[agent]);
  RatVec prefix(e.n, Rat(0));
  for (int t = 0; t < e.n; ++t) {
    prefix[e.prefs[agent][t]] = 1;
    rows.push_back(LpRow{prefix, Rel::GE, Rat(target[t] - eps)});
  }
  return rows;
}

namespace {

// Demand LP skeleton for one agent: consumption set plus the budget row.
LinearProgram demand_lp(const Economy& e, int agent, const RatVec& prices, const Rat& alpha,
                        const Rat& eps) {
  LinearProgram lp(e.n);
  for (auto& r : consumption_constraints(e, agent, eps)) lp.add_row(r.coeffs, r.rel, r.rhs);
  Rat budget = alpha;
  for (int o = 0; o < e.n; ++o) budget += prices[o] * e.endow[agent][o];
  lp.add_row(prices, Rel::LE, budget);
  return lp;
}

Rat demand_value(const Economy& e, const UtilityProfile& u, int agent, const RatVec& prices,
                 const Rat& alpha, const Rat& eps) {
  LinearProgram lp = demand_lp(e, agent, prices, alpha, eps);
  lp.objective = u.u[agent];
  LpOutcome out = lp_solve(lp);
  // omega_i is always feasible and the set is bounded, so Optimal holds.
  return out.value;
}

struct ClearingOutcome {
  Rat residual;  // sum of |column sum - 1|
  Allocation x;
  RatVec excess;  // per object: column sum - 1
};

// One LP over all agents: bundles constrained to each agent's demand face
// (utility pinned at v_i), deviation variables absorb the clearing error.
ClearingOutcome clearing_lp(const Economy& e, const UtilityProfile& u, const RatVec& prices,
                            const Rat& alpha, const Rat& eps, const RatVec& v) {
  const int n = e.n;
  LinearProgram lp(n * n + 2 * n);
  auto xv = [&](int i, int o) { return i * n + o; };
  auto dplus = [&](int o) { return n * n + o; };
  auto dminus = [&](int o) { return n * n + n + o; };

  for (int i = 0; i < n; ++i) {
    for (auto& r : consumption_constraints(e, i, eps)) {
      RatVec row(lp.num_vars, Rat(0));
      for (int o = 0; o < n; ++o) row[xv(i, o)] = r.coeffs[o];
      lp.add_row(std::move(row), r.rel, r.rhs);
    }
    RatVec brow(lp.num_vars, Rat(0));
    Rat budget = alpha;
    for (int o = 0; o < n; ++o) {
      brow[xv(i, o)] = prices[o];
      budget += prices[o] * e.endow[i][o];
    }
    lp.add_row(std::move(brow), Rel::LE, budget);
    RatVec urow(lp.num_vars, Rat(0));
    for (int o = 0; o < n; ++o) urow[xv(i, o)] = u.u[i][o];
    lp.add_row(std::move(urow), Rel::EQ, v[i]);
  }
  for (int o = 0; o < n; ++o) {
    RatVec row(lp.num_vars, Rat(0));
    for (int i = 0; i < n; ++i) row[xv(i, o)] = 1;
    row[dplus(o)] = -1;
    row[dminus(o)] = 1;
    lp.add_row(std::move(row), Rel::EQ, Rat(1));
  }
  lp.sense = Sense::Minimize;
  for (int o = 0; o < n; ++o) {
    lp.objective[dplus(o)] = 1;
    lp.objective[dminus(o)] = 1;
  }

  LpOutcome out = lp_solve(lp);
  ClearingOutcome res;
  res.residual = out.value;
  res.x.assign(n, RatVec(n));
  res.excess.assign(n, Rat(0));
  for (int i = 0; i < n; ++i)
    for (int o = 0; o < n; ++o) res.x[i][o] = out.primal[xv(i, o)];
  for (int o = 0; o < n; ++o) res.excess[o] = out.primal[dplus(o)] - out.primal[dminus(o)];
  return res;
}

RatVec normalize_prices(RatVec p) {
  Rat s = 0;
  for (Rat& v : p) {
    if (v < 0) v = 0;
    s += v;
  }
  if (s == 0) return RatVec(p.size(), Rat(1, static_cast<long>(p.size())));
  for (Rat& v : p) v /= s;
  return p;
}

RatVec approx_prices(const RatVec& p, unsigned long maxden) {
  RatVec out(p.size());
  for (size_t o = 0; o < p.size(); ++o) out[o] = approximate_rational(p[o], maxden);
  return normalize_prices(std::move(out));
}

}  // namespace

Assignment demand(const Economy& e, const UtilityProfile& u, int agent, const RatVec& prices,
                  const Rat& alpha, const Rat& eps) {
  LinearProgram lp = demand_lp(e, agent, prices, alpha, eps);
  lp.objective = u.u[agent];
  LpOutcome out = lp_solve(lp);
  // Pin the value, then maximize shares object by object in rank order.
  lp.add_row(u.u[agent], Rel::EQ, out.value);
  Assignment x(e.n, Rat(0));
  for (int t = 0; t < e.n; ++t) {
    const int o = e.prefs[agent][t];
    lp.objective.assign(e.n, Rat(0));
    lp.objective[o] = 1;
    LpOutcome step = lp_solve(lp);
    x[o] = step.value;
    RatVec pin(e.n, Rat(0));
    pin[o] = 1;
    lp.add_row(std::move(pin), Rel::EQ, step.value);
  }
  return x;
}

WeSolveResult solve_we_slack(const Economy& e, const UtilityProfile& u, const Rat& eps,
                             const Rat& tol, const WeSolveOptions& opts) {
  const int n = e.n;
  std::mt19937_64 rng(opts.seed);
  auto draw = [&](int lo, int hi) {  // uniform-ish integer, platform-stable
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  std::vector<Rat> alphas = opts.alpha_ladder;
  if (alphas.empty()) {
    alphas.push_back(Rat(0));
    if (eps > 0) {
      alphas.push_back(Rat(eps / 4));
      alphas.push_back(eps);
    } else {
      alphas.push_back(Rat(1, 64));
      alphas.push_back(Rat(1, 8));
      alphas.push_back(Rat(1, 2));
    }
  }
  static const unsigned long kSnapDens[] = {1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128};

  WeSolveResult best;
  best.residual = Rat(n + 1);  // larger than any achievable residual
  int iterations = 0;

  auto evaluate = [&](const RatVec& prices, const Rat& alpha) {
    RatVec v(n);
    for (int i = 0; i < n; ++i) v[i] = demand_value(e, u, i, prices, alpha, eps);
    ClearingOutcome c = clearing_lp(e, u, prices, alpha, eps, v);
    ++iterations;
    if (c.residual < best.residual) {
      best.residual = c.residual;
      best.we = WeSlack{prices, alpha, eps, c.x};
    }
    return c;
  };

  for (const Rat& alpha : alphas) {
    for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
      RatVec prices(n, Rat(1, n));
      if (restart > 0) {
        for (int o = 0; o < n; ++o) prices[o] = Rat(draw(1, 16));
        prices = normalize_prices(std::move(prices));
      }
      Rat lambda(1, 4);
      Rat prev_residual(-1);
      Rat restart_best(-1);
      int stalled = 0;
      for (int iter = 0; iter < opts.max_iterations; ++iter) {
        ClearingOutcome c = evaluate(prices, alpha);
        if (c.residual <= tol) {
          best.converged = true;
          best.iterations = iterations;
          return best;
        }
        if (restart_best < 0 || c.residual < restart_best) {
          restart_best = c.residual;
          stalled = 0;
        } else if (++stalled >= opts.stall_limit) {
          break;
        }
        if (iter % std::max(1, opts.snap_period) == opts.snap_period - 1) {
          for (unsigned long den : kSnapDens) {
            RatVec snapped = approx_prices(prices, den);
            if (snapped == prices) continue;
            ClearingOutcome sc = evaluate(snapped, alpha);
            if (sc.residual <= tol) {
              best.converged = true;
              best.iterations = iterations;
              return best;
            }
          }
        }
        if (prev_residual >= 0) {
          if (c.residual >= prev_residual)
            lambda = lambda * 2 / 3;
          else
            lambda = std::min(Rat(4), Rat(lambda * 9 / 8));
          if (lambda < Rat(1, 4096)) lambda = Rat(1, 4096);
        }
        prev_residual = c.residual;
        RatVec next(n);
        for (int o = 0; o < n; ++o) next[o] = prices[o] + lambda * c.excess[o];
        prices = approx_prices(normalize_prices(std::move(next)), opts.price_maxden);
      }
    }
  }
  best.iterations = iterations;
  return best;
}

Allocation symmetrize(const Allocation& x, const EqualClassPartition& part) {
  Allocation out = x;
  for (const auto& group : part.groups) {
    if (group.size() < 2) continue;
    RatVec mean(x[0].size(), Rat(0));
    for (int i : group)
      for (size_t o = 0; o < mean.size(); ++o) mean[o] += x[i][o];
    for (Rat& v : mean) v /= static_cast<long>(group.size());
    for (int i : group) out[i] = mean;
  }
  return out;
}

std::optional<Allocation> rationalize(const Allocation& m, unsigned long maxden,
                                      const EqualClassPartition* part) {
  const int n = static_cast<int>(m.size());
  // Work on one representative row per class, with multiplicities.
  std::vector<std::vector<int>> groups;
  if (part) {
    groups = part->groups;
  } else {
    for (int i = 0; i < n; ++i) groups.push_back({i});
  }
  const int g = static_cast<int>(groups.size());
  RatMat rows(g, RatVec(n, Rat(0)));
  for (int r = 0; r < g; ++r) {
    for (int i : groups[r])
      for (int o = 0; o < n; ++o) rows[r][o] += m[i][o];
    for (int o = 0; o < n; ++o) {
      rows[r][o] /= static_cast<long>(groups[r].size());
      if (rows[r][o] < 0) rows[r][o] = 0;
      if (rows[r][o] > 1) rows[r][o] = 1;
      rows[r][o] = approximate_rational(rows[r][o], maxden);
    }
  }

  // Row repair: push each row's deficit onto its largest entries.
  for (int r = 0; r < g; ++r) {
    Rat delta = Rat(1) - rat_sum(rows[r]);
    while (delta != 0) {
      int target = 0;
      for (int o = 1; o < n; ++o)
        if (rows[r][o] > rows[r][target]) target = o;
      if (delta > 0 || rows[r][target] + delta >= 0) {
        rows[r][target] += delta;
        delta = 0;
      } else {
        if (rows[r][target] == 0) return std::nullopt;  // nothing left to take
        delta += rows[r][target];
        rows[r][target] = 0;
      }
    }
  }

  // Column repair: move mass from surplus to deficit columns inside a row
  // (row sums stay 1; class members move together, weighting the transfer).
  RatVec colsum(n, Rat(0));
  for (int r = 0; r < g; ++r)
    for (int o = 0; o < n; ++o) colsum[o] += rows[r][o] * static_cast<long>(groups[r].size());
  for (int guard = 0; guard < 10 * n * n; ++guard) {
    int src = -1, dst = -1;
    for (int o = 0; o < n; ++o) {
      if (colsum[o] > 1 && (src < 0 || colsum[o] > colsum[src])) src = o;
      if (colsum[o] < 1 && (dst < 0 || colsum[o] < colsum[dst])) dst = o;
    }
    if (src < 0 && dst < 0) break;
    if (src < 0 || dst < 0) return std::nullopt;  // cannot happen if rows sum to 1
    int row = -1;
    for (int r = 0; r < g; ++r)
      if (rows[r][src] > 0 && (row < 0 || rows[r][src] > rows[row][src])) row = r;
    if (row < 0) return std::nullopt;
    const Rat w(static_cast<long>(groups[row].size()));
    Rat amount = std::min(Rat(colsum[src] - 1), Rat(1 - colsum[dst]));
    Rat move = std::min(rows[row][src], Rat(amount / w));
    if (move == 0) return std::nullopt;
    rows[row][src] -= move;
    rows[row][dst] += move;
    colsum[src] -= move * w;
    colsum[dst] += move * w;
  }

  Allocation out(n, RatVec(n));
  for (int r = 0; r < g; ++r)
    for (int i : groups[r]) out[i] = rows[r];
  if (!is_doubly_stochastic(out)) return std::nullopt;
  return out;
}

FindCoreResult find_weak_core_ETE(const Economy& e, const FindCoreOptions& opts) {
  FindCoreResult res;
  const EqualClassPartition part = equal_class_partition(e);
  const UtilityProfile u = default_utilities(e);
  const auto started = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - started)
                  .count();
    return ms > opts.time_budget_ms;
  };

  std::vector<Rat> schedule;
  schedule.push_back(Rat(0));
  Rat eps(1);
  for (int k = 1; k <= opts.schedule_len; ++k) {
    eps /= 2;
    schedule.push_back(eps);
  }

  std::vector<unsigned long> ladder;
  for (unsigned long d : {1ul, 2ul, 3ul, 4ul, 6ul, 8ul, 12ul, 16ul, 24ul, 32ul, 48ul, 64ul,
                          96ul, 128ul})
    if (d <= opts.maxden) ladder.push_back(d);
  if (ladder.empty() || ladder.back() != opts.maxden) ladder.push_back(opts.maxden);

  for (size_t step = 0; step < schedule.size(); ++step) {
    WeSolveOptions wopts;
    wopts.seed = opts.seed + 0x9e3779b97f4a7c15ULL * (step + 1);
    if (step == 0) {  // the eps = 0 attempt is where verification is cheapest
      wopts.max_iterations = 96;
      wopts.restarts = 4;
      wopts.snap_period = 12;
      wopts.stall_limit = 32;
    } else {
      wopts.max_iterations = 64;
      wopts.restarts = 2;
      wopts.snap_period = 16;
      wopts.stall_limit = 24;
    }
    WeSolveResult sol = solve_we_slack(e, u, schedule[step], opts.tol, wopts);
    {
      std::ostringstream line;
      line << "eps=" << rat_str(schedule[step]) << ": residual=" << rat_str(sol.residual)
           << " iterations=" << sol.iterations << (sol.converged ? " (converged)" : "");
      res.transcript.push_back(line.str());
    }

    Allocation base = symmetrize(sol.we.x, part);
    std::vector<Allocation> candidates;
    for (unsigned long d : ladder) {
      auto cand = rationalize(base, d, &part);
      if (cand && std::find(candidates.begin(), candidates.end(), *cand) == candidates.end())
        candidates.push_back(std::move(*cand));
    }
    if (std::find(candidates.begin(), candidates.end(), base) == candidates.end())
      candidates.push_back(base);

    for (const Allocation& cand : candidates) {
      if (!is_doubly_stochastic(cand)) continue;
      if (!is_IR(e, cand)) continue;
      if (!satisfies_ETE(e, cand)) continue;
      CoreMembershipReport core = in_weak_core(e, cand);
      if (!core.member) continue;
      res.success = true;
      res.allocation = cand;
      res.ir = true;
      res.ete = true;
      res.eene = satisfies_EENE(e, cand);
      res.coalitions_checked = core.coalitions_checked;
      res.eps_used = schedule[step];
      res.transcript.push_back("verified weak-core ETE allocation at eps=" +
                               rat_str(schedule[step]));
      return res;
    }
    res.transcript.push_back("no candidate verified at eps=" + rat_str(schedule[step]));
    if (out_of_time()) {
      res.transcript.push_back("time budget exhausted");
      break;
    }
  }
  return res;
}

}  // namespace fhm
