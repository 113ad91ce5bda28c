#include "fhm/ratlp.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace fhm {

void LinearProgram::reset(int nvars) {
  num_vars = nvars;
  objective.assign(nvars, Rat(0));
  rows.clear();
  lower.assign(nvars, std::optional<Rat>(Rat(0)));
  upper.assign(nvars, std::nullopt);
}

void LinearProgram::add_row(RatVec coeffs, Rel rel, Rat rhs) {
  if (static_cast<int>(coeffs.size()) != num_vars)
    throw std::invalid_argument("add_row: coefficient length mismatch");
  rows.push_back(LpRow{std::move(coeffs), rel, std::move(rhs)});
}

std::vector<LpRow> lp_canonical_rows(const LinearProgram& lp) {
  std::vector<LpRow> rows = lp.rows;
  for (int j = 0; j < lp.num_vars; ++j)
    if (lp.lower[j]) {
      LpRow r{RatVec(lp.num_vars, Rat(0)), Rel::GE, *lp.lower[j]};
      r.coeffs[j] = 1;
      rows.push_back(std::move(r));
    }
  for (int j = 0; j < lp.num_vars; ++j)
    if (lp.upper[j]) {
      LpRow r{RatVec(lp.num_vars, Rat(0)), Rel::LE, *lp.upper[j]};
      r.coeffs[j] = 1;
      rows.push_back(std::move(r));
    }
  return rows;
}

namespace {

// ---------------------------------------------------------------------------
// Solver form: maximize c.z subject to relational rows over z >= 0. Public
// variables are substituted to native nonnegativity: shift by a finite lower
// bound, negate against a sole upper bound, or split when free. A variable
// with both bounds keeps the shift and gains an extra row z <= u - l, tagged
// so its dual maps back to the public upper-bound row.
// ---------------------------------------------------------------------------

enum class ColKind { LowerShift, UpperNeg, FreePos, FreeNeg };

struct ColInfo {
  ColKind kind;
  int var;  // public variable index
};

struct RowInfo {
  bool upper_bound_row = false;
  int index = -1;  // constraint index, or public var index for bound rows
};

struct SolverForm {
  std::vector<ColInfo> cols;
  std::vector<RatVec> a;  // per row, over cols
  std::vector<Rel> rel;
  RatVec b;
  std::vector<RowInfo> rinfo;
  RatVec c;  // maximize
  std::vector<std::vector<int>> var_cols;  // public var -> solver columns
};

SolverForm build_solver_form(const LinearProgram& lp) {
  SolverForm sf;
  const int n = lp.num_vars;
  RatVec shift(n, Rat(0));  // x_j = shift_j + sign_j * z  (sign -1 for UpperNeg)
  sf.var_cols.resize(n);
  for (int j = 0; j < n; ++j) {
    if (lp.lower[j]) {
      shift[j] = *lp.lower[j];
      sf.var_cols[j].push_back(static_cast<int>(sf.cols.size()));
      sf.cols.push_back({ColKind::LowerShift, j});
    } else if (lp.upper[j]) {
      shift[j] = *lp.upper[j];
      sf.var_cols[j].push_back(static_cast<int>(sf.cols.size()));
      sf.cols.push_back({ColKind::UpperNeg, j});
    } else {
      sf.var_cols[j].push_back(static_cast<int>(sf.cols.size()));
      sf.cols.push_back({ColKind::FreePos, j});
      sf.var_cols[j].push_back(static_cast<int>(sf.cols.size()));
      sf.cols.push_back({ColKind::FreeNeg, j});
    }
  }
  const int nz = static_cast<int>(sf.cols.size());

  auto substitute = [&](const RatVec& coeffs, const Rat& rhs) {
    RatVec row(nz, Rat(0));
    Rat b = rhs;
    for (int j = 0; j < n; ++j) {
      if (coeffs[j] == 0) continue;
      b -= coeffs[j] * shift[j];
      for (int cidx : sf.var_cols[j]) {
        switch (sf.cols[cidx].kind) {
          case ColKind::LowerShift:
          case ColKind::FreePos: row[cidx] += coeffs[j]; break;
          case ColKind::UpperNeg:
          case ColKind::FreeNeg: row[cidx] -= coeffs[j]; break;
        }
      }
    }
    return std::pair<RatVec, Rat>(std::move(row), std::move(b));
  };

  const bool maximize = lp.sense == Sense::Maximize;
  RatVec chat(n);
  for (int j = 0; j < n; ++j) chat[j] = maximize ? lp.objective[j] : Rat(-lp.objective[j]);
  auto [crow, cconst] = substitute(chat, Rat(0));
  (void)cconst;  // constant offset; the public value is recomputed from x
  sf.c = std::move(crow);

  for (size_t k = 0; k < lp.rows.size(); ++k) {
    auto [row, b] = substitute(lp.rows[k].coeffs, lp.rows[k].rhs);
    sf.a.push_back(std::move(row));
    sf.rel.push_back(lp.rows[k].rel);
    sf.b.push_back(std::move(b));
    sf.rinfo.push_back({false, static_cast<int>(k)});
  }
  // Range rows for two-sided variables, ascending by public index.
  for (int j = 0; j < n; ++j) {
    if (!(lp.lower[j] && lp.upper[j])) continue;
    RatVec row(nz, Rat(0));
    row[sf.var_cols[j][0]] = 1;
    sf.a.push_back(std::move(row));
    sf.rel.push_back(Rel::LE);
    sf.b.push_back(Rat(*lp.upper[j] - *lp.lower[j]));
    sf.rinfo.push_back({true, j});
  }
  return sf;
}

// ---------------------------------------------------------------------------
// Two-phase primal simplex with Bland's rule on the solver form.
// ---------------------------------------------------------------------------

struct Simplex {
  int m = 0;            // rows
  int nz = 0;           // structural columns
  int ncols = 0;        // structural + slack + artificial
  int first_artificial = 0;
  std::vector<RatVec> t;       // m x (ncols + 1); last cell is rhs
  RatVec obj;                  // ncols + 1 reduced-cost row
  std::vector<int> basis;      // per row: basic column
  std::vector<int> marker;     // per row: its initial identity column
  std::vector<int> sigma;      // per row: +1, or -1 if the row was negated
  std::vector<bool> artificial;

  enum class Step { Optimal, Unbounded };

  explicit Simplex(const SolverForm& sf) {
    m = static_cast<int>(sf.a.size());
    nz = static_cast<int>(sf.cols.size());
    // Count slacks: one per inequality row.
    int nslack = 0;
    for (Rel r : sf.rel)
      if (r != Rel::EQ) ++nslack;
    // Layout: [z | slacks | artificials(lazily appended)].
    int slack_base = nz;
    ncols = nz + nslack;
    basis.assign(m, -1);
    marker.assign(m, -1);
    sigma.assign(m, 1);
    std::vector<int> slack_col(m, -1);
    {
      int s = slack_base;
      for (int i = 0; i < m; ++i)
        if (sf.rel[i] != Rel::EQ) slack_col[i] = s++;
    }
    t.assign(m, RatVec());
    std::vector<int> need_artificial;
    for (int i = 0; i < m; ++i) {
      RatVec row(ncols + 1, Rat(0));
      for (int j = 0; j < nz; ++j) row[j] = sf.a[i][j];
      Rat rhs = sf.b[i];
      Rat scoef = 0;
      if (sf.rel[i] == Rel::LE) scoef = 1;
      if (sf.rel[i] == Rel::GE) scoef = -1;
      if (slack_col[i] >= 0) row[slack_col[i]] = scoef;
      if (rhs < 0) {
        sigma[i] = -1;
        for (int j = 0; j < ncols; ++j)
          if (row[j] != 0) row[j] = -row[j];
        rhs = -rhs;
        scoef = -scoef;
      }
      row[ncols] = rhs;
      t[i] = std::move(row);
      if (slack_col[i] >= 0 && scoef == 1) {
        basis[i] = slack_col[i];
        marker[i] = slack_col[i];
      } else {
        need_artificial.push_back(i);
      }
    }
    first_artificial = ncols;
    if (!need_artificial.empty()) {
      int extra = static_cast<int>(need_artificial.size());
      for (int i = 0; i < m; ++i) {
        RatVec& row = t[i];
        Rat rhs = row.back();
        row.pop_back();
        row.resize(ncols + extra, Rat(0));
        row.push_back(std::move(rhs));
      }
      int a = ncols;
      for (int i : need_artificial) {
        t[i][a] = 1;
        basis[i] = a;
        marker[i] = a;
        ++a;
      }
      ncols += extra;
    }
    artificial.assign(ncols, false);
    for (int j = first_artificial; j < ncols; ++j) artificial[j] = true;
  }

  // Rebuilds the reduced-cost row for the cost vector `cost` (length ncols).
  void load_objective(const RatVec& cost) {
    obj.assign(ncols + 1, Rat(0));
    for (int j = 0; j < ncols; ++j) obj[j] = cost[j];
    for (int i = 0; i < m; ++i) {
      const Rat& cb = cost[basis[i]];
      if (cb == 0) continue;
      for (int j = 0; j <= ncols; ++j)
        if (t[i][j] != 0) obj[j] -= cb * t[i][j];
    }
  }

  void pivot(int row, int col) {
    RatVec& pr = t[row];
    if (pr[col] != 1) {
      Rat inv = 1 / pr[col];
      for (int j = 0; j <= ncols; ++j)
        if (pr[j] != 0) pr[j] *= inv;
    }
    for (int i = 0; i < m; ++i) {
      if (i == row || t[i][col] == 0) continue;
      Rat f = t[i][col];
      RatVec& ri = t[i];
      for (int j = 0; j <= ncols; ++j)
        if (pr[j] != 0) ri[j] -= f * pr[j];
    }
    if (obj[col] != 0) {
      Rat f = obj[col];
      for (int j = 0; j <= ncols; ++j)
        if (pr[j] != 0) obj[j] -= f * pr[j];
    }
    basis[row] = col;
  }

  // Bland's rule: entering = lowest-index eligible column with positive
  // reduced cost; leaving = min ratio, ties by lowest basic variable index.
  Step run(int& unbounded_col) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (artificial[j]) continue;  // artificials never (re-)enter
        if (obj[j] > 0) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Step::Optimal;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m; ++i) {
        if (t[i][enter] <= 0) continue;
        Rat ratio = t[i][ncols] / t[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) {
        unbounded_col = enter;
        return Step::Unbounded;
      }
      pivot(leave, enter);
    }
  }

  // After phase one: pivot zero-valued artificials out of the basis where a
  // nonzero structural entry exists; rows without one are redundant and stay
  // inert (their tableau row is zero outside artificial columns).
  void drive_out_artificials() {
    for (int i = 0; i < m; ++i) {
      if (!artificial[basis[i]]) continue;
      for (int j = 0; j < ncols; ++j) {
        if (artificial[j]) continue;
        if (t[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // Duals for the current objective row: y_k = cost(marker_k) - obj[marker_k],
  // unflipped back to the row's original orientation.
  RatVec extract_duals(const RatVec& cost) const {
    RatVec y(m);
    for (int i = 0; i < m; ++i) {
      Rat v = cost[marker[i]] - obj[marker[i]];
      y[i] = sigma[i] < 0 ? Rat(-v) : v;
    }
    return y;
  }

  RatVec basic_solution() const {
    RatVec z(ncols, Rat(0));
    for (int i = 0; i < m; ++i) z[basis[i]] = t[i][ncols];
    return z;
  }
};

// Maps solver duals (per solver row, original orientation) to the canonical
// public row list. `chat` is the maximization-form objective, or all zeros
// for a Farkas vector. The same stationarity bookkeeping covers both cases.
RatVec map_duals_to_public(const LinearProgram& lp, const SolverForm& sf,
                           const RatVec& y_solver, const RatVec& chat) {
  const int n = lp.num_vars;
  const int ncons = static_cast<int>(lp.rows.size());
  std::vector<int> lower_row(n, -1), upper_row(n, -1);
  int next = ncons;
  for (int j = 0; j < n; ++j)
    if (lp.lower[j]) lower_row[j] = next++;
  for (int j = 0; j < n; ++j)
    if (lp.upper[j]) upper_row[j] = next++;
  RatVec dual(next, Rat(0));

  RatVec mu_up(n, Rat(0));
  for (size_t r = 0; r < sf.rinfo.size(); ++r) {
    if (sf.rinfo[r].upper_bound_row)
      mu_up[sf.rinfo[r].index] = y_solver[r];
    else
      dual[sf.rinfo[r].index] = y_solver[r];
  }
  for (int j = 0; j < n; ++j) {
    Rat g = chat[j];
    for (int k = 0; k < ncons; ++k)
      if (lp.rows[k].coeffs[j] != 0) g -= dual[k] * lp.rows[k].coeffs[j];
    const ColKind kind = sf.cols[sf.var_cols[j][0]].kind;
    switch (kind) {
      case ColKind::LowerShift:
        if (upper_row[j] >= 0) {
          dual[upper_row[j]] = mu_up[j];
          dual[lower_row[j]] = g - mu_up[j];
        } else {
          dual[lower_row[j]] = g;
        }
        break;
      case ColKind::UpperNeg:
        dual[upper_row[j]] = g;
        break;
      case ColKind::FreePos:
      case ColKind::FreeNeg:
        break;  // stationarity is exact for split variables
    }
  }
  return dual;
}

RatVec map_point_to_public(const LinearProgram& lp, const SolverForm& sf, const RatVec& z) {
  RatVec x(lp.num_vars, Rat(0));
  for (int j = 0; j < lp.num_vars; ++j) {
    if (lp.lower[j])
      x[j] = *lp.lower[j];
    else if (lp.upper[j])
      x[j] = *lp.upper[j];
    for (int cidx : sf.var_cols[j]) {
      switch (sf.cols[cidx].kind) {
        case ColKind::LowerShift:
        case ColKind::FreePos: x[j] += z[cidx]; break;
        case ColKind::UpperNeg:
        case ColKind::FreeNeg: x[j] -= z[cidx]; break;
      }
    }
  }
  return x;
}

}  // namespace

LpOutcome lp_solve(const LinearProgram& lp) {
  SolverForm sf = build_solver_form(lp);
  Simplex sx(sf);

  // Phase one: maximize minus the artificial sum.
  if (sx.first_artificial < sx.ncols) {
    RatVec cost1(sx.ncols, Rat(0));
    for (int j = sx.first_artificial; j < sx.ncols; ++j) cost1[j] = -1;
    sx.load_objective(cost1);
    int ub = -1;
    Simplex::Step st = sx.run(ub);
    assert(st == Simplex::Step::Optimal);  // phase-one objective is bounded
    (void)st;
    Rat opt1 = -sx.obj[sx.ncols];
    if (opt1 < 0) {
      LpOutcome out;
      out.status = LpStatus::Infeasible;
      RatVec y = sx.extract_duals(cost1);
      out.farkas = map_duals_to_public(lp, sf, y, RatVec(lp.num_vars, Rat(0)));
      return out;
    }
    sx.drive_out_artificials();
  }

  // Phase two.
  RatVec cost2(sx.ncols, Rat(0));
  for (size_t j = 0; j < sf.c.size(); ++j) cost2[j] = sf.c[j];
  sx.load_objective(cost2);
  int ubcol = -1;
  Simplex::Step st = sx.run(ubcol);

  const bool maximize = lp.sense == Sense::Maximize;
  if (st == Simplex::Step::Unbounded) {
    LpOutcome out;
    out.status = LpStatus::Unbounded;
    RatVec z(sx.ncols, Rat(0));
    for (int i = 0; i < sx.m; ++i) z[sx.basis[i]] = sx.t[i][sx.ncols];
    out.primal = map_point_to_public(lp, sf, z);
    RatVec d(sx.ncols, Rat(0));
    d[ubcol] = 1;
    for (int i = 0; i < sx.m; ++i)
      if (sx.t[i][ubcol] != 0) d[sx.basis[i]] = -sx.t[i][ubcol];
    // Map the direction through the substitutions (no shift for directions).
    RatVec dx(lp.num_vars, Rat(0));
    for (int j = 0; j < lp.num_vars; ++j)
      for (int cidx : sf.var_cols[j]) {
        switch (sf.cols[cidx].kind) {
          case ColKind::LowerShift:
          case ColKind::FreePos: dx[j] += d[cidx]; break;
          case ColKind::UpperNeg:
          case ColKind::FreeNeg: dx[j] -= d[cidx]; break;
        }
      }
    out.ray = std::move(dx);
    return out;
  }

  LpOutcome out;
  out.status = LpStatus::Optimal;
  out.primal = map_point_to_public(lp, sf, sx.basic_solution());
  Rat v = 0;
  for (int j = 0; j < lp.num_vars; ++j)
    if (lp.objective[j] != 0) v += lp.objective[j] * out.primal[j];
  out.value = v;
  RatVec chat(lp.num_vars);
  for (int j = 0; j < lp.num_vars; ++j)
    chat[j] = maximize ? lp.objective[j] : Rat(-lp.objective[j]);
  RatVec y = sx.extract_duals(cost2);
  out.dual = map_duals_to_public(lp, sf, y, chat);
  return out;
}

bool check_certificate(const LinearProgram& lp, const LpOutcome& out) {
  const std::vector<LpRow> rows = lp_canonical_rows(lp);
  const int n = lp.num_vars;
  const bool maximize = lp.sense == Sense::Maximize;
  RatVec chat(n);
  for (int j = 0; j < n; ++j) chat[j] = maximize ? lp.objective[j] : Rat(-lp.objective[j]);

  auto dot_row = [&](const RatVec& coeffs, const RatVec& x) {
    Rat s = 0;
    for (int j = 0; j < n; ++j)
      if (coeffs[j] != 0) s += coeffs[j] * x[j];
    return s;
  };
  auto point_feasible = [&](const RatVec& x) {
    for (const LpRow& r : rows) {
      Rat lhs = dot_row(r.coeffs, x);
      if (r.rel == Rel::LE && lhs > r.rhs) return false;
      if (r.rel == Rel::GE && lhs < r.rhs) return false;
      if (r.rel == Rel::EQ && lhs != r.rhs) return false;
    }
    return true;
  };
  auto signs_ok = [&](const RatVec& y) {
    for (size_t k = 0; k < rows.size(); ++k) {
      if (rows[k].rel == Rel::LE && y[k] < 0) return false;
      if (rows[k].rel == Rel::GE && y[k] > 0) return false;
    }
    return true;
  };
  auto combo_coeff = [&](const RatVec& y, int j) {
    Rat s = 0;
    for (size_t k = 0; k < rows.size(); ++k)
      if (y[k] != 0 && rows[k].coeffs[j] != 0) s += y[k] * rows[k].coeffs[j];
    return s;
  };
  auto combo_rhs = [&](const RatVec& y) {
    Rat s = 0;
    for (size_t k = 0; k < rows.size(); ++k)
      if (y[k] != 0) s += y[k] * rows[k].rhs;
    return s;
  };

  switch (out.status) {
    case LpStatus::Optimal: {
      if (static_cast<int>(out.primal.size()) != n || out.dual.size() != rows.size())
        throw std::invalid_argument("check_certificate: dimension mismatch");
      if (!point_feasible(out.primal)) return false;
      Rat v = dot_row(lp.objective, out.primal);
      if (v != out.value) return false;
      if (!signs_ok(out.dual)) return false;
      for (int j = 0; j < n; ++j)
        if (combo_coeff(out.dual, j) != chat[j]) return false;
      Rat vhat = maximize ? out.value : Rat(-out.value);
      return combo_rhs(out.dual) == vhat;
    }
    case LpStatus::Infeasible: {
      if (out.farkas.size() != rows.size())
        throw std::invalid_argument("check_certificate: dimension mismatch");
      if (!signs_ok(out.farkas)) return false;
      for (int j = 0; j < n; ++j)
        if (combo_coeff(out.farkas, j) != 0) return false;
      return combo_rhs(out.farkas) < 0;
    }
    case LpStatus::Unbounded: {
      if (static_cast<int>(out.primal.size()) != n || static_cast<int>(out.ray.size()) != n)
        throw std::invalid_argument("check_certificate: dimension mismatch");
      if (!point_feasible(out.primal)) return false;
      for (const LpRow& r : rows) {
        Rat lhs = dot_row(r.coeffs, out.ray);
        if (r.rel == Rel::LE && lhs > 0) return false;
        if (r.rel == Rel::GE && lhs < 0) return false;
        if (r.rel == Rel::EQ && lhs != 0) return false;
      }
      return dot_row(chat, out.ray) > 0;
    }
  }
  return false;
}

std::string lp_debug_dump(const LinearProgram& lp) {
  std::ostringstream out;
  out << (lp.sense == Sense::Maximize ? "maximize" : "minimize");
  for (int j = 0; j < lp.num_vars; ++j) out << ' ' << rat_str(lp.objective[j]);
  out << "\n";
  auto rel_str = [](Rel r) { return r == Rel::LE ? "<=" : (r == Rel::GE ? ">=" : "=="); };
  for (const LpRow& r : lp.rows) {
    for (int j = 0; j < lp.num_vars; ++j) out << rat_str(r.coeffs[j]) << ' ';
    out << rel_str(r.rel) << ' ' << rat_str(r.rhs) << "\n";
  }
  for (int j = 0; j < lp.num_vars; ++j) {
    out << "x" << (j + 1) << " in [";
    out << (lp.lower[j] ? rat_str(*lp.lower[j]) : std::string("-inf")) << ", ";
    out << (lp.upper[j] ? rat_str(*lp.upper[j]) : std::string("+inf")) << "]\n";
  }
  return out.str();
}

}  // namespace fhm
