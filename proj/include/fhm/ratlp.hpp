#pragma once

// Exact rational linear programming: a two-phase primal simplex over
// mpq_class with Bland's anti-cycling rule, plus machine-checkable
// certificates for all three outcomes.
//
// Certificate conventions. Every certificate refers to the *canonical row
// list* of the program: first the explicit constraints in order, then one
// row "x_j >= l_j" per finite lower bound (ascending j), then one row
// "x_j <= u_j" per finite upper bound (ascending j). Dual values always
// describe the maximization form: a Minimize program is solved as
// max(-objective), and its dual/Farkas vectors are reported for that form.
//
//   Optimal: dual y with  y_k >= 0 on <= rows, y_k <= 0 on >= rows, free on
//     == rows;  sum_k y_k a_kj = chat_j for every variable;  sum_k y_k b_k =
//     vhat  (chat/vhat = objective/value, negated when sense is Minimize).
//   Infeasible: Farkas y with the same sign pattern,  sum_k y_k a_kj = 0,
//     and  sum_k y_k b_k < 0.
//   Unbounded: a feasible point plus a ray d with  A_<= d <= 0, A_>= d >= 0,
//     A_== d = 0  over the canonical rows and  chat . d > 0.
//
// check_certificate re-verifies an outcome against its program by direct
// substitution, sharing no code with the solver's pivoting.

#include "fhm/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fhm {

enum class Rel { LE, EQ, GE };
enum class Sense { Maximize, Minimize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpRow {
  RatVec coeffs;
  Rel rel = Rel::LE;
  Rat rhs;
};

struct LinearProgram {
  int num_vars = 0;
  RatVec objective;                        // length num_vars
  Sense sense = Sense::Maximize;
  std::vector<LpRow> rows;
  std::vector<std::optional<Rat>> lower;   // default 0; nullopt = unbounded below
  std::vector<std::optional<Rat>> upper;   // default nullopt = unbounded above

  explicit LinearProgram(int nvars = 0) { reset(nvars); }
  void reset(int nvars);
  void add_row(RatVec coeffs, Rel rel, Rat rhs);
  void set_free(int j) { lower[j].reset(); upper[j].reset(); }
};

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rat value;        // Optimal: objective value in the program's own sense
  RatVec primal;    // Optimal: optimizer; Unbounded: a feasible point
  RatVec dual;      // Optimal: canonical-row duals (maximization form)
  RatVec farkas;    // Infeasible: canonical-row Farkas vector
  RatVec ray;       // Unbounded: improving direction
};

// Deterministic: identical programs produce identical outcomes.
LpOutcome lp_solve(const LinearProgram& lp);

// Exact re-verification of an outcome. Returns false on any violated
// condition; throws std::invalid_argument on shape mismatches (wrong primal
// or certificate length for the program).
bool check_certificate(const LinearProgram& lp, const LpOutcome& out);

// Plain-text dump of a program (one row per line), for debugging reports.
std::string lp_debug_dump(const LinearProgram& lp);

// The canonical row list described above, materialized. Exposed so that
// certificate consumers can label rows.
std::vector<LpRow> lp_canonical_rows(const LinearProgram& lp);

}  // namespace fhm
