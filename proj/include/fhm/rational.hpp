#pragma once

// Exact rational scalar/vector/matrix aliases plus parsing and formatting.
// All arithmetic in this project is exact; no floating point is used for
// anything that feeds a verdict.

#include <gmpxx.h>

#include <string>
#include <vector>

namespace fhm {

using Rat = mpq_class;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

// Parses "a", "-a", "a/b", "-a/b" (whole token, no whitespace). The stored
// value is always canonical (lowest terms, positive denominator).
// Throws std::invalid_argument on malformed input or a zero denominator.
Rat parse_rational(const std::string& token);

// Canonical num/den construction. mpq_class keeps the pair exactly as
// given, and GMP's comparisons assume lowest terms, so build computed
// fractions through this instead of the two-argument constructor.
Rat make_rat(long num, long den);

// Lowest-terms rendering: "a" when the denominator is 1, otherwise "a/b".
std::string rat_str(const Rat& r);

// Space-separated row / newline-separated matrix rendering.
std::string rat_row_str(const RatVec& row);

Rat rat_abs(const Rat& r);

// Exact conversion from a double (binary expansion, no rounding).
Rat rat_from_double(double v);

// Best rational approximation to `value` with denominator <= maxden,
// via continued fractions (convergent vs. final semiconvergent, whichever
// is closer; ties prefer the smaller denominator). maxden must be >= 1.
Rat approximate_rational(const Rat& value, unsigned long maxden);

// Sum of a vector / elementwise helpers used all over the analysis code.
Rat rat_sum(const RatVec& v);

}  // namespace fhm
