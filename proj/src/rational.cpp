#include "fhm/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace fhm {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rat parse_rational(const std::string& token) {
  std::string s = token;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = (s[0] == '-');
    s = s.substr(1);
  }
  std::string num = s, den = "1";
  if (auto slash = s.find('/'); slash != std::string::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
  }
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("malformed rational: '" + token + "'");
  mpz_class n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + token + "'");
  Rat r(n, d);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

Rat make_rat(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) {
  Rat c = r;
  c.canonicalize();  // two-argument constructions may arrive unreduced
  return c.get_str();
}

std::string rat_row_str(const RatVec& row) {
  std::string out;
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out += ' ';
    out += rat_str(row[i]);
  }
  return out;
}

Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

Rat rat_from_double(double v) {
  Rat r(v);  // mpq_set_d is exact
  r.canonicalize();
  return r;
}

Rat approximate_rational(const Rat& value, unsigned long maxden) {
  if (maxden < 1) throw std::invalid_argument("approximate_rational: maxden < 1");
  if (value.get_den() <= maxden) return value;
  bool neg = value < 0;
  Rat v = neg ? Rat(-value) : value;

  // Continued-fraction walk: h/k is the latest convergent, hp/kp the one
  // before it (seeded with the projective pair 1/0, 0/1).
  mpz_class p = v.get_num(), q = v.get_den();
  mpz_class hp = 0, kp = 1, h = 1, k = 0;
  while (q != 0) {
    mpz_class a = p / q;
    mpz_class h2 = a * h + hp, k2 = a * k + kp;
    if (k2 > maxden) {
      // Largest admissible semiconvergent between h/k and h2/k2. The first
      // convergent has denominator 1, so k >= 1 whenever we get here.
      mpz_class t = (mpz_class(maxden) - kp) / k;
      Rat conv(h, k), semi(t * h + hp, t * k + kp);
      conv.canonicalize();
      semi.canonicalize();
      Rat ec = rat_abs(v - conv), es = rat_abs(v - semi);
      Rat best = (es < ec) ? semi : conv;  // tie -> convergent (smaller den)
      return neg ? Rat(-best) : best;
    }
    hp = h; kp = k; h = h2; k = k2;
    mpz_class r = p % q;
    p = q; q = r;
  }
  Rat best(h, k);
  best.canonicalize();
  return neg ? Rat(-best) : best;
}

Rat rat_sum(const RatVec& v) {
  Rat s = 0;
  for (const Rat& x : v) s += x;
  return s;
}

}  // namespace fhm
