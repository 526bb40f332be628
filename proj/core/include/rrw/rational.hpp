#pragma once

#include <gmpxx.h>

#include <cmath>

#include <string>

namespace rrw {

using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// exact binary value of a double
inline Rational rational_from_double(double x) { return Rational(x); }

inline long double to_long_double(const Rational& q) {
  // mpq get_d truncates; go through the quotient in long double for a few more bits
  long double n = q.get_num().get_d();
  long double d = q.get_den().get_d();
  if (std::isfinite(static_cast<double>(n)) && std::isfinite(static_cast<double>(d)) && d != 0)
    return n / d;
  return q.get_d();
}

}  // namespace rrw
