#pragma once

#include <gmpxx.h>

#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"

namespace twistforge {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }

inline Rational inverse(const Rational& x) {
  if (is_zero(x)) throw DivisionByZero();
  Rational r = 1;
  r /= x;
  return r;
}

inline std::string to_string(const Rational& x) { return x.get_str(); }

inline Rational rational_from_string(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw DomainError("malformed rational '" + s + "'");
  r.canonicalize();
  if (sgn(r.get_den()) == 0) throw DivisionByZero("zero denominator in '" + s + "'");
  return r;
}

inline long mod_floor(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

inline long euler_phi(long n) {
  long result = n;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

/// Multiplicative order of a modulo n; requires gcd(a, n) = 1.
inline long multiplicative_order(long a, long n) {
  if (n == 1) return 1;
  a = mod_floor(a, n);
  long x = a, k = 1;
  while (x != 1) {
    x = (x * a) % n;
    ++k;
  }
  return k;
}

inline std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace twistforge
