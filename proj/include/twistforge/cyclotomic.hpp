#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rational.hpp"

namespace twistforge {

namespace detail {

/// Integer coefficients of the N-th cyclotomic polynomial, lowest degree first.
inline std::vector<long> compute_cyclotomic(long n);

struct CyclotomicData {
  long conductor = 1;
  long degree = 1;
  std::vector<long> phi_poly;               // Phi_N, monic, lowest degree first
  std::vector<std::vector<long>> power_of;  // power_of[k] = coords of zeta^k, 0 <= k < N
};

inline std::shared_ptr<const CyclotomicData> cyclotomic_data(long n) {
  static std::recursive_mutex mu;
  static std::map<long, std::shared_ptr<const CyclotomicData>> cache;
  if (n < 1) throw DomainError("conductor must be at least 1, got " + std::to_string(n));
  std::lock_guard<std::recursive_mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  auto data = std::make_shared<CyclotomicData>();
  data->conductor = n;
  data->phi_poly = compute_cyclotomic(n);
  data->degree = static_cast<long>(data->phi_poly.size()) - 1;
  const long deg = data->degree;
  data->power_of.assign(n, std::vector<long>(deg, 0));
  std::vector<long> cur(deg, 0);
  cur[0] = 1;
  for (long k = 0; k < n; ++k) {
    data->power_of[k] = cur;
    // multiply by zeta and reduce modulo Phi_N
    long top = cur[deg - 1];
    for (long i = deg - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0) {
      for (long i = 0; i < deg; ++i) {
        long prod;
        if (__builtin_mul_overflow(top, data->phi_poly[i], &prod) ||
            __builtin_sub_overflow(cur[i], prod, &cur[i])) {
          throw DomainError("cyclotomic reduction table overflows for conductor " + std::to_string(n));
        }
      }
    }
  }
  cache.emplace(n, data);
  return data;
}

inline std::vector<long> compute_cyclotomic(long n) {
  // x^n - 1 divided by Phi_d for every proper divisor d of n
  std::vector<long> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (long d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const std::vector<long> den = d == 1 ? std::vector<long>{-1, 1} : cyclotomic_data(d)->phi_poly;
    const long dd = static_cast<long>(den.size()) - 1;
    const long nd = static_cast<long>(num.size()) - 1;
    std::vector<long> quot(nd - dd + 1, 0);
    for (long i = nd; i >= dd; --i) {
      long c = num[i];
      quot[i - dd] = c;
      if (c == 0) continue;
      for (long j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    num = quot;
  }
  return num;
}

/// Dense univariate polynomial over Q, lowest degree first, used for inversion.
using UPoly = std::vector<Rational>;

inline void trim(UPoly& p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
}

inline std::pair<UPoly, UPoly> divmod(UPoly a, const UPoly& b) {
  UPoly q;
  trim(a);
  if (b.empty()) throw DivisionByZero();
  if (a.size() < b.size()) return {q, a};
  q.assign(a.size() - b.size() + 1, Rational(0));
  const Rational lead_inv = inverse(b.back());
  for (long i = static_cast<long>(a.size()) - static_cast<long>(b.size()); i >= 0; --i) {
    const Rational c = a[i + b.size() - 1] * lead_inv;
    q[i] = c;
    if (is_zero(c)) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
  }
  trim(a);
  trim(q);
  return {q, a};
}

inline UPoly mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

inline UPoly sub(const UPoly& a, const UPoly& b) {
  UPoly out(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

}  // namespace detail

/// Element of Q(zeta_N) in power-basis coordinates modulo Phi_N.
class CycNum {
 public:
  CycNum() : conductor_(1), coords_(1, Rational(0)) {}

  /// Reduces an arbitrary coefficient list c_0 + c_1 z + ... modulo Phi_N.
  static CycNum make(long conductor, const std::vector<Rational>& coeffs) {
    auto data = detail::cyclotomic_data(conductor);
    std::vector<Rational> acc(conductor, Rational(0));
    for (std::size_t k = 0; k < coeffs.size(); ++k) acc[k % conductor] += coeffs[k];
    return CycNum(std::move(data), reduce(*detail::cyclotomic_data(conductor), acc));
  }

  static CycNum rational(const Rational& r, long conductor = 1) {
    auto data = detail::cyclotomic_data(conductor);
    std::vector<Rational> c(data->degree, Rational(0));
    c[0] = r;
    return CycNum(std::move(data), std::move(c));
  }

  /// zeta_N^e for any integer e.
  static CycNum zeta(long conductor, long e = 1) {
    auto data = detail::cyclotomic_data(conductor);
    const auto& row = data->power_of[mod_floor(e, conductor)];
    std::vector<Rational> c(row.begin(), row.end());
    return CycNum(std::move(data), std::move(c));
  }

  long conductor() const noexcept { return conductor_; }
  long degree() const noexcept { return static_cast<long>(coords_.size()); }
  const std::vector<Rational>& coords() const noexcept { return coords_; }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return sgn(c) == 0; });
  }

  bool is_rational() const {
    return std::all_of(coords_.begin() + 1, coords_.end(), [](const Rational& c) { return sgn(c) == 0; });
  }

  const Rational& rational_part() const { return coords_[0]; }

  /// Re-expresses the element in Q(zeta_M) for a multiple M of the conductor.
  CycNum lift(long target) const {
    if (target == conductor_) return *this;
    if (target % conductor_ != 0) {
      throw DomainError("cannot lift conductor " + std::to_string(conductor_) + " to " + std::to_string(target));
    }
    const long step = target / conductor_;
    std::vector<Rational> acc(target, Rational(0));
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      if (sgn(coords_[j]) != 0) acc[(j * step) % target] += coords_[j];
    }
    auto data = detail::cyclotomic_data(target);
    return CycNum(data, reduce(*data, acc));
  }

  /// Representation in Q(zeta_target) when the element lies in that subfield.
  std::optional<CycNum> project(long target) const;

  /// Multiplies by zeta_N^e.
  CycNum mul_zeta(long e) const {
    std::vector<Rational> acc(conductor_, Rational(0));
    for (std::size_t j = 0; j < coords_.size(); ++j) {
      if (sgn(coords_[j]) != 0) acc[mod_floor(static_cast<long>(j) + e, conductor_)] += coords_[j];
    }
    return CycNum(data_, reduce(*data_, acc));
  }

  CycNum inv() const;

  CycNum operator-() const {
    CycNum r = *this;
    for (auto& c : r.coords_) c = -c;
    return r;
  }

  friend CycNum operator+(const CycNum& a, const CycNum& b) {
    if (a.conductor_ != b.conductor_) {
      const long l = std::lcm(a.conductor_, b.conductor_);
      return a.lift(l) + b.lift(l);
    }
    CycNum r = a;
    for (std::size_t i = 0; i < r.coords_.size(); ++i) r.coords_[i] += b.coords_[i];
    return r;
  }

  friend CycNum operator-(const CycNum& a, const CycNum& b) { return a + (-b); }

  friend CycNum operator*(const CycNum& a, const CycNum& b) {
    if (a.conductor_ != b.conductor_) {
      const long l = std::lcm(a.conductor_, b.conductor_);
      return a.lift(l) * b.lift(l);
    }
    const long n = a.conductor_;
    if (a.is_rational()) return b.scaled(a.coords_[0]);
    if (b.is_rational()) return a.scaled(b.coords_[0]);
    std::vector<Rational> acc(n, Rational(0));
    for (std::size_t i = 0; i < a.coords_.size(); ++i) {
      if (sgn(a.coords_[i]) == 0) continue;
      for (std::size_t j = 0; j < b.coords_.size(); ++j) {
        if (sgn(b.coords_[j]) == 0) continue;
        acc[(i + j) % n] += a.coords_[i] * b.coords_[j];
      }
    }
    return CycNum(a.data_, reduce(*a.data_, acc));
  }

  friend CycNum operator/(const CycNum& a, const CycNum& b) { return a * b.inv(); }

  CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
  CycNum& operator-=(const CycNum& o) { return *this = *this - o; }
  CycNum& operator*=(const CycNum& o) { return *this = *this * o; }

  CycNum scaled(const Rational& r) const {
    CycNum out = *this;
    for (auto& c : out.coords_) c *= r;
    return out;
  }

  /// Field equality; mixed conductors are compared in the compositum.
  friend bool operator==(const CycNum& a, const CycNum& b) {
    if (a.conductor_ == b.conductor_) return a.coords_ == b.coords_;
    const long l = std::lcm(a.conductor_, b.conductor_);
    return a.lift(l).coords_ == b.lift(l).coords_;
  }
  friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

  /// Structural total order (conductor, then coordinates); used for canonical containers.
  friend bool structural_less(const CycNum& a, const CycNum& b) {
    if (a.conductor_ != b.conductor_) return a.conductor_ < b.conductor_;
    for (std::size_t i = 0; i < a.coords_.size(); ++i) {
      const int c = cmp(a.coords_[i], b.coords_[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }

  std::string to_string(const std::string& var = "z") const {
    std::ostringstream os;
    bool first = true;
    for (long j = degree() - 1; j >= 0; --j) {
      const Rational& c = coords_[j];
      if (sgn(c) == 0) continue;
      Rational mag = abs(c);
      if (first) {
        if (sgn(c) < 0) os << "-";
      } else {
        os << (sgn(c) < 0 ? " - " : " + ");
      }
      first = false;
      if (j == 0) {
        os << mag.get_str();
        continue;
      }
      if (mag != 1) os << mag.get_str() << "*";
      os << var;
      if (j > 1) os << "^" << j;
    }
    if (first) os << "0";
    return os.str();
  }

  /// True when the printed form is a single signed term (no parentheses needed as a factor).
  bool is_monomial() const {
    int n = 0;
    for (const auto& c : coords_) n += sgn(c) != 0;
    return n <= 1;
  }

 private:
  CycNum(std::shared_ptr<const detail::CyclotomicData> data, std::vector<Rational> coords)
      : conductor_(data->conductor), coords_(std::move(coords)), data_(std::move(data)) {}

  static std::vector<Rational> reduce(const detail::CyclotomicData& d, const std::vector<Rational>& acc) {
    std::vector<Rational> out(d.degree, Rational(0));
    for (long k = 0; k < d.conductor; ++k) {
      if (sgn(acc[k]) == 0) continue;
      if (k < d.degree) {
        out[k] += acc[k];
        continue;
      }
      const auto& row = d.power_of[k];
      for (long c = 0; c < d.degree; ++c) {
        if (row[c] != 0) out[c] += acc[k] * row[c];
      }
    }
    return out;
  }

  long conductor_;
  std::vector<Rational> coords_;
  std::shared_ptr<const detail::CyclotomicData> data_ = trivial_data();

  static std::shared_ptr<const detail::CyclotomicData> trivial_data() {
    static const auto d = detail::cyclotomic_data(1);
    return d;
  }
};

inline CycNum CycNum::inv() const {
  if (is_zero()) throw DivisionByZero("inverse of zero cyclotomic number");
  if (is_rational()) return CycNum::rational(inverse(coords_[0]), conductor_);
  // extended Euclid: s * a + t * Phi = 1
  detail::UPoly a(coords_.begin(), coords_.end());
  detail::trim(a);
  detail::UPoly b(data_->phi_poly.begin(), data_->phi_poly.end());
  detail::UPoly s0{Rational(1)}, s1{};
  while (!b.empty()) {
    auto [q, r] = detail::divmod(a, b);
    detail::UPoly s2 = detail::sub(s0, detail::mul(q, s1));
    a = std::move(b);
    b = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // a is a nonzero constant gcd
  const Rational scale = inverse(a[0]);
  for (auto& c : s0) c *= scale;
  return CycNum::make(conductor_, s0);
}

inline std::optional<CycNum> CycNum::project(long target) const {
  const long l = std::lcm(conductor_, target);
  const CycNum x = lift(l);
  auto td = detail::cyclotomic_data(target);
  const long rows = x.degree();
  const long cols = td->degree;
  // augmented system [basis | x]
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1, Rational(0)));
  for (long j = 0; j < cols; ++j) {
    const CycNum b = CycNum::zeta(target, j).lift(l);
    for (long i = 0; i < rows; ++i) m[i][j] = b.coords()[i];
  }
  for (long i = 0; i < rows; ++i) m[i][cols] = x.coords()[i];
  long r = 0;
  std::vector<long> pivots;
  for (long c = 0; c < cols && r < rows; ++c) {
    long p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational iv = inverse(m[r][c]);
    for (auto& v : m[r]) v *= iv;
    for (long i = 0; i < rows; ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      const Rational f = m[i][c];
      for (long k = c; k <= cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  for (long i = r; i < rows; ++i) {
    if (sgn(m[i][cols]) != 0) return std::nullopt;
  }
  std::vector<Rational> sol(cols, Rational(0));
  for (long i = 0; i < r; ++i) sol[pivots[i]] = m[i][cols];
  return CycNum::make(target, sol);
}

inline bool is_zero(const CycNum& x) { return x.is_zero(); }
inline CycNum inverse(const CycNum& x) { return x.inv(); }
inline std::ostream& operator<<(std::ostream& os, const CycNum& x) { return os << x.to_string(); }

/// Galois automorphism zeta_N -> zeta_N^b of Q(zeta_N).
class GaloisUnit {
 public:
  GaloisUnit() = default;
  GaloisUnit(long conductor, long exponent) : conductor_(conductor), exponent_(0) {
    if (conductor < 1) throw DomainError("Galois unit conductor must be positive");
    exponent_ = mod_floor(exponent, conductor);
    if (conductor == 1) exponent_ = 0;
    if (std::gcd(exponent_, conductor) != 1 && conductor != 1) {
      throw DomainError("exponent " + std::to_string(exponent) + " is not a unit modulo " + std::to_string(conductor));
    }
  }

  long conductor() const noexcept { return conductor_; }
  long exponent() const noexcept { return conductor_ == 1 ? 1 : exponent_; }
  bool is_identity() const noexcept { return conductor_ == 1 || exponent_ == 1; }

  /// Composition u * v: apply v first, then u.
  friend GaloisUnit operator*(const GaloisUnit& u, const GaloisUnit& v) {
    if (u.conductor_ != v.conductor_) throw DomainError("composing Galois units of different conductors");
    return GaloisUnit(u.conductor_, u.exponent() * v.exponent());
  }

  friend bool operator==(const GaloisUnit& a, const GaloisUnit& b) {
    return a.conductor_ == b.conductor_ && mod_floor(a.exponent(), a.conductor_) == mod_floor(b.exponent(), b.conductor_);
  }

  GaloisUnit restrict_to(long n) const {
    if (conductor_ % n != 0) throw DomainError("cannot restrict unit to non-divisor conductor");
    return GaloisUnit(n, exponent());
  }

 private:
  long conductor_ = 1;
  long exponent_ = 0;
};

/// Applies zeta -> zeta^b; the conductor of x must divide the conductor of u.
inline CycNum galois_apply(const GaloisUnit& u, const CycNum& x) {
  const long n = x.conductor();
  if (u.conductor() % n != 0) {
    throw DomainError("Galois unit of conductor " + std::to_string(u.conductor()) +
                      " cannot act on an element of conductor " + std::to_string(n));
  }
  const long b = mod_floor(u.exponent(), n);
  std::vector<Rational> acc(n, Rational(0));
  for (std::size_t j = 0; j < x.coords().size(); ++j) {
    if (sgn(x.coords()[j]) != 0) acc[(static_cast<long>(j) * b) % n] += x.coords()[j];
  }
  return CycNum::make(n, acc);
}

}  // namespace twistforge
