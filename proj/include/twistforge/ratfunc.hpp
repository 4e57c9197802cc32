#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cyclotomic.hpp"

namespace twistforge {

using Exponents = std::vector<int>;

/// Sparse multivariate polynomial in the Kummer parameters m_1..m_s over Q(zeta_N).
/// Terms are stored in ascending lexicographic order; the leading term is the last one.
class MPoly {
 public:
  MPoly() = default;
  MPoly(long conductor, int nvars) : conductor_(conductor), nvars_(nvars) {}

  static MPoly constant(const CycNum& c, long conductor, int nvars) {
    MPoly p(conductor, nvars);
    if (!c.is_zero()) p.terms_.emplace(Exponents(nvars, 0), c.lift(conductor));
    return p;
  }

  static MPoly variable(long conductor, int nvars, int index, int power = 1) {
    MPoly p(conductor, nvars);
    Exponents e(nvars, 0);
    e.at(index) = power;
    p.terms_.emplace(std::move(e), CycNum::rational(1, conductor));
    return p;
  }

  static MPoly monomial(const CycNum& c, Exponents e, long conductor) {
    MPoly p(conductor, static_cast<int>(e.size()));
    if (!c.is_zero()) p.terms_.emplace(std::move(e), c.lift(conductor));
    return p;
  }

  long conductor() const noexcept { return conductor_; }
  int nvars() const noexcept { return nvars_; }
  const std::map<Exponents, CycNum>& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
  }
  bool is_one() const {
    return is_constant() && !terms_.empty() && terms_.begin()->second == CycNum::rational(1, conductor_);
  }

  CycNum constant_term() const {
    auto it = terms_.find(Exponents(nvars_, 0));
    return it == terms_.end() ? CycNum::rational(0, conductor_) : it->second;
  }

  const Exponents& leading_exponents() const { return terms_.rbegin()->first; }
  const CycNum& leading_coefficient() const { return terms_.rbegin()->second; }

  int degree_in(int v) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e[v]);
    return d;
  }

  int min_degree_in(int v) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = d < 0 ? e[v] : std::min(d, e[v]);
    return d;
  }

  void add_term(const Exponents& e, const CycNum& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c.lift(conductor_));
    if (!inserted) {
      it->second += c.lift(conductor_);
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  MPoly operator-() const {
    MPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  friend MPoly operator+(const MPoly& a, const MPoly& b) {
    MPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }

  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r(a.conductor_, a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  MPoly scaled(const CycNum& s) const {
    if (s.is_zero()) return MPoly(conductor_, nvars_);
    MPoly r = *this;
    const CycNum sl = s.lift(conductor_);
    for (auto& [e, c] : r.terms_) c = c * sl;
    return r;
  }

  MPoly shifted(const Exponents& by) const {
    MPoly r(conductor_, nvars_);
    for (const auto& [e, c] : terms_) {
      Exponents f(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) f[i] = e[i] + by[i];
      r.terms_.emplace(std::move(f), c);
    }
    return r;
  }

  /// Exact quotient a / d when d divides a, otherwise nullopt.
  std::optional<MPoly> exact_divide(const MPoly& d) const {
    if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
    MPoly rem = *this;
    MPoly quot(conductor_, nvars_);
    const Exponents& ld = d.leading_exponents();
    const CycNum lc_inv = d.leading_coefficient().inv();
    while (!rem.is_zero()) {
      const Exponents& lr = rem.leading_exponents();
      Exponents diff(lr.size());
      for (std::size_t i = 0; i < lr.size(); ++i) {
        diff[i] = lr[i] - ld[i];
        if (diff[i] < 0) return std::nullopt;
      }
      const CycNum c = rem.leading_coefficient() * lc_inv;
      quot.add_term(diff, c);
      rem = rem - d.shifted(diff).scaled(c);
    }
    return quot;
  }

  /// Divides by the leading coefficient.
  MPoly monic() const {
    if (is_zero()) return *this;
    return scaled(leading_coefficient().inv());
  }

  MPoly galois(const GaloisUnit& u) const {
    MPoly r(conductor_, nvars_);
    for (const auto& [e, c] : terms_) r.add_term(e, galois_apply(u, c));
    return r;
  }

  CycNum evaluate(const std::vector<Integer>& values) const {
    CycNum acc = CycNum::rational(0, conductor_);
    for (const auto& [e, c] : terms_) {
      Rational f = 1;
      for (std::size_t i = 0; i < e.size(); ++i) {
        Integer p;
        mpz_pow_ui(p.get_mpz_t(), values.at(i).get_mpz_t(), static_cast<unsigned long>(e[i]));
        f *= p;
      }
      acc += c.scaled(f);
    }
    return acc;
  }

  /// True when every coefficient is rational.
  bool has_rational_coefficients() const {
    for (const auto& [e, c] : terms_) {
      if (!c.is_rational()) return false;
    }
    return true;
  }

  friend bool operator==(const MPoly& a, const MPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto it = b.terms_.begin();
    for (const auto& [e, c] : a.terms_) {
      if (e != it->first || c != it->second) return false;
      ++it;
    }
    return true;
  }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  std::string to_string(const std::vector<std::string>& names, const std::string& zvar = "z") const;

  static int total_degree(const Exponents& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
  }

 private:
  long conductor_ = 1;
  int nvars_ = 0;
  std::map<Exponents, CycNum> terms_;
};

namespace detail {

inline std::string monomial_string(const Exponents& e, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += names.at(i);
    if (e[i] != 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

/// Appends "coef*mono" with sign handling; returns the text of one signed term.
inline void append_term(std::ostringstream& os, bool first, const CycNum& c, const std::string& mono,
                        const std::string& zvar) {
  bool negative = false;
  std::string cs;
  if (c.is_rational()) {
    negative = sgn(c.rational_part()) < 0;
    Rational mag = abs(c.rational_part());
    if (mag != 1 || mono.empty()) cs = mag.get_str();
  } else if (c.is_monomial()) {
    std::string t = c.to_string(zvar);
    if (t[0] == '-') {
      negative = true;
      t = t.substr(1);
    }
    cs = t;
  } else {
    cs = "(" + c.to_string(zvar) + ")";
  }
  if (first) {
    if (negative) os << "-";
  } else {
    os << (negative ? " - " : " + ");
  }
  os << cs;
  if (!cs.empty() && !mono.empty()) os << "*";
  os << mono;
}

}  // namespace detail

inline std::string MPoly::to_string(const std::vector<std::string>& names, const std::string& zvar) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    detail::append_term(os, first, it->second, detail::monomial_string(it->first, names), zvar);
    first = false;
  }
  return os.str();
}

namespace detail {

inline MPoly coefficient_in(const MPoly& p, int v, int degree) {
  MPoly r(p.conductor(), p.nvars());
  for (const auto& [e, c] : p.terms()) {
    if (e[v] != degree) continue;
    Exponents f = e;
    f[v] = 0;
    r.add_term(f, c);
  }
  return r;
}

inline MPoly mpoly_gcd(const MPoly& a, const MPoly& b);

/// gcd of the coefficients of p viewed as a polynomial in variable v.
inline MPoly content_in(const MPoly& p, int v) {
  MPoly g(p.conductor(), p.nvars());
  for (int d = p.degree_in(v); d >= 0; --d) {
    MPoly c = coefficient_in(p, v, d);
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.monic() : mpoly_gcd(g, c);
    if (g.is_one()) break;
  }
  return g;
}

inline MPoly primitive_part_in(const MPoly& p, int v) {
  if (p.is_zero()) return p;
  MPoly c = content_in(p, v);
  return *p.exact_divide(c);
}

/// Sparse pseudo-remainder of a by b with respect to variable v.
inline MPoly pseudo_remainder(MPoly a, const MPoly& b, int v) {
  const int db = b.degree_in(v);
  const MPoly lb = coefficient_in(b, v, db);
  while (!a.is_zero() && a.degree_in(v) >= db) {
    const int da = a.degree_in(v);
    const MPoly la = coefficient_in(a, v, da);
    Exponents shift(a.nvars(), 0);
    shift[v] = da - db;
    a = lb * a - la * b.shifted(shift);
  }
  return a;
}

inline int first_variable(const MPoly& a, const MPoly& b) {
  int best = a.nvars();
  for (const MPoly* p : {&a, &b}) {
    for (const auto& [e, c] : p->terms()) {
      for (int i = 0; i < static_cast<int>(e.size()); ++i) {
        if (e[i] > 0) best = std::min(best, i);
      }
    }
  }
  return best;
}

/// Monic gcd over Q(zeta_N)[m_1..m_s] by recursive primitive remainder sequences.
inline MPoly mpoly_gcd(const MPoly& a, const MPoly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  const int v = first_variable(a, b);
  if (v == a.nvars()) return MPoly::constant(CycNum::rational(1), a.conductor(), a.nvars());
  // monomial shortcut
  if (a.is_monomial() || b.is_monomial()) {
    const MPoly& mono = a.is_monomial() ? a : b;
    const MPoly& other = a.is_monomial() ? b : a;
    Exponents e = mono.leading_exponents();
    for (int i = 0; i < other.nvars(); ++i) e[i] = std::min(e[i], other.min_degree_in(i));
    return MPoly::monomial(CycNum::rational(1), e, a.conductor());
  }
  const MPoly ca = content_in(a, v);
  const MPoly cb = content_in(b, v);
  const MPoly gc = mpoly_gcd(ca, cb);
  MPoly p = *a.exact_divide(ca);
  MPoly q = *b.exact_divide(cb);
  if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);
  while (true) {
    if (q.degree_in(v) <= 0) {
      // q is free of v and primitive, hence a unit in v-direction
      return gc.monic();
    }
    MPoly r = pseudo_remainder(p, q, v);
    if (r.is_zero()) return (gc * q).monic();
    p = q;
    q = primitive_part_in(r, v);
  }
}

}  // namespace detail

/// Reduced quotient of polynomials in the Kummer parameters; the denominator is monic
/// (leading coefficient 1 in lex order) and coprime to the numerator, so equality is structural.
class RatFunc {
 public:
  RatFunc() : num_(1, 0), den_(MPoly::constant(CycNum::rational(1), 1, 0)) {}
  RatFunc(long conductor, int nvars)
      : num_(conductor, nvars), den_(MPoly::constant(CycNum::rational(1), conductor, nvars)) {}

  RatFunc(MPoly num, MPoly den) : num_(std::move(num)), den_(std::move(den)) { canonicalize(); }

  static RatFunc constant(const CycNum& c, long conductor, int nvars) {
    return RatFunc(MPoly::constant(c, conductor, nvars), MPoly::constant(CycNum::rational(1), conductor, nvars));
  }

  static RatFunc from_poly(MPoly p) {
    MPoly one = MPoly::constant(CycNum::rational(1), p.conductor(), p.nvars());
    RatFunc r;
    r.num_ = std::move(p);
    r.den_ = std::move(one);
    return r;
  }

  const MPoly& num() const noexcept { return num_; }
  const MPoly& den() const noexcept { return den_; }
  long conductor() const noexcept { return num_.conductor(); }
  int nvars() const noexcept { return num_.nvars(); }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return num_.is_constant() && den_.is_one(); }
  CycNum constant_value() const { return num_.constant_term(); }

  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) return RatFunc(a.conductor(), a.nvars());
    if (a.is_polynomial() && b.is_polynomial()) return from_poly(a.num_ * b.num_);
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }

  RatFunc inv() const {
    if (is_zero()) throw DivisionByZero("inverse of zero rational function");
    return RatFunc(den_, num_);
  }

  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inv(); }

  RatFunc scaled(const CycNum& c) const {
    RatFunc r = *this;
    r.num_ = r.num_.scaled(c);
    return r;
  }

  RatFunc galois(const GaloisUnit& u) const { return RatFunc(num_.galois(u), den_.galois(u)); }

  CycNum evaluate(const std::vector<Integer>& values) const {
    const CycNum d = den_.evaluate(values);
    if (d.is_zero()) throw DivisionByZero("evaluation hits a pole of a rational function");
    return num_.evaluate(values) * d.inv();
  }

  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  std::string to_string(const std::vector<std::string>& names, const std::string& zvar = "z") const {
    if (den_.is_one()) return num_.to_string(names, zvar);
    return "(" + num_.to_string(names, zvar) + ")/(" + den_.to_string(names, zvar) + ")";
  }

 private:
  void canonicalize() {
    if (den_.is_zero()) throw DivisionByZero("zero denominator");
    if (num_.is_zero()) {
      den_ = MPoly::constant(CycNum::rational(1), num_.conductor(), num_.nvars());
      return;
    }
    if (!den_.is_constant()) {
      const MPoly g = detail::mpoly_gcd(num_, den_);
      if (!g.is_one()) {
        num_ = *num_.exact_divide(g);
        den_ = *den_.exact_divide(g);
      }
    }
    const CycNum lc = den_.leading_coefficient();
    if (lc != CycNum::rational(1, lc.conductor())) {
      const CycNum s = lc.inv();
      num_ = num_.scaled(s);
      den_ = den_.scaled(s);
    }
  }

  MPoly num_;
  MPoly den_;
};

}  // namespace twistforge
