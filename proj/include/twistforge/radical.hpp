#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ratfunc.hpp"

namespace twistforge {

struct RadicalSlot {
  std::string name;  // symbol of the Kummer parameter m_t
  int q = 2;         // the slot adjoins a q-th root of m_t

  friend bool operator==(const RadicalSlot&, const RadicalSlot&) = default;
};

/// Q(zeta_N)(m_1..m_s)[x_1..x_s] / (x_t^{q_t} - m_t) with formal parameters m_t.
class RadFieldSpec {
 public:
  RadFieldSpec() = default;
  RadFieldSpec(long conductor, std::vector<RadicalSlot> slots) : conductor_(conductor), slots_(std::move(slots)) {
    if (conductor_ < 1) throw DomainError("conductor must be positive");
    for (const auto& s : slots_) {
      if (s.q < 2) throw DomainError("radical exponent must be at least 2 for slot " + s.name);
      if (conductor_ % s.q != 0) {
        throw DomainError("zeta_" + std::to_string(s.q) + " does not lie in Q(zeta_" + std::to_string(conductor_) +
                          "); slot " + s.name + " is not a Kummer layer");
      }
    }
  }

  long conductor() const noexcept { return conductor_; }
  const std::vector<RadicalSlot>& slots() const noexcept { return slots_; }
  int nslots() const noexcept { return static_cast<int>(slots_.size()); }

  /// Degree of the radical part, prod q_t.
  long radical_degree() const {
    long d = 1;
    for (const auto& s : slots_) d *= s.q;
    return d;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& s : slots_) out.push_back(s.name);
    return out;
  }

  /// Flat index of a radical exponent vector (first slot most significant).
  long flat_index(const Exponents& a) const {
    long idx = 0;
    for (int t = 0; t < nslots(); ++t) idx = idx * slots_[t].q + a[t];
    return idx;
  }

  Exponents unflatten(long idx) const {
    Exponents a(nslots(), 0);
    for (int t = nslots() - 1; t >= 0; --t) {
      a[t] = static_cast<int>(idx % slots_[t].q);
      idx /= slots_[t].q;
    }
    return a;
  }

  friend bool operator==(const RadFieldSpec&, const RadFieldSpec&) = default;

 private:
  long conductor_ = 1;
  std::vector<RadicalSlot> slots_;
};

using RadSpecPtr = std::shared_ptr<const RadFieldSpec>;

/// Automorphism of the radical field: zeta_N -> zeta_N^b and x_t -> zeta_{q_t}^{e_t} x_t.
struct ExtendedGaloisElement {
  GaloisUnit unit;
  std::vector<int> shifts;

  friend bool operator==(const ExtendedGaloisElement& a, const ExtendedGaloisElement& b) {
    return a.unit == b.unit && a.shifts == b.shifts;
  }
  friend bool operator<(const ExtendedGaloisElement& a, const ExtendedGaloisElement& b) {
    if (a.unit.exponent() != b.unit.exponent()) return a.unit.exponent() < b.unit.exponent();
    return a.shifts < b.shifts;
  }
};

inline void validate(const RadFieldSpec& spec, const ExtendedGaloisElement& g) {
  if (g.unit.conductor() % spec.conductor() != 0) {
    throw DomainError("Galois unit conductor is incompatible with the radical field");
  }
  if (static_cast<int>(g.shifts.size()) != spec.nslots()) throw DomainError("shift vector has wrong length");
  for (int t = 0; t < spec.nslots(); ++t) {
    if (g.shifts[t] < 0 || g.shifts[t] >= spec.slots()[t].q) {
      throw DomainError("multiplier exponent out of range for slot " + spec.slots()[t].name);
    }
  }
}

/// Composition g * h (apply h first): (b, e)(b', e') = (b b', e + b e').
inline ExtendedGaloisElement compose(const RadFieldSpec& spec, const ExtendedGaloisElement& g,
                                     const ExtendedGaloisElement& h) {
  ExtendedGaloisElement r;
  r.unit = g.unit * h.unit;
  r.shifts.resize(spec.nslots());
  for (int t = 0; t < spec.nslots(); ++t) {
    const long q = spec.slots()[t].q;
    r.shifts[t] = static_cast<int>(mod_floor(g.shifts[t] + g.unit.exponent() * h.shifts[t], q));
  }
  return r;
}

/// Element of the radical function field, sum over radical exponent vectors a of c_a * x^a.
class RadNum {
 public:
  RadNum() = default;
  explicit RadNum(RadSpecPtr spec) : spec_(std::move(spec)) {}

  static RadNum from_cyc(const RadSpecPtr& spec, const CycNum& c) {
    return from_ratfunc(spec, RatFunc::constant(c, spec->conductor(), spec->nslots()));
  }

  static RadNum from_rational(const RadSpecPtr& spec, const Rational& r) {
    return from_cyc(spec, CycNum::rational(r, spec->conductor()));
  }

  static RadNum from_ratfunc(const RadSpecPtr& spec, const RatFunc& f) {
    RadNum r(spec);
    if (!f.is_zero()) r.terms_.emplace(Exponents(spec->nslots(), 0), f);
    return r;
  }

  /// x_t^power, 0 <= power < q_t.
  static RadNum radical(const RadSpecPtr& spec, int slot, int power = 1) {
    Exponents a(spec->nslots(), 0);
    a.at(slot) = power;
    return monomial(spec, a, RatFunc::constant(CycNum::rational(1), spec->conductor(), spec->nslots()));
  }

  /// The formal parameter m_t = x_t^{q_t}.
  static RadNum parameter(const RadSpecPtr& spec, int slot) {
    return from_ratfunc(spec, RatFunc::from_poly(MPoly::variable(spec->conductor(), spec->nslots(), slot)));
  }

  static RadNum monomial(const RadSpecPtr& spec, const Exponents& a, const RatFunc& c) {
    RadNum r(spec);
    if (!c.is_zero()) r.terms_.emplace(a, c);
    return r;
  }

  const RadSpecPtr& spec() const noexcept { return spec_; }
  const std::map<Exponents, RatFunc>& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  bool is_radical_free() const {
    return terms_.empty() || (terms_.size() == 1 && is_zero_vector(terms_.begin()->first));
  }

  RatFunc radical_free_value() const {
    if (terms_.empty()) return RatFunc(spec_->conductor(), spec_->nslots());
    if (!is_radical_free()) throw DomainError("element has a nontrivial radical part");
    return terms_.begin()->second;
  }

  RadNum operator-() const {
    RadNum r = *this;
    for (auto& [a, c] : r.terms_) c = -c;
    return r;
  }

  friend RadNum operator+(const RadNum& x, const RadNum& y) {
    check_same(x, y);
    RadNum r = x.spec_ ? x : RadNum(y.spec_);
    for (const auto& [a, c] : y.terms_) r.add_term(a, c);
    return r;
  }
  friend RadNum operator-(const RadNum& x, const RadNum& y) { return x + (-y); }

  friend RadNum operator*(const RadNum& x, const RadNum& y) {
    check_same(x, y);
    const RadSpecPtr& spec = x.spec_ ? x.spec_ : y.spec_;
    RadNum r(spec);
    for (const auto& [a, ca] : x.terms_) {
      for (const auto& [b, cb] : y.terms_) {
        Exponents e(a.size());
        Exponents carry(a.size(), 0);
        bool any_carry = false;
        for (std::size_t t = 0; t < a.size(); ++t) {
          e[t] = a[t] + b[t];
          const int q = spec->slots()[t].q;
          if (e[t] >= q) {
            e[t] -= q;
            carry[t] = 1;
            any_carry = true;
          }
        }
        RatFunc c = ca * cb;
        if (any_carry) c = RatFunc::from_poly(MPoly::monomial(CycNum::rational(1), carry, spec->conductor())) * c;
        r.add_term(e, c);
      }
    }
    return r;
  }

  RadNum& operator+=(const RadNum& o) { return *this = *this + o; }
  RadNum& operator-=(const RadNum& o) { return *this = *this - o; }
  RadNum& operator*=(const RadNum& o) { return *this = *this * o; }

  RadNum inv() const;
  friend RadNum operator/(const RadNum& x, const RadNum& y) { return x * y.inv(); }

  friend bool operator==(const RadNum& x, const RadNum& y) {
    if (x.terms_.size() != y.terms_.size()) return false;
    auto it = y.terms_.begin();
    for (const auto& [a, c] : x.terms_) {
      if (a != it->first || c != it->second) return false;
      ++it;
    }
    return true;
  }
  friend bool operator!=(const RadNum& x, const RadNum& y) { return !(x == y); }

  /// Image under an automorphism of the radical field; the parameters m_t are fixed.
  RadNum galois(const ExtendedGaloisElement& g) const {
    if (terms_.empty()) return *this;
    validate(*spec_, g);
    const long n = spec_->conductor();
    RadNum r(spec_);
    for (const auto& [a, c] : terms_) {
      long e = 0;
      for (int t = 0; t < spec_->nslots(); ++t) e += (n / spec_->slots()[t].q) * g.shifts[t] * a[t];
      RatFunc img = c.galois(g.unit);
      if (mod_floor(e, n) != 0) img = img.scaled(CycNum::zeta(n, e));
      r.add_term(a, img);
    }
    return r;
  }

  /// Substitutes integers for the parameters; only valid on radical-free elements.
  CycNum evaluate(const std::vector<Integer>& values) const {
    return radical_free_value().evaluate(values);
  }

  std::string to_string(const std::string& zvar = "z") const;

 private:
  static bool is_zero_vector(const Exponents& a) {
    for (int v : a) {
      if (v != 0) return false;
    }
    return true;
  }

  static void check_same(const RadNum& x, const RadNum& y) {
    if (x.spec_ && y.spec_ && x.spec_ != y.spec_ && !(*x.spec_ == *y.spec_)) {
      throw DomainError("radical field mismatch");
    }
  }

  void add_term(const Exponents& a, const RatFunc& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (!inserted) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  RadSpecPtr spec_;
  std::map<Exponents, RatFunc> terms_;
};

inline RadNum RadNum::inv() const {
  if (is_zero()) throw DivisionByZero("inverse of zero radical number");
  const RadFieldSpec& spec = *spec_;
  const long n = spec.conductor();
  const int s = spec.nslots();
  if (is_monomial()) {
    const auto& [a, c] = *terms_.begin();
    Exponents b(s, 0);
    Exponents denom(s, 0);
    for (int t = 0; t < s; ++t) {
      if (a[t] > 0) {
        b[t] = spec.slots()[t].q - a[t];
        denom[t] = 1;
      }
    }
    // (c x^a)^{-1} = x^b / (c * prod m_t)
    const RatFunc d = RatFunc::from_poly(MPoly::monomial(CycNum::rational(1), denom, n)) * c;
    return monomial(spec_, b, d.inv());
  }
  // Solve (multiplication by this) * y = 1 over the rational-function base.
  const long dim = spec.radical_degree();
  std::vector<std::vector<RatFunc>> m(dim, std::vector<RatFunc>(dim + 1, RatFunc(n, s)));
  for (long col = 0; col < dim; ++col) {
    const RadNum prod = *this * monomial(spec_, spec.unflatten(col), RatFunc::constant(CycNum::rational(1), n, s));
    for (const auto& [a, c] : prod.terms_) m[spec.flat_index(a)][col] = c;
  }
  m[0][dim] = RatFunc::constant(CycNum::rational(1), n, s);
  for (long c = 0; c < dim; ++c) {
    long p = c;
    while (p < dim && m[p][c].is_zero()) ++p;
    if (p == dim) throw DivisionByZero("radical number is not invertible");
    std::swap(m[p], m[c]);
    const RatFunc iv = m[c][c].inv();
    for (long k = c; k <= dim; ++k) m[c][k] = m[c][k] * iv;
    for (long i = 0; i < dim; ++i) {
      if (i == c || m[i][c].is_zero()) continue;
      const RatFunc f = m[i][c];
      for (long k = c; k <= dim; ++k) {
        if (!m[c][k].is_zero()) m[i][k] = m[i][k] - f * m[c][k];
      }
    }
  }
  RadNum r(spec_);
  for (long i = 0; i < dim; ++i) r.add_term(spec.unflatten(i), m[i][dim]);
  return r;
}

namespace detail {

inline std::string radical_string(const RadFieldSpec& spec, const Exponents& a) {
  std::string s;
  for (int t = 0; t < spec.nslots(); ++t) {
    if (a[t] == 0) continue;
    if (!s.empty()) s += "*";
    s += spec.slots()[t].name + "^(" + std::to_string(a[t]) + "/" + std::to_string(spec.slots()[t].q) + ")";
  }
  return s;
}

}  // namespace detail

inline std::string RadNum::to_string(const std::string& zvar) const {
  if (terms_.empty()) return "0";
  const auto names = spec_->names();
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const std::string rad = detail::radical_string(*spec_, it->first);
    std::string coef = it->second.to_string(names, zvar);
    std::string term;
    if (rad.empty()) {
      term = coef;
    } else if (coef == "1") {
      term = rad;
    } else if (coef == "-1") {
      term = "-" + rad;
    } else {
      term = "(" + coef + ")*" + rad;
    }
    if (!out.empty()) out += " + ";
    out += term;
  }
  return out;
}

inline bool is_zero(const RadNum& x) { return x.is_zero(); }
inline RadNum inverse(const RadNum& x) { return x.inv(); }

}  // namespace twistforge
