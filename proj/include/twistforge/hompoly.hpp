#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "radical.hpp"

namespace twistforge {

/// Homogeneous polynomial in w_1..w_g; terms are kept in lex order with w_1 > w_2 > ...,
/// which is graded lex since every term has the same degree. begin() is the leading term.
template <class C>
class HomPoly {
 public:
  using TermMap = std::map<Exponents, C, std::greater<Exponents>>;

  HomPoly() = default;
  HomPoly(int nvars, int degree) : nvars_(nvars), degree_(degree) {}

  static HomPoly monomial(const Exponents& e, const C& c) {
    int d = 0;
    for (int v : e) d += v;
    HomPoly p(static_cast<int>(e.size()), d);
    p.add_term(e, c);
    return p;
  }

  int nvars() const noexcept { return nvars_; }
  int degree() const noexcept { return degree_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  const Exponents& leading_exponents() const { return terms_.begin()->first; }
  const C& leading_coefficient() const { return terms_.begin()->second; }

  /// Coefficient of a monomial, or nullptr when absent.
  const C* coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? nullptr : &it->second;
  }

  void add_term(const Exponents& e, const C& c) {
    if (static_cast<int>(e.size()) != nvars_) throw DomainError("monomial has the wrong number of variables");
    int d = 0;
    for (int v : e) d += v;
    if (d != degree_) {
      throw DomainError("term of degree " + std::to_string(d) + " in a form of degree " + std::to_string(degree_));
    }
    if (twistforge::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second = it->second + c;
      if (twistforge::is_zero(it->second)) terms_.erase(it);
    }
  }

  HomPoly operator-() const {
    HomPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
  }

  friend HomPoly operator+(const HomPoly& a, const HomPoly& b) {
    check_shape(a, b);
    HomPoly r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
  }
  friend HomPoly operator-(const HomPoly& a, const HomPoly& b) { return a + (-b); }

  friend HomPoly operator*(const HomPoly& a, const HomPoly& b) {
    if (a.nvars_ != b.nvars_) throw DomainError("polynomials in different numbers of variables");
    HomPoly r(a.nvars_, a.degree_ + b.degree_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  HomPoly scaled(const C& s) const {
    HomPoly r(nvars_, degree_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return r;
  }

  template <class F>
  auto map_coefficients(F f) const -> HomPoly<decltype(f(std::declval<const C&>()))> {
    HomPoly<decltype(f(std::declval<const C&>()))> r(nvars_, degree_);
    for (const auto& [e, c] : terms_) r.add_term(e, f(c));
    return r;
  }

  friend bool operator==(const HomPoly& a, const HomPoly& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    if (!a.terms_.empty() && a.degree_ != b.degree_) return false;
    auto it = b.terms_.begin();
    for (const auto& [e, c] : a.terms_) {
      if (e != it->first || !(c == it->second)) return false;
      ++it;
    }
    return true;
  }
  friend bool operator!=(const HomPoly& a, const HomPoly& b) { return !(a == b); }

 private:
  static void check_shape(const HomPoly& a, const HomPoly& b) {
    if (a.nvars_ != b.nvars_) throw DomainError("polynomials in different numbers of variables");
    if (a.degree_ != b.degree_ && !a.is_zero() && !b.is_zero()) {
      throw DomainError("adding forms of different degrees");
    }
  }

  int nvars_ = 0;
  int degree_ = 0;
  TermMap terms_;
};

using CycPoly = HomPoly<CycNum>;
using RadPoly = HomPoly<RadNum>;

/// The canonical ideal given by a generator list; names are used for reporting only.
struct CanonicalIdeal {
  int nvars = 0;
  std::vector<CycPoly> generators;
  std::vector<std::string> names;

  std::vector<int> degrees() const {
    std::vector<int> d;
    for (const auto& f : generators) d.push_back(f.degree());
    return d;
  }
};

/// All exponent vectors of a given degree, in decreasing lex order.
inline std::vector<Exponents> monomials_of_degree(int nvars, int degree) {
  std::vector<Exponents> out;
  Exponents e(nvars, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == nvars - 1) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (int k = left; k >= 0; --k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
  };
  if (nvars == 0) {
    if (degree == 0) out.push_back(e);
    return out;
  }
  rec(0, degree);
  return out;
}

/// Linear substitution w_i -> sum_j s(i, j) w'_j.
template <class C>
HomPoly<C> substitute(const HomPoly<C>& p, const Matrix<C>& s) {
  const int g = p.nvars();
  if (static_cast<int>(s.rows()) != g || static_cast<int>(s.cols()) != g) {
    throw DomainError("substitution matrix does not match the number of variables");
  }
  std::vector<HomPoly<C>> lin;
  for (int i = 0; i < g; ++i) {
    HomPoly<C> l(g, 1);
    for (int j = 0; j < g; ++j) {
      Exponents e(g, 0);
      e[j] = 1;
      l.add_term(e, s(i, j));
    }
    lin.push_back(std::move(l));
  }
  std::map<std::pair<int, int>, HomPoly<C>> powers;
  auto power = [&](int i, int k) -> const HomPoly<C>& {
    auto key = std::make_pair(i, k);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    HomPoly<C> r = lin[i];
    for (int t = 1; t < k; ++t) r = r * lin[i];
    return powers.emplace(key, std::move(r)).first->second;
  };
  HomPoly<C> out(g, p.degree());
  for (const auto& [e, c] : p.terms()) {
    HomPoly<C> term = HomPoly<C>::monomial(Exponents(g, 0), c);
    for (int i = 0; i < g; ++i) {
      if (e[i] > 0) term = term * power(i, e[i]);
    }
    out = out + term;
  }
  return out;
}

inline RadPoly to_radical(const RadSpecPtr& spec, const CycPoly& p) {
  return p.map_coefficients([&](const CycNum& c) { return RadNum::from_cyc(spec, c); });
}

inline Matrix<RadNum> to_radical(const RadSpecPtr& spec, const Matrix<CycNum>& m) {
  return m.map([&](const CycNum& c) { return RadNum::from_cyc(spec, c); });
}

/// Removes the common radical-monomial and rational-function content of a form.
/// Throws VerificationError when a fractional radical exponent survives.
inline RadPoly normalize_generator(const RadPoly& p) {
  if (p.is_zero()) throw DomainError("cannot normalize the zero form");
  const RadSpecPtr spec = p.leading_coefficient().spec();
  const long n = spec->conductor();
  const int s = spec->nslots();
  const RadNum lead_inv = p.leading_coefficient().inv();

  std::vector<std::pair<Exponents, RatFunc>> coeffs;
  for (const auto& [e, c] : p.terms()) {
    const RadNum q = c * lead_inv;
    if (!q.is_radical_free()) {
      throw VerificationError("fractional radical exponent survives normalization: " + q.to_string());
    }
    coeffs.emplace_back(e, q.radical_free_value());
  }
  // clear denominators
  MPoly den = MPoly::constant(CycNum::rational(1), n, s);
  for (const auto& [e, c] : coeffs) {
    if (c.is_polynomial()) continue;
    const MPoly g = detail::mpoly_gcd(den, c.den());
    den = den * *c.den().exact_divide(g);
  }
  std::vector<std::pair<Exponents, MPoly>> polys;
  for (const auto& [e, c] : coeffs) {
    polys.emplace_back(e, *(c.num() * den).exact_divide(c.den()));
  }
  MPoly g = polys.front().second;
  for (const auto& [e, q] : polys) g = detail::mpoly_gcd(g, q);
  if (!g.is_constant()) {
    for (auto& [e, q] : polys) q = *q.exact_divide(g);
  }
  bool rational = true;
  for (const auto& [e, q] : polys) rational = rational && q.has_rational_coefficients();
  CycNum scale;
  if (rational) {
    Integer l = 1;
    Integer h = 0;
    for (const auto& [e, q] : polys) {
      for (const auto& [m, c] : q.terms()) l = lcm(l, Integer(c.rational_part().get_den()));
    }
    for (const auto& [e, q] : polys) {
      for (const auto& [m, c] : q.terms()) h = gcd(h, Integer(Rational(c.rational_part() * l).get_num()));
    }
    Rational f = Rational(l) / Rational(h);
    if (sgn(polys.front().second.leading_coefficient().rational_part()) < 0) f = -f;
    scale = CycNum::rational(f, n);
  } else {
    scale = polys.front().second.leading_coefficient().inv();
  }
  RadPoly out(p.nvars(), p.degree());
  for (const auto& [e, q] : polys) out.add_term(e, RadNum::from_ratfunc(spec, RatFunc::from_poly(q.scaled(scale))));
  return out;
}

/// Substitutes integers for the Kummer parameters of a radical-free form.
inline CycPoly evaluate_parameters(const RadPoly& p, const std::vector<Integer>& values) {
  return p.map_coefficients([&](const RadNum& c) { return c.evaluate(values); });
}

/// Decides membership of a form in a graded piece of an ideal by linear algebra over Q(zeta_N).
/// The row-reduced span of {monomial * generator} is cached per degree.
class GradedMembership {
 public:
  GradedMembership(CanonicalIdeal ideal, long conductor) : ideal_(std::move(ideal)), conductor_(conductor) {}

  const CanonicalIdeal& ideal() const noexcept { return ideal_; }

  bool contains(const CycPoly& p) {
    if (p.is_zero()) return true;
    if (p.nvars() != ideal_.nvars) return false;
    const Piece& piece = piece_of_degree(p.degree());
    if (piece.rows.empty()) return false;
    std::vector<CycNum> v(piece.columns.size(), zero());
    for (const auto& [e, c] : p.terms()) v[piece.columns.at(e)] = c;
    for (std::size_t r = 0; r < piece.rows.size(); ++r) {
      const std::size_t pc = piece.pivots[r];
      if (v[pc].is_zero()) continue;
      const CycNum f = v[pc];
      for (std::size_t j = pc; j < v.size(); ++j) {
        if (!piece.rows[r][j].is_zero()) v[j] -= f * piece.rows[r][j];
      }
    }
    for (const auto& x : v) {
      if (!x.is_zero()) return false;
    }
    return true;
  }

  /// Dimension of the degree-d piece of the ideal.
  std::size_t dimension(int degree) { return piece_of_degree(degree).rows.size(); }

 private:
  struct Piece {
    std::map<Exponents, std::size_t> columns;
    std::vector<std::vector<CycNum>> rows;
    std::vector<std::size_t> pivots;
  };

  CycNum zero() const { return CycNum::rational(0, conductor_); }

  const Piece& piece_of_degree(int d) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(d);
    if (it != cache_.end()) return it->second;
    Piece piece;
    const auto monos = monomials_of_degree(ideal_.nvars, d);
    for (std::size_t i = 0; i < monos.size(); ++i) piece.columns[monos[i]] = i;
    std::vector<std::vector<CycNum>> rows;
    for (const auto& f : ideal_.generators) {
      if (f.degree() > d) continue;
      for (const auto& m : monomials_of_degree(ideal_.nvars, d - f.degree())) {
        const CycPoly prod = CycPoly::monomial(m, CycNum::rational(1, conductor_)) * f;
        std::vector<CycNum> row(monos.size(), zero());
        for (const auto& [e, c] : prod.terms()) row[piece.columns.at(e)] = c;
        rows.push_back(std::move(row));
      }
    }
    if (!rows.empty()) {
      Matrix<CycNum> m(rows.size(), monos.size(), zero());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < monos.size(); ++j) m(i, j) = rows[i][j];
      }
      piece.pivots = rref_in_place(m);
      for (std::size_t i = 0; i < piece.pivots.size(); ++i) piece.rows.push_back(m.row(i));
    }
    return cache_.emplace(d, std::move(piece)).first->second;
  }

  CanonicalIdeal ideal_;
  long conductor_;
  std::mutex mu_;
  std::map<int, Piece> cache_;
};

inline bool graded_membership(const CycPoly& p, const CanonicalIdeal& ideal, long conductor) {
  GradedMembership gm(ideal, conductor);
  return gm.contains(p);
}

namespace detail {

inline bool single_term(const std::string& s) {
  const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
  return s.find(" + ", start) == std::string::npos && s.find(" - ", start) == std::string::npos &&
         s.find('/') == std::string::npos;
}

inline std::string monomial_text(const Exponents& e, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += names[i];
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

}  // namespace detail

inline std::vector<std::string> default_variable_names(int g) {
  std::vector<std::string> v;
  for (int i = 1; i <= g; ++i) v.push_back("w" + std::to_string(i));
  return v;
}

/// Prints terms from the leading one down; coefficient text comes from the callback.
template <class C, class F>
std::string format_form(const HomPoly<C>& p, const std::vector<std::string>& names, F coef_text) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    std::string cs = coef_text(c);
    const std::string mono = detail::monomial_text(e, names);
    bool neg = false;
    if (detail::single_term(cs) && !cs.empty() && cs[0] == '-') {
      neg = true;
      cs = cs.substr(1);
    }
    std::string body;
    if (mono.empty()) {
      body = detail::single_term(cs) ? cs : "(" + cs + ")";
    } else if (cs == "1") {
      body = mono;
    } else if (detail::single_term(cs)) {
      body = cs + "*" + mono;
    } else {
      body = "(" + cs + ")*" + mono;
    }
    if (first) {
      out = neg ? "-" + body : body;
    } else {
      out += neg ? " - " : " + ";
      out += body;
    }
    first = false;
  }
  return out;
}

inline std::string to_string(const CycPoly& p, const std::vector<std::string>& names) {
  return format_form(p, names, [](const CycNum& c) { return c.to_string(); });
}

inline std::string to_string(const RadPoly& p, const std::vector<std::string>& names) {
  return format_form(p, names, [](const RadNum& c) { return c.to_string(); });
}

}  // namespace twistforge
