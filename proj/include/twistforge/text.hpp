#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "hompoly.hpp"

namespace twistforge {

/// Symbols recognised by the polynomial grammar: z (a primitive N-th root of unity),
/// the Kummer parameter names, and the differential variables w1..wg.
struct PolyContext {
  long conductor = 1;
  std::vector<std::string> params;
  int nvars = 0;

  std::size_t width() const { return 1 + params.size() + static_cast<std::size_t>(nvars); }
};

/// Expanded polynomial: exponent layout is [z, params..., w1..wg].
using SparsePoly = std::map<std::vector<int>, Rational>;

namespace detail {

inline void add_into(SparsePoly& a, const std::vector<int>& e, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = a.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) a.erase(it);
  }
}

inline SparsePoly sparse_mul(const SparsePoly& a, const SparsePoly& b) {
  SparsePoly r;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      add_into(r, e, ca * cb);
    }
  }
  return r;
}

class PolyParser {
 public:
  PolyParser(const std::string& text, const PolyContext& ctx, std::size_t line, std::size_t column)
      : s_(text), ctx_(ctx), line_(line), col0_(column) {}

  SparsePoly parse() {
    SparsePoly p = expr();
    skip_ws();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col0_ + pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  SparsePoly constant(const Rational& c) const {
    SparsePoly p;
    add_into(p, std::vector<int>(ctx_.width(), 0), c);
    return p;
  }

  SparsePoly expr() {
    SparsePoly acc;
    bool first = true;
    while (true) {
      skip_ws();
      Rational sign = 1;
      if (accept('-')) {
        sign = -1;
      } else if (accept('+')) {
      } else if (!first) {
        break;
      }
      SparsePoly t = term();
      for (const auto& [e, c] : t) add_into(acc, e, sign * c);
      first = false;
    }
    return acc;
  }

  SparsePoly term() {
    SparsePoly acc = factor();
    while (true) {
      if (accept('*')) {
        acc = sparse_mul(acc, factor());
      } else if (accept('/')) {
        skip_ws();
        const Integer d = integer();
        if (sgn(d) == 0) fail("division by zero");
        for (auto& [e, c] : acc) c /= Rational(d);
      } else {
        break;
      }
    }
    return acc;
  }

  SparsePoly factor() {
    SparsePoly base = atom();
    if (accept('^')) {
      skip_ws();
      const Integer k = integer();
      if (!k.fits_slong_p() || k > 1000) fail("exponent too large");
      SparsePoly r = constant(1);
      for (long i = 0; i < k.get_si(); ++i) r = sparse_mul(r, base);
      return r;
    }
    return base;
  }

  Integer integer() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    return Integer(s_.substr(start, pos_ - start));
  }

  SparsePoly atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      SparsePoly inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return constant(Rational(integer()));
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      std::vector<int> e(ctx_.width(), 0);
      e[symbol_index(name, start)] = 1;
      SparsePoly p;
      add_into(p, e, Rational(1));
      return p;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::size_t symbol_index(const std::string& name, std::size_t at) {
    if (name == "z") return 0;
    for (std::size_t i = 0; i < ctx_.params.size(); ++i) {
      if (ctx_.params[i] == name) return 1 + i;
    }
    if (name.size() > 1 && name[0] == 'w') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i) digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      if (digits) {
        const long k = std::stol(name.substr(1));
        if (k >= 1 && k <= ctx_.nvars) return 1 + ctx_.params.size() + static_cast<std::size_t>(k - 1);
      }
    }
    pos_ = at;
    fail("unknown symbol '" + name + "'");
  }

  const std::string& s_;
  const PolyContext& ctx_;
  std::size_t line_;
  std::size_t col0_;
  std::size_t pos_ = 0;
};

inline std::string sparse_term_text(const std::vector<int>& e, const Rational& c, const PolyContext& ctx) {
  std::vector<std::string> names{"z"};
  for (const auto& p : ctx.params) names.push_back(p);
  for (const auto& w : default_variable_names(ctx.nvars)) names.push_back(w);
  std::string s = c.get_str();
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    s += "*" + names[i];
    if (e[i] > 1) s += "^" + std::to_string(e[i]);
  }
  return s;
}

}  // namespace detail

inline SparsePoly parse_sparse(const std::string& text, const PolyContext& ctx, std::size_t line = 1,
                               std::size_t column = 1) {
  detail::PolyParser p(text, ctx, line, column);
  return p.parse();
}

/// Parses a scalar of Q(zeta_N) written as a polynomial in z.
inline CycNum parse_scalar(const std::string& text, long conductor, std::size_t line = 1, std::size_t column = 1) {
  PolyContext ctx;
  ctx.conductor = conductor;
  const SparsePoly sp = parse_sparse(text, ctx, line, column);
  std::vector<Rational> acc(conductor, Rational(0));
  for (const auto& [e, c] : sp) acc[e[0] % conductor] += c;
  return CycNum::make(conductor, acc);
}

namespace detail {

template <class C, class F>
HomPoly<C> sparse_to_form(const SparsePoly& sp, const PolyContext& ctx, std::size_t line, F coeff) {
  const std::size_t off = 1 + ctx.params.size();
  std::map<Exponents, std::map<std::vector<int>, Rational>> grouped;
  int degree = -1;
  for (const auto& [e, c] : sp) {
    Exponents w(e.begin() + off, e.end());
    int d = 0;
    for (int x : w) d += x;
    if (degree < 0) degree = d;
    if (d != degree) {
      throw ParseError("inhomogeneous form: term '" + sparse_term_text(e, c, ctx) + "' has degree " +
                           std::to_string(d) + ", expected " + std::to_string(degree),
                       line, 1);
    }
    grouped[w][std::vector<int>(e.begin(), e.begin() + off)] += c;
  }
  HomPoly<C> p(ctx.nvars, degree < 0 ? 0 : degree);
  for (const auto& [w, parts] : grouped) p.add_term(w, coeff(parts));
  return p;
}

}  // namespace detail

/// Form over Q(zeta_N); Kummer parameters are rejected.
inline CycPoly parse_form(const std::string& text, const PolyContext& ctx, std::size_t line = 1,
                          std::size_t column = 1) {
  const SparsePoly sp = parse_sparse(text, ctx, line, column);
  return detail::sparse_to_form<CycNum>(sp, ctx, line, [&](const std::map<std::vector<int>, Rational>& parts) {
    std::vector<Rational> acc(ctx.conductor, Rational(0));
    for (const auto& [e, c] : parts) {
      for (std::size_t i = 1; i < e.size(); ++i) {
        if (e[i] != 0) throw ParseError("parameter '" + ctx.params[i - 1] + "' not allowed here", line, column);
      }
      acc[e[0] % ctx.conductor] += c;
    }
    return CycNum::make(ctx.conductor, acc);
  });
}

/// Form whose coefficients may be polynomials in the Kummer parameters of a radical field.
inline RadPoly parse_radical_form(const std::string& text, const RadSpecPtr& spec, int nvars, std::size_t line = 1,
                                  std::size_t column = 1) {
  PolyContext ctx;
  ctx.conductor = spec->conductor();
  ctx.params = spec->names();
  ctx.nvars = nvars;
  const SparsePoly sp = parse_sparse(text, ctx, line, column);
  const long n = spec->conductor();
  const int s = spec->nslots();
  return detail::sparse_to_form<RadNum>(sp, ctx, line, [&](const std::map<std::vector<int>, Rational>& parts) {
    MPoly poly(n, s);
    for (const auto& [e, c] : parts) {
      std::vector<Rational> acc(n, Rational(0));
      acc[e[0] % n] += c;
      poly.add_term(Exponents(e.begin() + 1, e.end()), CycNum::make(n, acc));
    }
    return RadNum::from_ratfunc(spec, RatFunc::from_poly(poly));
  });
}

}  // namespace twistforge
