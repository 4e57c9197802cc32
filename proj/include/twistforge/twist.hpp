#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "embedding.hpp"
#include "hompoly.hpp"

namespace twistforge {

/// Pullback of each automorphism on the differential row ω: ξ*_α = Aᵀ, so F ∘ ξ*_α is F(Aᵀω).
struct DifferentialRep {
  int genus = 0;
  std::vector<CycMatrix> pullback;

  static DifferentialRep from(const AutGroup& aut) {
    DifferentialRep r;
    r.genus = aut.dim();
    for (std::size_t i = 0; i < aut.size(); ++i) r.pullback.push_back(aut.matrix(i).transpose());
    return r;
  }

  /// ξ*_{αβ} = ξ*_β ξ*_α on the whole multiplication table.
  bool check_law(const AutGroup& aut) const {
    for (std::size_t a = 0; a < aut.size(); ++a) {
      for (std::size_t b = 0; b < aut.size(); ++b) {
        if (!(pullback[aut.mul(static_cast<int>(a), static_cast<int>(b))] == pullback[b] * pullback[a])) return false;
      }
    }
    return true;
  }
};

/// Ω¹_L as a Q-space, split into blocks by radical exponent a; block basis x^a ζ^j ω_i, i major.
/// σ acts by λ ↦ (ξ*_σ)ᵀ σ(λ) on coefficient columns.
class TwistedModule {
 public:
  TwistedModule(const GammaGroup& gamma, Cocycle xi) : gamma_(&gamma), xi_(std::move(xi)) {
    genus_ = gamma.aut().dim();
    n_ = xi_.tower->spec()->conductor();
    phi_ = euler_phi(n_);
    zero_ = CycNum::rational(0, n_);
  }

  const Cocycle& cocycle() const noexcept { return xi_; }
  const GaloisTower& tower() const noexcept { return *xi_.tower; }
  int genus() const noexcept { return genus_; }
  long blocks() const { return tower().radical_degree(); }
  std::size_t block_dim() const { return static_cast<std::size_t>(genus_ * phi_); }
  std::size_t dimension() const { return block_dim() * static_cast<std::size_t>(blocks()); }

  using CycVec = std::vector<CycNum>;

  CycVec apply(int sigma, long block, const CycVec& v) const {
    const GaloisTower& t = tower();
    const auto& spec = *t.spec();
    const Exponents a = spec.unflatten(block);
    const Exponents e = t.shifts(sigma);
    long s = 0;
    for (int k = 0; k < spec.nslots(); ++k) s += (n_ / spec.slots()[k].q) * e[k] * a[k];
    const GaloisUnit u(n_, t.unit(sigma));
    CycVec moved(genus_);
    for (int i = 0; i < genus_; ++i) moved[i] = v[i].is_zero() ? zero_ : galois_apply(u, v[i]).mul_zeta(s);
    const CycMatrix& A = gamma_->aut().matrix(xi_.values[sigma]);
    CycVec out(genus_, zero_);
    for (int k = 0; k < genus_; ++k) {
      for (int i = 0; i < genus_; ++i) {
        if (!A(k, i).is_zero() && !moved[i].is_zero()) out[k] += A(k, i) * moved[i];
      }
    }
    return out;
  }

  QVector to_q(const CycVec& v) const {
    QVector out;
    out.reserve(block_dim());
    for (const auto& c : v) {
      const CycNum l = c.lift(n_);
      out.insert(out.end(), l.coords().begin(), l.coords().end());
    }
    return out;
  }

  CycVec from_q(const QVector& q) const {
    CycVec out;
    for (int i = 0; i < genus_; ++i) {
      std::vector<Rational> c(q.begin() + i * phi_, q.begin() + (i + 1) * phi_);
      out.push_back(CycNum::make(n_, c));
    }
    return out;
  }

  QVector apply_q(int sigma, long block, const QVector& v) const { return to_q(apply(sigma, block, from_q(v))); }

  /// Matrix of ρ(σ) on one block, columns indexed like the block basis.
  Matrix<Rational> action_block(int sigma, long block) const {
    const std::size_t d = block_dim();
    Matrix<Rational> m(d, d, Rational(0));
    for (std::size_t c = 0; c < d; ++c) {
      QVector e(d, Rational(0));
      e[c] = 1;
      const QVector col = apply_q(sigma, block, e);
      for (std::size_t r = 0; r < d; ++r) m(r, c) = col[r];
    }
    return m;
  }

 private:
  const GammaGroup* gamma_;
  Cocycle xi_;
  int genus_ = 0;
  long n_ = 1;
  long phi_ = 1;
  CycNum zero_;
};

/// Fixed vectors of one block, as canonical reduced row echelon rows.
struct BlockFixed {
  long block = 0;
  std::vector<QVector> basis;
};

/// ∩ Ker(ρ(σ) − Id) over the generators of Gal(L/k), block by block.
inline std::vector<BlockFixed> fixed_subspace_kernel(const TwistedModule& m) {
  const auto gens = m.tower().generators();
  const std::size_t d = m.block_dim();
  std::vector<BlockFixed> out;
  for (long b = 0; b < m.blocks(); ++b) {
    std::vector<QVector> rows;
    for (int s : gens) {
      const Matrix<Rational> a = m.action_block(s, b);
      for (std::size_t r = 0; r < d; ++r) {
        QVector row = a.row(r);
        row[r] -= 1;
        rows.push_back(std::move(row));
      }
    }
    BlockFixed f{b, {}};
    if (rows.empty()) {
      for (std::size_t c = 0; c < d; ++c) {
        QVector e(d, Rational(0));
        e[c] = 1;
        f.basis.push_back(std::move(e));
      }
    } else {
      f.basis = canonical_basis(nullspace_bareiss(rows, d), d);
    }
    if (!f.basis.empty()) out.push_back(std::move(f));
  }
  return out;
}

/// Elements (b, 0) and (1, e) of Gal(L/k); every element factors uniquely as (1, e)(b, 0).
inline std::pair<std::vector<int>, std::vector<int>> tower_factors(const GaloisTower& t) {
  std::vector<int> complement, normal;
  const Exponents zero(t.spec()->nslots(), 0);
  for (std::size_t i = 0; i < t.gal().size(); ++i) complement.push_back(t.index(static_cast<int>(i), zero));
  for (long r = 0; r < t.radical_degree(); ++r) normal.push_back(t.index(0, t.spec()->unflatten(r)));
  return {complement, normal};
}

/// Image of the averaging projector P = P_N P_C, computed as P_N applied to the image of P_C.
inline std::vector<BlockFixed> fixed_subspace_reynolds(const TwistedModule& m) {
  const auto [complement, normal] = tower_factors(m.tower());
  const std::size_t d = m.block_dim();
  const Rational inv_c(1, static_cast<long>(complement.size()));
  const Rational inv_n(1, static_cast<long>(normal.size()));
  std::vector<BlockFixed> out;
  for (long b = 0; b < m.blocks(); ++b) {
    std::vector<QVector> pc;
    for (std::size_t c = 0; c < d; ++c) {
      QVector e(d, Rational(0));
      e[c] = 1;
      QVector acc(d, Rational(0));
      for (int s : complement) {
        const QVector y = m.apply_q(s, b, e);
        for (std::size_t r = 0; r < d; ++r) acc[r] += y[r];
      }
      for (auto& x : acc) x *= inv_c;
      pc.push_back(std::move(acc));
    }
    pc = canonical_basis(pc, d);
    std::vector<QVector> image;
    for (const auto& v : pc) {
      QVector acc(d, Rational(0));
      for (int s : normal) {
        const QVector y = m.apply_q(s, b, v);
        for (std::size_t r = 0; r < d; ++r) acc[r] += y[r];
      }
      for (auto& x : acc) x *= inv_n;
      image.push_back(std::move(acc));
    }
    BlockFixed f{b, canonical_basis(image, d)};
    if (!f.basis.empty()) out.push_back(std::move(f));
  }
  return out;
}

inline bool same_fixed_space(const std::vector<BlockFixed>& a, const std::vector<BlockFixed>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].block != b[i].block || a[i].basis != b[i].basis) return false;
  }
  return true;
}

inline std::size_t total_dimension(const std::vector<BlockFixed>& f) {
  std::size_t n = 0;
  for (const auto& b : f) n += b.basis.size();
  return n;
}

/// μ (rows are fixed vectors over ω) and η = μ⁻¹, so that ω = η ω'.
struct TwistBasis {
  RadSpecPtr spec;
  Matrix<RadNum> mu;
  Matrix<RadNum> eta;
  std::size_t fixed_dimension = 0;  // over Q
};

/// Assembles g fixed vectors into μ: ordered by first differential slot, then radical exponent.
inline TwistBasis derive_eta(const std::vector<BlockFixed>& fixed, const TwistedModule& m) {
  const RadSpecPtr spec = m.tower().spec();
  const int g = m.genus();
  const long n = spec->conductor();
  const RadNum zero = RadNum::from_rational(spec, 0);
  const RadNum one = RadNum::from_rational(spec, 1);
  struct Row {
    int slot;
    long block;
    std::vector<RadNum> entries;
  };
  std::vector<Row> rows;
  for (const auto& bf : fixed) {
    const Exponents a = spec->unflatten(bf.block);
    for (const auto& v : bf.basis) {
      const auto cyc = m.from_q(v);
      Row r{-1, bf.block, {}};
      for (int i = 0; i < g; ++i) {
        if (cyc[i].is_zero()) {
          r.entries.push_back(zero);
          continue;
        }
        if (r.slot < 0) r.slot = i;
        r.entries.push_back(RadNum::monomial(spec, a, RatFunc::constant(cyc[i], n, spec->nslots())));
      }
      rows.push_back(std::move(r));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    return x.slot != y.slot ? x.slot < y.slot : x.block < y.block;
  });
  // pick g rows independent over L (more than g only when k is larger than Q)
  std::vector<std::vector<RadNum>> chosen;
  for (const auto& r : rows) {
    if (static_cast<int>(chosen.size()) == g) break;
    Matrix<RadNum> trial(chosen.size() + 1, g, zero);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      for (int j = 0; j < g; ++j) trial(i, j) = chosen[i][j];
    }
    for (int j = 0; j < g; ++j) trial(chosen.size(), j) = r.entries[j];
    if (rank(trial) == chosen.size() + 1) chosen.push_back(r.entries);
  }
  if (static_cast<int>(chosen.size()) != g) {
    throw VerificationError("fixed subspace does not span Omega^1 over L (dimension " + std::to_string(chosen.size()) +
                            ", expected " + std::to_string(g) + ")");
  }
  TwistBasis tb;
  tb.spec = spec;
  tb.fixed_dimension = total_dimension(fixed);
  tb.mu = Matrix<RadNum>(g, g, zero);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) tb.mu(i, j) = chosen[i][j];
  }
  auto inv = try_inverse(tb.mu, one);
  if (!inv) throw VerificationError("matrix of fixed vectors is singular");
  tb.eta = *inv;
  return tb;
}

inline Matrix<RadNum> galois_apply(const ExtendedGaloisElement& s, const Matrix<RadNum>& m) {
  return m.map([&](const RadNum& x) { return x.galois(s); });
}

/// η·σ(η⁻¹) for a tower element σ.
inline Matrix<RadNum> eta_coboundary(const TwistBasis& tb, const GaloisTower& t, int sigma) {
  return tb.eta * galois_apply(t.element(sigma), tb.mu);
}

/// (ξ*_σ)⁻¹ = A_σ^{-T} as a radical matrix.
inline Matrix<RadNum> pullback_inverse(const GammaGroup& gamma, const RadSpecPtr& spec, int aut_id) {
  const CycNum one = CycNum::rational(1, gamma.aut().conductor());
  return to_radical(spec, matrix_inverse(gamma.aut().matrix(aut_id).transpose(), one));
}

/// F'_h = normalize(F_h(η ω')), oriented so that setting every parameter to 1 gives F_h back when possible.
inline std::vector<RadPoly> twist_equations(const CanonicalIdeal& ideal, const TwistBasis& tb) {
  std::vector<RadPoly> out;
  const std::vector<Integer> ones(tb.spec->nslots(), Integer(1));
  for (const auto& f : ideal.generators) {
    RadPoly p = normalize_generator(substitute(to_radical(tb.spec, f), tb.eta));
    const CycPoly at_one = evaluate_parameters(p, ones);
    if (at_one == -f.map_coefficients([&](const CycNum& c) { return c.lift(tb.spec->conductor()); })) p = -p;
    out.push_back(std::move(p));
  }
  return out;
}

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct TwistOutput {
  std::string tag;
  Cocycle cocycle;
  TwistBasis basis;
  std::vector<RadPoly> equations;
  bool spans_agree = false;
};

inline TwistOutput compute_twist(const GammaGroup& gamma, const Cocycle& xi, const CanonicalIdeal& ideal,
                                 const std::string& tag = "") {
  TwistedModule m(gamma, xi);
  const auto kernel = fixed_subspace_kernel(m);
  const auto reynolds = fixed_subspace_reynolds(m);
  TwistOutput out;
  out.tag = tag;
  out.cocycle = xi;
  out.spans_agree = same_fixed_space(kernel, reynolds);
  out.basis = derive_eta(kernel, m);
  out.equations = twist_equations(ideal, out.basis);
  return out;
}

/// Re-checks a twist: equations, invertibility of η, the coboundary identity and the fixed dimension.
inline std::vector<CheckResult> verify_twist(const GammaGroup& gamma, const TwistOutput& out, const CanonicalIdeal& ideal) {
  std::vector<CheckResult> res;
  const TwistBasis& tb = out.basis;
  const auto& spec = tb.spec;
  const int g = static_cast<int>(tb.eta.rows());

  CheckResult a{"equations are radical-monomial multiples of F_h(eta w')", true, ""};
  for (std::size_t h = 0; h < ideal.generators.size() && a.ok; ++h) {
    const RadPoly s = substitute(to_radical(spec, ideal.generators[h]), tb.eta);
    const RadPoly& f = out.equations.at(h);
    const RadNum* c = s.coefficient(f.leading_exponents());
    if (!c || c->is_zero()) {
      a.ok = false;
    } else {
      const RadNum scale = *c * f.leading_coefficient().inv();
      a.ok = scale.is_monomial() && s == f.scaled(scale);
    }
    if (!a.ok) a.detail = "generator " + ideal.names.at(h);
  }
  res.push_back(a);

  const RadNum one = RadNum::from_rational(spec, 1);
  const auto id = Matrix<RadNum>::identity(g, RadNum::from_rational(spec, 0), one);
  res.push_back({"eta is invertible", tb.eta * tb.mu == id && tb.mu * tb.eta == id, ""});

  CheckResult c{"eta * sigma(eta^-1) equals the inverse pullback", true, ""};
  const GaloisTower& t = *out.cocycle.tower;
  for (int s : t.generators()) {
    if (!(eta_coboundary(tb, t, s) == pullback_inverse(gamma, spec, out.cocycle.values[s]))) {
      c.ok = false;
      c.detail = "fails at " + t.describe(s);
      break;
    }
  }
  res.push_back(c);

  // [k:Q] copies of a k-basis of dimension g
  const std::size_t kdeg = static_cast<std::size_t>(euler_phi(spec->conductor())) / t.gal().size();
  res.push_back({"fixed subspace has dimension g", tb.fixed_dimension == static_cast<std::size_t>(g) * kdeg,
                 std::to_string(tb.fixed_dimension / kdeg)});
  res.push_back({"kernel and projector spans agree", out.spans_agree, ""});
  return res;
}

/// Twist over a finite field, modelled in characteristic zero: Q(ζ_M) ⊃ Q(ζ_N) with a unit B ≡ b mod N
/// of order ord(γ), so that <B> plays the Frobenius of the splitting extension.
struct FiniteFieldTwist {
  FiniteFieldClass cls;
  long lift_conductor = 1;
  long lift_unit = 1;
  RadSpecPtr spec;
  Matrix<RadNum> mu;
  Matrix<RadNum> eta;
  std::vector<RadPoly> equations;
};

inline std::pair<long, long> frobenius_lift(long n, long b, int order) {
  for (long j = 1; j <= 64L * order; ++j) {
    const long m = n * j;
    for (long t = 0; t < j; ++t) {
      const long big = mod_floor(b + n * t, m);
      if (m > 1 && std::gcd(big, m) != 1) continue;
      if ((m == 1 ? 1 : multiplicative_order(big, m)) == order) return {m, m == 1 ? 1 : big};
    }
  }
  throw BudgetExceeded("no cyclotomic lift of order " + std::to_string(order) + " found");
}

inline FiniteFieldTwist finite_field_twist(const GammaGroup& gamma, const FiniteFieldClass& cls,
                                           const CanonicalIdeal& ideal) {
  FiniteFieldTwist out;
  out.cls = cls;
  const long n = gamma.aut().conductor();
  const auto [m, big] = frobenius_lift(n, cls.frobenius, cls.order);
  out.lift_conductor = m;
  out.lift_unit = big;
  out.spec = std::make_shared<const RadFieldSpec>(m, std::vector<RadicalSlot>{});
  const int g = gamma.aut().dim();
  const long phim = euler_phi(m);
  const CycNum zero = CycNum::rational(0, m);
  // trace Σ_i ρ(γ^i) v with ρ(γ^i) λ = A_{π1(γ^i)} B^i(λ)
  auto trace = [&](int slot, long j) {
    std::vector<CycNum> acc(g, zero);
    long power = 1;
    for (int i = 0; i < cls.order; ++i) {
      const CycNum moved = CycNum::zeta(m, power * j);
      const CycMatrix& A = gamma.aut().matrix(cls.values[i]);
      for (int k = 0; k < g; ++k) {
        if (!A(k, slot).is_zero()) acc[k] += A(k, slot) * moved;
      }
      power = mod_floor(power * big, m);
    }
    return acc;
  };
  std::vector<std::vector<CycNum>> chosen;
  // first pass takes one vector per slot, which suffices for monomial actions
  for (const bool one_per_slot : {true, false}) {
    for (int i = 0; i < g && static_cast<int>(chosen.size()) < g; ++i) {
      for (long j = 0; j < phim && static_cast<int>(chosen.size()) < g; ++j) {
        auto v = trace(i, j);
        for (auto& x : v) x = x.lift(m);
        Matrix<CycNum> trial(chosen.size() + 1, g, zero);
        for (std::size_t r = 0; r < chosen.size(); ++r) {
          for (int c = 0; c < g; ++c) trial(r, c) = chosen[r][c];
        }
        for (int c = 0; c < g; ++c) trial(chosen.size(), c) = v[c];
        if (rank(trial) == chosen.size() + 1) {
          chosen.push_back(std::move(v));
          if (one_per_slot) break;
        }
      }
    }
    if (static_cast<int>(chosen.size()) == g) break;
  }
  if (static_cast<int>(chosen.size()) != g) throw VerificationError("trace vectors do not span Omega^1");
  Matrix<CycNum> mu(g, g, zero);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) mu(i, j) = chosen[i][j];
  }
  out.mu = to_radical(out.spec, mu);
  out.eta = to_radical(out.spec, matrix_inverse(mu, CycNum::rational(1, m)));
  TwistBasis tb;
  tb.spec = out.spec;
  tb.mu = out.mu;
  tb.eta = out.eta;
  out.equations = twist_equations(ideal, tb);
  return out;
}

/// Checks η·B(η⁻¹) = (ξ*_γ)⁻¹ and that the equations are fixed by B.
inline std::vector<CheckResult> verify_finite_field_twist(const GammaGroup& gamma, const FiniteFieldTwist& t) {
  std::vector<CheckResult> res;
  ExtendedGaloisElement frob;
  frob.unit = GaloisUnit(t.lift_conductor, t.lift_unit);
  const auto lhs = t.eta * galois_apply(frob, t.mu);
  res.push_back({"eta * frob(eta^-1) equals the inverse pullback", lhs == pullback_inverse(gamma, t.spec, t.cls.alpha), ""});
  bool fixed = true;
  for (const auto& f : t.equations) {
    fixed = fixed && f.map_coefficients([&](const RadNum& c) { return c.galois(frob); }) == f;
  }
  res.push_back({"equations are defined over the fixed field", fixed, ""});
  return res;
}

}  // namespace twistforge
