#include <gtest/gtest.h>

#include <random>

#include "common.hpp"
#include "twistforge/text.hpp"

using namespace twistforge;
using namespace tftest;

namespace {

Cocycle base_cocycle(std::size_t row) { return solution_to_cocycle(gamma21(), family(row).solutions[0]); }

const TwistOutput& base_twist(std::size_t row) {
  static std::map<std::size_t, TwistOutput> cache;
  auto it = cache.find(row);
  if (it == cache.end()) it = cache.emplace(row, compute_twist(gamma21(), base_cocycle(row), fixture().ideal)).first;
  return it->second;
}

// Diagonal μ with entries m^(a_i/3) n^(b_i/7).
Matrix<RadNum> expected_mu(const RadSpecPtr& spec, const std::vector<int>& a, const std::vector<int>& b) {
  Matrix<RadNum> mu(6, 6, RadNum::from_rational(spec, 0));
  for (int i = 0; i < 6; ++i) {
    RadNum x = RadNum::from_rational(spec, 1);
    int slot = 0;
    if (!a.empty()) x = x * RadNum::radical(spec, slot++, a[i]);
    if (!b.empty()) x = x * RadNum::radical(spec, slot, b[i]);
    mu(i, i) = x;
  }
  return mu;
}

TwistedModule::CycVec unit_vector(int slot, const CycNum& c) {
  TwistedModule::CycVec v(6, CycNum::rational(0, 21));
  v[slot] = c;
  return v;
}

const std::vector<int> kA = {2, 2, 2, 1, 2, 1};
const std::vector<int> kB = {6, 5, 4, 6, 3, 5};

}  // namespace

TEST(DifferentialRep, PullbackLaw) {
  const auto rep = DifferentialRep::from(gamma21().aut());
  EXPECT_TRUE(rep.check_law(gamma21().aut()));
  EXPECT_EQ(rep.pullback[0], CycMatrix::identity(6, CycNum::rational(0, 21), CycNum::rational(1, 21)));
}

TEST(TwistedAction, CaseTwoTable) {
  TwistedModule m(gamma21(), base_cocycle(1));
  const int sigma = m.tower().delta(0);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      // x^a ζ3^b ω4 ↦ x^a ζ3^(a+b+2) ω4, and slot 1 gets a+b+1
      EXPECT_EQ(m.apply(sigma, a, unit_vector(3, CycNum::zeta(21, 7 * b)))[3], CycNum::zeta(21, 7 * (a + b + 2)));
      EXPECT_EQ(m.apply(sigma, a, unit_vector(0, CycNum::zeta(21, 7 * b)))[0], CycNum::zeta(21, 7 * (a + b + 1)));
    }
  }
}

TEST(TwistedAction, CaseThreeTable) {
  TwistedModule m(gamma21(), base_cocycle(2));
  const int sigma = m.tower().delta(0);
  for (int a = 0; a < 7; ++a) {
    for (int b = 0; b < 7; ++b) {
      EXPECT_EQ(m.apply(sigma, a, unit_vector(4, CycNum::zeta(21, 3 * b)))[4], CycNum::zeta(21, 3 * (a + b + 4)));
    }
  }
}

TEST(TwistedAction, IdentityAndDimension) {
  TwistedModule triv(gamma21(), base_cocycle(0));
  const auto id = triv.action_block(0, 0);
  EXPECT_EQ(id, Matrix<Rational>::identity(72, Rational(0), Rational(1)));
  TwistedModule m4(gamma21(), base_cocycle(3));
  EXPECT_EQ(m4.dimension(), 1512u);
  EXPECT_EQ(m4.blocks(), 21);
}

TEST(TwistedAction, HomomorphismOnGeneratorsAndRandomWords) {
  TwistedModule m(gamma21(), base_cocycle(3));
  const GaloisTower& t = m.tower();
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> elem(0, static_cast<int>(t.size()) - 1);
  std::uniform_int_distribution<long> block(0, m.blocks() - 1);
  std::uniform_int_distribution<int> coef(-4, 4);
  auto random_vec = [&] {
    QVector v(m.block_dim());
    for (auto& x : v) x = coef(rng);
    return v;
  };
  std::vector<std::pair<int, int>> pairs;
  for (int x : t.generators()) {
    for (int y : t.generators()) pairs.emplace_back(x, y);
  }
  for (int k = 0; k < 50; ++k) {
    // random words of length 3 in the generators, paired
    auto word = [&] {
      int w = 0;
      for (int i = 0; i < 3; ++i) w = t.mul(w, t.generators()[rng() % t.generators().size()]);
      return w;
    };
    pairs.emplace_back(word(), word());
    pairs.emplace_back(elem(rng), elem(rng));
  }
  for (auto [x, y] : pairs) {
    const long b = block(rng);
    const QVector v = random_vec();
    EXPECT_EQ(m.apply_q(t.mul(x, y), b, v), m.apply_q(x, b, m.apply_q(y, b, v)));
  }
}

TEST(FixedSpace, ProjectorIsIdempotent) {
  TwistedModule m(gamma21(), base_cocycle(1));
  const auto [complement, normal] = tower_factors(m.tower());
  for (long b : {0L, 2L}) {
    Matrix<Rational> pc(72, 72, Rational(0)), pn(72, 72, Rational(0));
    for (int s : complement) pc = pc + m.action_block(s, b);
    for (int s : normal) pn = pn + m.action_block(s, b);
    Matrix<Rational> p = (pn * pc).map([&](const Rational& x) { return Rational(x / Rational(36)); });
    EXPECT_EQ(p * p, p);
    // full average over Gal(L/k) equals the factored projector
    Matrix<Rational> full(72, 72, Rational(0));
    for (int s = 0; s < static_cast<int>(m.tower().size()); ++s) full = full + m.action_block(s, b);
    EXPECT_EQ(full.map([&](const Rational& x) { return Rational(x / Rational(36)); }), p);
  }
}

TEST(FixedSpace, KernelMatchesProjectorAndDimension) {
  for (std::size_t row = 0; row < 3; ++row) {
    TwistedModule m(gamma21(), base_cocycle(row));
    const auto k = fixed_subspace_kernel(m);
    EXPECT_TRUE(same_fixed_space(k, fixed_subspace_reynolds(m)));
    EXPECT_EQ(total_dimension(k), 6u);
  }
  TwistedModule triv(gamma21(), base_cocycle(0));
  const auto k = fixed_subspace_kernel(triv);
  ASSERT_EQ(k.size(), 1u);
  for (std::size_t i = 0; i < 6; ++i) {
    QVector e(72, Rational(0));
    e[i * 12] = 1;
    EXPECT_EQ(k[0].basis[i], e);
  }
}

TEST(FixedSpace, ExpectedBases) {
  const auto& t2 = base_twist(1);
  EXPECT_EQ(t2.basis.mu, expected_mu(t2.basis.spec, kA, {}));
  const auto& t3 = base_twist(2);
  EXPECT_EQ(t3.basis.mu, expected_mu(t3.basis.spec, {}, kB));
  const auto& t4 = base_twist(3);
  EXPECT_EQ(t4.basis.mu, expected_mu(t4.basis.spec, kA, kB));
  const auto& t1 = base_twist(0);
  const RadSpecPtr s1 = t1.basis.spec;
  EXPECT_EQ(t1.basis.eta, Matrix<RadNum>::identity(6, RadNum::from_rational(s1, 0), RadNum::from_rational(s1, 1)));
}

TEST(Equations, ExpectedCubics) {
  struct Case {
    std::size_t row;
    const char* f7;
    const char* f8;
  };
  const Case cases[] = {{1, "m*w4^3 - w3^2*w5 + w1^3", "w5^3 - m*w4*w6^2 - w1*w2^2"},
                        {2, "w4^3 - n*w3^2*w5 + w1^3", "n*w5^3 - w4*w6^2 - w1*w2^2"},
                        {3, "m*w4^3 - n*w3^2*w5 + w1^3", "n*w5^3 - m*w4*w6^2 - w1*w2^2"}};
  for (const auto& c : cases) {
    const auto& out = base_twist(c.row);
    const auto& spec = out.basis.spec;
    EXPECT_EQ(out.equations[6], parse_radical_form(c.f7, spec, 6)) << c.row;
    EXPECT_EQ(out.equations[7], parse_radical_form(c.f8, spec, 6)) << c.row;
    for (int h = 0; h < 6; ++h) EXPECT_EQ(out.equations[h], to_radical(spec, fixture().ideal.generators[h])) << h;
  }
}

TEST(Equations, ParametersOneGiveOriginal) {
  for (std::size_t row = 0; row < 4; ++row) {
    const auto& out = base_twist(row);
    const std::vector<Integer> ones(out.basis.spec->nslots(), Integer(1));
    for (std::size_t h = 0; h < out.equations.size(); ++h) {
      EXPECT_EQ(evaluate_parameters(out.equations[h], ones), fixture().ideal.generators[h]) << row << " " << h;
    }
  }
  // a non-base record: m -> m^2
  const auto fam = family(1);
  const auto out = compute_twist(gamma21(), solution_to_cocycle(gamma21(), fam.solutions[1]), fixture().ideal);
  EXPECT_EQ(evaluate_parameters(out.equations[6], {Integer(1)}), fixture().ideal.generators[6]);
  for (const auto& c : verify_twist(gamma21(), out, fixture().ideal)) EXPECT_TRUE(c.ok) << c.name;
}

TEST(Verify, AllChecksPassAndCorruptionDetected) {
  const auto& out = base_twist(3);
  for (const auto& c : verify_twist(gamma21(), out, fixture().ideal)) EXPECT_TRUE(c.ok) << c.name << " " << c.detail;
  // η·σ(η⁻¹) for the (r,1) generator is the inverse of r
  const auto& t = *out.cocycle.tower;
  const RadSpecPtr spec = out.basis.spec;
  const auto r_inv = to_radical(spec, matrix_inverse(gamma21().aut().matrix(aut_generator("r")), CycNum::rational(1, 21)));
  EXPECT_EQ(eta_coboundary(out.basis, t, t.delta(0)), r_inv);
  TwistOutput bad = out;
  bad.basis.eta(2, 2) = bad.basis.eta(2, 2) * RadNum::from_rational(spec, 2);
  bool c_failed = false;
  for (const auto& c : verify_twist(gamma21(), bad, fixture().ideal)) {
    if (c.name.find("sigma(eta^-1)") != std::string::npos) c_failed = !c.ok;
  }
  EXPECT_TRUE(c_failed);
}

TEST(Verify, TrivialTwist) {
  const auto& out = base_twist(0);
  for (const auto& c : verify_twist(gamma21(), out, fixture().ideal)) EXPECT_TRUE(c.ok) << c.name;
  for (std::size_t h = 0; h < 8; ++h) EXPECT_EQ(out.equations[h], to_radical(out.basis.spec, fixture().ideal.generators[h]));
}

TEST(QuadraticTwist, FermatQuartic) {
  const CurveSpec spec = parse_curve_spec(R"(
[CURVE]
genus 3
conductor 2
param 2 d
[GALOIS]
index 1
[AUTGENS]
a: diag -1, 1, 1
[IDEAL]
F: w1^4 + w2^4 + w3^4
)");
  const GammaGroup g = build_gamma(spec);
  Budget b;
  const auto pairs = enumerate_pairs(g, b);
  ASSERT_EQ(pairs.size(), 2u);
  const auto fam = solve_kummer(pose_problem(g, pairs[1]), [&](int q) { return spec.param_name(q); }, b);
  const auto out = compute_twist(g, solution_to_cocycle(g, fam.solutions[0]), spec.ideal);
  // d^2 w1^4 + w2^4 + w3^4 after w2, w3 -> d w2, d w3
  EXPECT_EQ(out.equations[0], parse_radical_form("w1^4 + d^2*w2^4 + d^2*w3^4", out.basis.spec, 3))
      << to_string(out.equations[0], default_variable_names(3));
  for (const auto& c : verify_twist(g, out, spec.ideal)) EXPECT_TRUE(c.ok) << c.name;
}

TEST(FiniteFieldTwist, CocycleIdentityAndDescent) {
  const auto& aut = gamma21().aut();
  for (long bu : {2L, 1L}) {
    const GammaGroup gb = frobenius_gamma(aut, bu);
    const auto classes = solve_finite_field(gb, bu);
    for (std::size_t i = 0; i < classes.size() && i < 3; ++i) {
      const auto t = finite_field_twist(gb, classes[i], fixture().ideal);
      EXPECT_EQ(multiplicative_order(t.lift_unit, t.lift_conductor), classes[i].order);
      EXPECT_EQ(mod_floor(t.lift_unit, 21), bu);
      for (const auto& c : verify_finite_field_twist(gb, t)) EXPECT_TRUE(c.ok) << c.name << " b=" << bu << " i=" << i;
    }
  }
}

TEST(TrivialAut, SingleTwistIsTheCurve) {
  const CurveSpec spec = load_curve_spec(std::string(TWISTFORGE_FIXTURE_DIR) + "/quartic_trivial.tfs");
  const GammaGroup g = build_gamma(spec);
  Budget b;
  const auto pairs = enumerate_pairs(g, b);
  ASSERT_EQ(pairs.size(), 1u);
  const auto fam = solve_kummer(pose_problem(g, pairs[0]), [&](int q) { return spec.param_name(q); }, b);
  ASSERT_EQ(fam.solutions.size(), 1u);
  const auto out = compute_twist(g, solution_to_cocycle(g, fam.solutions[0]), spec.ideal);
  EXPECT_EQ(out.equations[0], to_radical(out.basis.spec, spec.ideal.generators[0]));
}
