#include <gtest/gtest.h>

#include <random>

#include "twistforge/radical.hpp"

using namespace twistforge;

namespace {

CycNum z(long n, long e) { return CycNum::zeta(n, e); }
CycNum q(long num, long n = 1) { return CycNum::rational(num, n); }

}  // namespace

TEST(CycNum, CubeRootRelation) {
  const CycNum w = CycNum::make(3, {0, 1});
  EXPECT_TRUE((w * w + w + q(1, 3)).is_zero());
}

TEST(CycNum, ExponentArithmetic) {
  EXPECT_EQ(z(7, 3) * z(7, 5), z(7, 1));
}

TEST(CycNum, LiftToCompositum) {
  // zeta_21^7 is a primitive cube root of unity
  EXPECT_EQ(z(21, 7), CycNum::make(3, {0, 1}));
  const CycNum w = z(21, 7);
  EXPECT_TRUE((w * w + w + q(1, 21)).is_zero());
}

TEST(CycNum, Arithmetic) {
  EXPECT_EQ(z(7, 1).inv(), z(7, 6));
  EXPECT_EQ((q(1, 3) + z(3, 1)) * (q(1, 3) + z(3, 2)), q(1, 3));
  CycNum s = q(1, 7);
  for (int k = 1; k < 7; ++k) s += z(7, k);
  EXPECT_TRUE(s.is_zero());
  EXPECT_THROW(q(0, 5).inv(), DivisionByZero);
}

TEST(GaloisUnit, Examples) {
  EXPECT_EQ(galois_apply(GaloisUnit(3, 2), z(3, 1)), -q(1, 3) - z(3, 1));
  EXPECT_EQ(galois_apply(GaloisUnit(7, 3), z(7, 1)), z(7, 3));
  EXPECT_THROW(GaloisUnit(21, 7), DomainError);
}

namespace {

RadSpecPtr mn_spec() {
  static const RadSpecPtr s = std::make_shared<const RadFieldSpec>(21, std::vector<RadicalSlot>{{"m", 3}, {"n", 7}});
  return s;
}

RadNum rq(long v) { return RadNum::from_rational(mn_spec(), v); }

ExtendedGaloisElement eg(long b, int e1, int e2) { return {GaloisUnit(21, b), {e1, e2}}; }

}  // namespace

TEST(RatFunc, CancelsCommonFactors) {
  const MPoly m = MPoly::variable(21, 2, 0);
  const MPoly one = MPoly::constant(q(1, 21), 21, 2);
  const RatFunc f(m * m - one, m - one);
  EXPECT_EQ(f, RatFunc::from_poly(m + one));
  EXPECT_TRUE(f.is_polynomial());
  EXPECT_THROW(RatFunc(21, 2).inv(), DivisionByZero);
}

TEST(RadNum, CarryAndInverse) {
  const auto s = mn_spec();
  const RadNum x = RadNum::radical(s, 0);
  const RadNum m = RadNum::parameter(s, 0);
  EXPECT_EQ(x * RadNum::radical(s, 0, 2), m);
  EXPECT_EQ(x.inv(), RadNum::radical(s, 0, 2) * m.inv());
  const RadNum one = rq(1);
  EXPECT_EQ((one + x).inv(), (one - x + x * x) * (one + m).inv());
  const RadNum y3 = RadNum::radical(s, 1, 3);
  EXPECT_EQ((x * y3).inv() * x * y3, one);
  const auto s1 = std::make_shared<const RadFieldSpec>(3, std::vector<RadicalSlot>{{"m", 3}});
  const RadNum x1 = RadNum::radical(s1, 0);
  const RadNum u = x1 * x1 + RadNum::from_cyc(s1, z(3, 1)) * x1 + RadNum::from_rational(s1, 2);
  EXPECT_EQ(u * u.inv(), RadNum::from_rational(s1, 1));
  EXPECT_THROW(rq(0).inv(), DivisionByZero);
}

TEST(RadNum, GaloisAction) {
  const auto s = mn_spec();
  const RadNum x = RadNum::radical(s, 0);
  const RadNum y = RadNum::radical(s, 1);
  EXPECT_EQ(x.galois(eg(1, 1, 0)), x * RadNum::from_cyc(s, z(21, 7)));
  EXPECT_EQ(y.galois(eg(1, 0, 1)), y * RadNum::from_cyc(s, z(21, 3)));
  EXPECT_EQ(RadNum::from_cyc(s, z(21, 1)).galois(eg(2, 0, 0)), RadNum::from_cyc(s, z(21, 2)));
  EXPECT_EQ(RadNum::parameter(s, 1).galois(eg(5, 2, 3)), RadNum::parameter(s, 1));
  EXPECT_THROW(x.galois(eg(1, 3, 0)), DomainError);
}

TEST(RadNum, GaloisCompositionAndHomomorphism) {
  const auto s = mn_spec();
  const RadNum x = RadNum::radical(s, 0);
  const RadNum y = RadNum::radical(s, 1);
  const RadNum v = x * RadNum::from_cyc(s, z(21, 5)) + y * y + rq(3);
  const RadNum w = x * y + RadNum::from_cyc(s, z(21, 1));
  std::mt19937 rng(5);
  const long units[] = {1, 2, 4, 5, 8, 10, 11, 13, 16, 17, 19, 20};
  for (int k = 0; k < 30; ++k) {
    const auto g = eg(units[rng() % 12], static_cast<int>(rng() % 3), static_cast<int>(rng() % 7));
    const auto h = eg(units[rng() % 12], static_cast<int>(rng() % 3), static_cast<int>(rng() % 7));
    EXPECT_EQ(v.galois(h).galois(g), v.galois(compose(*s, g, h)));
    EXPECT_EQ((v * w).galois(g), v.galois(g) * w.galois(g));
    EXPECT_EQ((v + w).galois(g), v.galois(g) + w.galois(g));
  }
}
