#include <gtest/gtest.h>

#include <numeric>

#include "common.hpp"

using namespace twistforge;
using namespace tftest;

namespace {

// Orbits of α ↦ φ α b(φ)^{-1} on the matrices themselves, merged with a union-find.
std::size_t orbit_oracle(const AutGroup& aut, long b) {
  const std::size_t n = aut.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  const GaloisUnit u(aut.conductor(), b);
  const CycNum one = CycNum::rational(1, aut.conductor());
  for (std::size_t phi = 0; phi < n; ++phi) {
    const CycMatrix p = aut.matrix(phi);
    const CycMatrix q = matrix_inverse(galois_apply(u, p), one);
    for (std::size_t a = 0; a < n; ++a) {
      const auto y = aut.index_of(p * aut.matrix(a) * q);
      if (!y) return 0;
      parent[find(a)] = find(*y);
    }
  }
  std::size_t roots = 0;
  for (std::size_t x = 0; x < n; ++x) roots += find(x) == x;
  return roots;
}

CurveSpec fermat_quartic_spec() {
  return parse_curve_spec(R"(
[CURVE]
genus 3
conductor 2
param 2 d
[GALOIS]
index 1
[AUTGENS]
a: diag -1, 1, 1
b: diag 1, -1, 1
[IDEAL]
F: w1^4 + w2^4 + w3^4
)");
}

}  // namespace

TEST(PoseProblem, Rows) {
  const auto& g = gamma21();
  const auto p2 = pose_problem(g, pairs21()[1]);
  EXPECT_EQ(p2.pair.g.size(), 36u);
  EXPECT_EQ(p2.pair.h.size(), 3u);
  const auto p4 = pose_problem(g, pairs21()[3]);
  EXPECT_EQ(p4.pair.h.size(), 21u);
  PairGH bad = pairs21()[1];
  bad.h = pairs21()[0].h;
  EXPECT_THROW(pose_problem(g, bad), VerificationError);
}

TEST(Kummer, FamiliesAndTags) {
  const auto f1 = family(0);
  EXPECT_EQ(f1.splitting_field(), "k(zeta_21)");
  ASSERT_EQ(f1.solutions.size(), 1u);
  EXPECT_EQ(f1.solutions[0].tag, "1");

  const auto f2 = family(1);
  EXPECT_EQ(f2.splitting_field(), "k(zeta_21, m^(1/3))");
  ASSERT_EQ(f2.solutions.size(), 2u);
  EXPECT_EQ(f2.solutions[0].tag, "m");
  EXPECT_EQ(f2.solutions[1].tag, "m^2");

  const auto f3 = family(2);
  EXPECT_EQ(f3.solutions.size(), 6u);
  EXPECT_EQ(f3.solutions[5].tag, "n^6");

  const auto f4 = family(3);
  EXPECT_EQ(f4.splitting_field(), "k(zeta_21, m^(1/3), n^(1/7))");
  ASSERT_EQ(f4.solutions.size(), 12u);
  EXPECT_EQ(f4.solutions[0].tag, "m,n");
  EXPECT_EQ(f4.solutions[11].tag, "m^2,n^6");
  Budget b;
  for (std::size_t row = 0; row < 4; ++row) {
    const auto fam = family(row);
    EXPECT_EQ(fam.solutions.size(), count_solutions(gamma21(), pairs21()[row], b));
    for (const auto& s : fam.solutions) {
      EXPECT_TRUE(check_solution(gamma21(), pairs21()[row].g, s)) << s.tag;
      EXPECT_TRUE(s.pure);
    }
  }
}

TEST(Kummer, BaseConvention) {
  const auto& g = gamma21();
  const int r = aut_generator("r"), s = aut_generator("s");
  const auto f4 = family(3);
  const auto& base = f4.solutions[0];
  const auto& t = *base.tower;
  // (r,1) moves the cube root by ζ3, (s,1) moves the seventh root by ζ7
  EXPECT_EQ(base.images[t.delta(0)], g.id(r, 0));
  EXPECT_EQ(base.images[t.delta(1)], g.id(s, 0));
  EXPECT_EQ(t.spec()->slots()[0].name, "m");
  EXPECT_EQ(t.spec()->slots()[1].name, "n");
}

TEST(Kummer, SolutionsPairwiseInequivalent) {
  const auto& g = gamma21();
  const auto f4 = family(3);
  for (std::size_t i = 0; i < f4.solutions.size(); ++i) {
    for (std::size_t j = i + 1; j < f4.solutions.size(); ++j) {
      for (int beta = 0; beta < static_cast<int>(g.aut().size()); ++beta) {
        bool same = true;
        for (std::size_t x = 0; x < f4.solutions[i].images.size() && same; ++x) {
          same = g.conjugate_by_aut(beta, f4.solutions[i].images[x]) == f4.solutions[j].images[x];
        }
        EXPECT_FALSE(same) << i << " " << j << " beta " << beta;
      }
    }
  }
}

TEST(Kummer, OutsideFamilyReported) {
  const CurveSpec spec = fermat_quartic_spec();
  const GammaGroup g = build_gamma(spec);
  Budget b;
  const auto pairs = enumerate_pairs(g, b);
  ASSERT_EQ(pairs.size(), 5u);
  const auto names = [&](int q) { return spec.param_name(q); };
  EXPECT_THROW(solve_kummer(pose_problem(g, pairs.back()), names, b), OutsideFamily);
  const auto fam = solve_kummer(pose_problem(g, pairs[1]), names, b);
  ASSERT_EQ(fam.solutions.size(), 1u);
  EXPECT_EQ(fam.solutions[0].tag, "d");
}

TEST(Cocycle, LawAndRoundTrip) {
  const auto& g = gamma21();
  for (std::size_t row = 0; row < 4; ++row) {
    for (const auto& s : family(row).solutions) {
      const Cocycle c = solution_to_cocycle(g, s);
      EXPECT_TRUE(check_cocycle(g, c)) << s.tag;
      EXPECT_EQ(cocycle_to_solution(g, c).images, s.images);
    }
  }
  Cocycle broken = solution_to_cocycle(g, family(1).solutions[0]);
  broken.values[1] = g.aut().mul(broken.values[1], aut_generator("s"));
  EXPECT_FALSE(check_cocycle(g, broken));
}

TEST(Cocycle, KnownValues) {
  const auto& g = gamma21();
  const int r = aut_generator("r"), s = aut_generator("s");
  const auto f2 = family(1);
  const Cocycle c2 = solution_to_cocycle(g, f2.solutions[0]);
  const auto& t2 = *c2.tower;
  for (int gen : t2.generators()) {
    if (t2.shifts(gen)[0] == 0) EXPECT_EQ(c2.values[gen], 0);
  }
  EXPECT_EQ(c2.values[t2.delta(0)], r);
  const Cocycle c4 = solution_to_cocycle(g, family(3).solutions[0]);
  EXPECT_EQ(c4.values[c4.tower->delta(0)], r);
  EXPECT_EQ(c4.values[c4.tower->delta(1)], s);
  const Cocycle c1 = solution_to_cocycle(g, family(0).solutions[0]);
  for (int v : c1.values) EXPECT_EQ(v, 0);
}

TEST(FiniteField, CountsMatchOrbitOracle) {
  const auto& aut = gamma21().aut();
  std::size_t units = 0;
  for (long b = 1; b < 21; ++b) {
    if (std::gcd(b, 21L) != 1) continue;
    ++units;
    const GammaGroup gb = frobenius_gamma(aut, b);
    const auto classes = solve_finite_field(gb, b);
    EXPECT_EQ(classes.size(), orbit_oracle(aut, b)) << "b = " << b;
    EXPECT_EQ(classes.front().alpha, 0);
    std::size_t covered = 0;
    for (const auto& c : classes) covered += c.orbit_size;
    EXPECT_EQ(covered, aut.size());
  }
  EXPECT_EQ(units, 12u);
}

TEST(FiniteField, FrobeniusTwoAndErrors) {
  const auto& aut = gamma21().aut();
  const GammaGroup gb = frobenius_gamma(aut, 2);
  const auto classes = solve_finite_field(gb, 2);
  EXPECT_EQ(classes.size(), orbit_oracle(aut, 2));
  for (const auto& c : classes) {
    // ξ(F^{i+j}) = ξ(F^i) · b^i(ξ(F^j)) on the cyclic quotient
    for (int i = 0; i < c.order; ++i) {
      for (int j = 0; j < c.order; ++j) {
        const int lhs = c.values[(i + j) % c.order];
        const int rhs = aut.mul(c.values[i], gb.act(gb.pi2(gb.power(gb.id(c.alpha, 1), i)), c.values[j]));
        EXPECT_EQ(lhs, rhs);
      }
    }
  }
  EXPECT_THROW(frobenius_gamma(aut, 3), DomainError);
  EXPECT_THROW(solve_finite_field(gamma21(), 2), DomainError);
}

TEST(FiniteField, TrivialAutomorphismGroup) {
  const CurveSpec spec = load_curve_spec(std::string(TWISTFORGE_FIXTURE_DIR) + "/quartic_trivial.tfs");
  const GammaGroup g = frobenius_gamma(build_aut(spec), 1);
  const auto classes = solve_finite_field(g, 1);
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_EQ(classes[0].order, 1);
}
