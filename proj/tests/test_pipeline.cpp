#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "common.hpp"
#include "twistforge/report.hpp"
#include "twistforge/selftest.hpp"

using namespace twistforge;
using namespace tftest;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream f(std::string(TWISTFORGE_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

CurveSpec load(const std::string& name) { return parse_curve_spec(slurp(name)); }

}  // namespace

TEST(Fixtures, EmbeddedCopiesMatchFiles) {
  EXPECT_EQ(std::string(fixtures::kGenusSix), slurp("x7_y3z4_z7.tfs"));
  EXPECT_EQ(std::string(fixtures::kTrivialQuartic), slurp("quartic_trivial.tfs"));
}

TEST(ParseCurveSpec, FixtureShape) {
  const CurveSpec& s = fixture();
  EXPECT_EQ(s.genus, 6);
  EXPECT_EQ(s.conductor, 21);
  EXPECT_EQ(s.gal_index, 12);
  EXPECT_EQ(s.aut_gens.size(), 2u);
  EXPECT_EQ(s.ideal.generators.size(), 8u);
  EXPECT_EQ(s.param_name(3), "m");
  EXPECT_EQ(s.param_name(7), "n");
  EXPECT_EQ(s.param_name(2), "m2");
}

TEST(ParseCurveSpec, ErrorFixtures) {
  try {
    load("bad_singular.tfs");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("generator matrix not invertible"), std::string::npos);
    EXPECT_EQ(e.line(), 11u);
  }
  const auto checks = verify_spec(load("bad_not_preserving.tfs"));
  ASSERT_GE(checks.size(), 2u);
  EXPECT_FALSE(checks[1].ok);
  EXPECT_EQ(checks[1].detail, "generator r does not preserve f1");
}

TEST(Pairs, RowsLabelsAndDescriptions) {
  PipelineOptions opt;
  const auto rows = compute_pairs(fixture(), gamma21(), opt);
  ASSERT_EQ(rows.size(), 4u);
  const char* labels[4] = {"<12,5>", "<36,12>", "<84,7>", "<252,26>"};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(rows[i].index, i + 1);
    EXPECT_EQ(rows[i].g_label, labels[i]);
    // the listed generators regenerate G
    std::vector<int> ids;
    for (int x : rows[i].pair.g_generators) ids.push_back(x);
    EXPECT_EQ(gamma_closure(gamma21(), ids).mask, rows[i].pair.g.mask);
    EXPECT_EQ(rows[i].g_generators.size(), rows[i].pair.g_generators.size());
  }
  EXPECT_EQ(rows[0].h_generators.size(), 0u);
  EXPECT_EQ(rows[3].h_generators, (std::vector<std::string>{"r", "s"}));
}

TEST(Pairs, TrivialAutSingleRow) {
  const CurveSpec s = load("quartic_trivial.tfs");
  PipelineOptions opt;
  const auto rows = compute_pairs(s, build_gamma(s), opt);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].solutions, 1u);
}

TEST(Pairs, BudgetsAreEnforced) {
  PipelineOptions opt;
  opt.subgroup_budget = 10;
  EXPECT_THROW(compute_pairs(fixture(), gamma21(), opt), BudgetExceeded);
  EXPECT_THROW(build_gamma(fixture(), 5), BudgetExceeded);
}

TEST(NumberField, OutsideFamilyIsReportedNotFatal) {
  const CurveSpec s = load("fermat_quartic.tfs");
  PipelineOptions opt;
  const auto rep = run_number_field(s, build_gamma(s), opt);
  ASSERT_EQ(rep.pairs.size(), 5u);
  EXPECT_EQ(rep.twist_count(), 4u);
  EXPECT_TRUE(rep.ok());
  EXPECT_FALSE(rep.pairs[4].solved);
  EXPECT_FALSE(rep.pairs[4].notice.empty());
  const Json j = number_field_json(build_gamma(s), s.ideal, rep, std::nullopt);
  EXPECT_EQ(j["pairs"][4]["solved"], false);
  EXPECT_EQ(j["twist_count"], 4);
}

TEST(Report, PolynomialsRoundTrip) {
  // base record of pair 2 through the JSON writer and back through the parser
  auto fam = family(1);
  TwistRecord rec;
  rec.pair_index = 2;
  rec.solution = fam.solutions[1];
  const Cocycle xi = solution_to_cocycle(gamma21(), rec.solution);
  rec.cocycle_ok = check_cocycle(gamma21(), xi);
  rec.twist = compute_twist(gamma21(), xi, fixture().ideal, rec.solution.tag);
  rec.checks = verify_twist(gamma21(), rec.twist, fixture().ideal);
  const ParameterValues vals = {{"m", Integer(5)}};
  const Json j = twist_json(gamma21(), fixture().ideal, rec, vals);
  EXPECT_EQ(j["tag"], "m^2");
  EXPECT_EQ(j["fixed_dimension"], 6);
  for (std::size_t h = 0; h < 8; ++h) {
    const std::string text = j["equations"][h]["poly"];
    EXPECT_EQ(parse_radical_form(text, rec.twist.basis.spec, 6), rec.twist.equations[h]) << text;
    const std::string at5 = j["equations"][h]["evaluated"];
    EXPECT_EQ(parse_form(at5, PolyContext{21, {}, 6}), evaluate_parameters(rec.twist.equations[h], {Integer(5)})) << at5;
  }
  for (const auto& c : j["checks"]) EXPECT_TRUE(c["ok"].get<bool>()) << c["name"];
}

TEST(Report, FiniteFieldRoundTripAndDeterminism) {
  PipelineOptions one, four;
  four.threads = 4;
  const auto a = run_finite_field(fixture(), 1, one);
  const auto b = run_finite_field(fixture(), 1, four);
  ASSERT_EQ(a.twists.size(), 21u);
  EXPECT_TRUE(a.ok());
  const Json ja = finite_field_json(gamma21().aut(), fixture().ideal, a);
  EXPECT_EQ(ja.dump(), finite_field_json(gamma21().aut(), fixture().ideal, b).dump());
  for (std::size_t i = 0; i < a.twists.size(); ++i) {
    const auto& t = a.twists[i].twist;
    for (std::size_t h = 0; h < t.equations.size(); ++h) {
      EXPECT_EQ(parse_radical_form(ja["twists"][i]["equations"][h]["poly"], t.spec, 6), t.equations[h]);
    }
  }
}

TEST(Report, PairsJsonDeterministic) {
  PipelineOptions opt;
  const std::string a = pairs_json(compute_pairs(fixture(), gamma21(), opt)).dump();
  const std::string b = pairs_json(compute_pairs(fixture(), build_gamma(fixture()), opt)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("<252,26>"), std::string::npos);
}

TEST(Report, ParameterValues) {
  const RadFieldSpec s(21, {{"m", 3}, {"n", 7}});
  EXPECT_EQ(parameter_values(s, {{"n", Integer(3)}, {"m", Integer(2)}}), (std::vector<Integer>{2, 3}));
  EXPECT_THROW(parameter_values(s, {{"m", Integer(2)}}), DomainError);
  EXPECT_THROW(parameter_values(s, {{"m", Integer(0)}, {"n", Integer(1)}}), DomainError);
}

TEST(Parallel, OrderAndExceptions) {
  const auto v = parallel_map(100, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(v[i], i * i);
  EXPECT_THROW(parallel_map(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw DomainError("seven");
                              return i;
                            }),
               DomainError);
}

TEST(SelfTestCriteria, FastCriteria) {
  SelfTest st;
  for (int id : {1, 6, 7}) {
    const auto r = st.run(id);
    EXPECT_TRUE(r.ok) << r.id << " " << r.detail;
  }
  EXPECT_FALSE(st.run(9).ok);
}
