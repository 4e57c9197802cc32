#pragma once

#include <chrono>
#include <functional>
#include <random>

#include "fixtures.hpp"
#include "pipeline.hpp"
#include "text.hpp"

namespace twistforge {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool ok = false;
  std::string detail;
  double seconds = 0;
};

/// End-to-end checks of the engine on the embedded fixtures.
class SelfTest {
 public:
  explicit SelfTest(unsigned threads = 1)
      : SelfTest(threads, std::string(fixtures::kGenusSix), std::string(fixtures::kTrivialQuartic)) {}

  /// Runs on caller-supplied texts of the genus-6 fixture and the trivial-Aut quartic.
  SelfTest(unsigned threads, const std::string& genus_six, const std::string& trivial) : trivial_text_(trivial) {
    opt_.threads = threads;
    spec_ = parse_curve_spec(genus_six);
    gamma_.emplace(build_gamma(spec_));
  }

  static constexpr int kCriteria = 7;

  CriterionResult run(int id) {
    CriterionResult r;
    r.id = id;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      switch (id) {
        case 1: r.name = "pairs table"; check_pairs(r); break;
        case 2: r.name = "twist count"; check_count(r); break;
        case 3: r.name = "fixed bases"; check_bases(r); break;
        case 4: r.name = "twisted ideals"; check_ideals(r); break;
        case 5: r.name = "property suite"; check_properties(r); break;
        case 6: r.name = "finite-field orbit oracle"; check_finite_field(r); break;
        case 7: r.name = "trivial twist"; check_trivial(r); break;
        default: throw DomainError("no criterion " + std::to_string(id));
      }
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }

  const CurveSpec& spec() const { return spec_; }
  const GammaGroup& gamma() const { return *gamma_; }

  const std::vector<PairRecord>& pairs() {
    if (!pairs_) pairs_ = compute_pairs(spec_, *gamma_, opt_);
    return *pairs_;
  }

  const NumberFieldReport& number_field() {
    if (!nf_) nf_ = run_number_field(spec_, *gamma_, opt_);
    return *nf_;
  }

 private:
  static void fail(CriterionResult& r, const std::string& why) {
    if (r.ok) r.detail = why;
    r.ok = false;
  }

  int generator(const std::string& name) const {
    const auto& names = gamma_->aut().generator_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return gamma_->aut().generators()[i];
    }
    throw DomainError("fixture has no generator " + name);
  }

  // True when H equals <gens> up to conjugation by Aut x {1}.
  bool h_matches(const Subgroup& h, const std::vector<std::string>& gens) const {
    std::vector<int> ids;
    for (const auto& n : gens) ids.push_back(gamma_->id(generator(n), 0));
    const Subgroup want = gamma_closure(*gamma_, ids);
    for (int phi = 0; phi < static_cast<int>(gamma_->aut().size()); ++phi) {
      std::vector<char> m(gamma_->size(), 0);
      for (int x : want.elements) m[gamma_->conjugate_by_aut(phi, x)] = 1;
      if (m == h.mask) return true;
    }
    return false;
  }

  const TwistRecord& base_record(std::size_t pair_index) {
    for (const auto& p : number_field().pairs) {
      if (p.row.index == pair_index && !p.twists.empty()) return p.twists.front();
    }
    throw VerificationError("no twist records for pair " + std::to_string(pair_index));
  }

  void check_pairs(CriterionResult& r) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& rows = pairs();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    struct Row {
      std::size_t g, h, n;
      std::vector<std::string> gens;
    };
    const std::vector<Row> want = {{12, 1, 1, {}}, {36, 3, 2, {"r"}}, {84, 7, 6, {"s"}}, {252, 21, 12, {"r", "s"}}};
    r.ok = true;
    if (rows.size() != want.size()) return fail(r, std::to_string(rows.size()) + " pairs");
    for (std::size_t i = 0; i < want.size(); ++i) {
      const auto& p = rows[i];
      if (p.pair.g.size() != want[i].g || p.pair.h.size() != want[i].h || p.solutions != want[i].n) {
        fail(r, "row " + std::to_string(i + 1) + " is (" + std::to_string(p.pair.g.size()) + "," +
                    std::to_string(p.pair.h.size()) + "," + std::to_string(p.solutions) + ")");
      } else if (!h_matches(p.pair.h, want[i].gens)) {
        fail(r, "row " + std::to_string(i + 1) + " has the wrong kernel");
      }
    }
    if (secs > 300) fail(r, "took " + std::to_string(secs) + " s");
    if (r.ok) r.detail = "(12,1,1) (36,3,2) (84,7,6) (252,21,12)";
  }

  void check_count(CriterionResult& r) {
    const auto& rep = number_field();
    std::vector<std::size_t> per;
    for (const auto& p : rep.pairs) per.push_back(p.twists.size());
    r.ok = rep.twist_count() == 21 && per == std::vector<std::size_t>{1, 2, 6, 12};
    r.detail = std::to_string(rep.twist_count()) + " records";
  }

  // diag(m^(a_i/3) n^(b_i/7)) over the radical slots present in s
  static Matrix<RadNum> diagonal(const RadSpecPtr& s, const std::vector<std::vector<int>>& exps) {
    const RatFunc one = RatFunc::constant(CycNum::rational(1), s->conductor(), s->nslots());
    Matrix<RadNum> m(exps.size(), exps.size(), RadNum::from_rational(s, 0));
    for (std::size_t i = 0; i < exps.size(); ++i) m(i, i) = RadNum::monomial(s, Exponents(exps[i].begin(), exps[i].end()), one);
    return m;
  }

  void check_bases(CriterionResult& r) {
    r.ok = true;
    const std::vector<int> a = {2, 2, 2, 1, 2, 1}, b = {6, 5, 4, 6, 3, 5};
    std::vector<std::vector<int>> m2, n3, mn4;
    for (int i = 0; i < 6; ++i) {
      m2.push_back({a[i]});
      n3.push_back({b[i]});
      mn4.push_back({a[i], b[i]});
    }
    for (const auto& [pair, exps] : {std::pair{2, m2}, std::pair{3, n3}, std::pair{4, mn4}}) {
      const auto& basis = base_record(pair).twist.basis;
      if (!(basis.mu == diagonal(basis.spec, exps))) fail(r, "case " + std::to_string(pair));
    }
    if (r.ok) r.detail = "cases 2, 3, 4 match";
  }

  void check_ideals(CriterionResult& r) {
    r.ok = true;
    const std::vector<std::tuple<std::size_t, std::string, std::string>> want = {
        {2, "m*w4^3 - w3^2*w5 + w1^3", "w5^3 - m*w4*w6^2 - w1*w2^2"},
        {3, "w4^3 - n*w3^2*w5 + w1^3", "n*w5^3 - w4*w6^2 - w1*w2^2"},
        {4, "m*w4^3 - n*w3^2*w5 + w1^3", "n*w5^3 - m*w4*w6^2 - w1*w2^2"}};
    for (const auto& [pair, f7, f8] : want) {
      const auto& rec = base_record(pair);
      const auto& s = rec.twist.basis.spec;
      const auto& eq = rec.twist.equations;
      if (eq.size() != 8) {
        fail(r, "case " + std::to_string(pair) + " has " + std::to_string(eq.size()) + " generators");
        continue;
      }
      for (int h = 0; h < 6; ++h) {
        if (!(eq[h] == to_radical(s, spec_.ideal.generators[h]))) fail(r, "case " + std::to_string(pair) + " quadric");
      }
      if (!(eq[6] == parse_radical_form(f7, s, 6)) || !(eq[7] == parse_radical_form(f8, s, 6))) {
        fail(r, "case " + std::to_string(pair) + " cubics");
      }
    }
    if (r.ok) r.detail = "cases 2, 3, 4 match";
  }

  void check_properties(CriterionResult& r) {
    r.ok = true;
    const auto& rep = number_field();
    std::size_t records = 0, nontrivial = 0;
    for (const auto& p : rep.pairs) {
      for (const auto& t : p.twists) {
        ++records;
        const std::string where = "record " + std::to_string(p.row.index) + "/" + t.solution.tag;
        if (!t.cocycle_ok) fail(r, where + ": cocycle law");
        for (const auto& c : t.checks) {
          if (!c.ok) fail(r, where + ": " + c.name);
        }
        const GaloisTower& tw = *t.twist.cocycle.tower;
        const std::size_t kdeg = static_cast<std::size_t>(euler_phi(tw.spec()->conductor())) / tw.gal().size();
        if (p.row.pair.h.size() > 1) {
          ++nontrivial;
          if (t.twist.basis.fixed_dimension != 6 * kdeg) fail(r, where + ": fixed dimension");
        }
        if (!t.twist.spans_agree) fail(r, where + ": kernel and projector spans differ");
        const std::vector<Integer> ones(tw.spec()->nslots(), Integer(1));
        for (std::size_t h = 0; h < t.twist.equations.size(); ++h) {
          if (!(evaluate_parameters(t.twist.equations[h], ones) == spec_.ideal.generators[h])) {
            fail(r, where + ": parameters 1 do not recover " + spec_.ideal.names[h]);
          }
        }
      }
    }
    if (records != 21 || nontrivial != 20) fail(r, std::to_string(records) + " records");
    // ρ is a homomorphism: generator pairs plus random words
    for (const auto& p : rep.pairs) {
      if (p.twists.empty()) continue;
      TwistedModule m(*gamma_, p.twists.front().twist.cocycle);
      if (!homomorphism_holds(m)) fail(r, "rho is not a homomorphism for pair " + std::to_string(p.row.index));
    }
    if (r.ok) r.detail = "21 records, 20 nontrivial of dimension 6";
  }

  static bool homomorphism_holds(const TwistedModule& m) {
    const GaloisTower& t = m.tower();
    const auto gens = t.generators();
    std::mt19937 rng(20240611);
    auto word = [&] {
      int w = 0;
      const int len = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < len; ++i) w = t.mul(w, gens[rng() % gens.size()]);
      return w;
    };
    std::vector<std::pair<int, int>> pairs;
    for (int x : gens) {
      for (int y : gens) pairs.emplace_back(x, y);
    }
    for (int k = 0; k < 50; ++k) pairs.emplace_back(word(), word());
    for (auto [x, y] : pairs) {
      const long b = static_cast<long>(rng() % static_cast<unsigned long>(m.blocks()));
      QVector v(m.block_dim());
      for (auto& c : v) c = static_cast<long>(rng() % 9) - 4;
      if (!(m.apply_q(t.mul(x, y), b, v) == m.apply_q(x, b, m.apply_q(y, b, v)))) return false;
    }
    return true;
  }

  void check_finite_field(CriterionResult& r) {
    r.ok = true;
    const GammaGroup& g = *gamma_;
    const long n = spec_.conductor;
    const int na = static_cast<int>(g.aut().size());
    std::size_t units = 0;
    std::string counts;
    for (long b = 1; b < n; ++b) {
      if (std::gcd(b, n) != 1) continue;
      ++units;
      const auto classes = solve_finite_field(frobenius_gamma(g.aut(), b), b);
      // oracle: orbits of (α, b) in the full twisting group under conjugation by (φ, 1)
      const int s = *g.gal().index_of(b);
      std::vector<char> seen(na, 0);
      std::size_t orbits = 0;
      for (int a = 0; a < na; ++a) {
        if (seen[a]) continue;
        ++orbits;
        for (int phi = 0; phi < na; ++phi) {
          const int y = g.mul(g.mul(g.id(phi, 0), g.id(a, s)), g.id(g.aut().inv(phi), 0));
          seen[g.pi1(y)] = 1;
        }
      }
      if (classes.size() != orbits) fail(r, "b = " + std::to_string(b));
      counts += (counts.empty() ? "" : " ") + std::to_string(b) + ":" + std::to_string(orbits);
    }
    if (units != 12) fail(r, std::to_string(units) + " units");
    if (r.ok) r.detail = counts;
  }

  void check_trivial(CriterionResult& r) {
    const CurveSpec spec = parse_curve_spec(trivial_text_);
    const GammaGroup g = build_gamma(spec);
    const auto rep = run_number_field(spec, g, opt_);
    r.ok = rep.pairs.size() == 1 && rep.twist_count() == 1 && rep.ok();
    if (r.ok) {
      const auto& t = rep.pairs[0].twists[0].twist;
      for (std::size_t h = 0; h < spec.ideal.generators.size(); ++h) {
        r.ok = r.ok && t.equations[h] == to_radical(t.basis.spec, spec.ideal.generators[h]);
      }
    }
    r.detail = std::to_string(rep.twist_count()) + " twist" + (r.ok ? ", F' = F" : "");
  }

  PipelineOptions opt_;
  std::string trivial_text_;
  CurveSpec spec_;
  std::optional<GammaGroup> gamma_;
  std::optional<std::vector<PairRecord>> pairs_;
  std::optional<NumberFieldReport> nf_;
};

}  // namespace twistforge
