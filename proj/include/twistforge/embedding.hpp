#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "groups.hpp"
#include "radical.hpp"

namespace twistforge {

/// Gal(L/k) for L = K(x_1..x_s), elements (b, e) with ζ ↦ ζ^b and x_t ↦ ζ_{q_t}^{e_t} x_t.
/// Element index is unit_index * R + flat(e), R = prod q_t.
class GaloisTower {
 public:
  GaloisTower(GalGroup gal, RadSpecPtr spec) : gal_(std::move(gal)), spec_(std::move(spec)) {
    if (spec_->conductor() != gal_.conductor()) throw DomainError("radical field and Galois group disagree on N");
    radical_ = spec_->radical_degree();
  }

  const GalGroup& gal() const noexcept { return gal_; }
  const RadSpecPtr& spec() const noexcept { return spec_; }
  std::size_t size() const { return gal_.size() * static_cast<std::size_t>(radical_); }
  long radical_degree() const noexcept { return radical_; }

  int unit_index(int x) const { return static_cast<int>(x / radical_); }
  long unit(int x) const { return gal_.unit(unit_index(x)); }
  Exponents shifts(int x) const { return spec_->unflatten(x % radical_); }
  int index(int unit_idx, const Exponents& e) const {
    return static_cast<int>(unit_idx * radical_ + spec_->flat_index(e));
  }

  int mul(int x, int y) const {
    const long b = unit(x);
    Exponents e = shifts(x);
    const Exponents f = shifts(y);
    for (int t = 0; t < spec_->nslots(); ++t) e[t] = static_cast<int>(mod_floor(e[t] + b * f[t], spec_->slots()[t].q));
    return index(gal_.mul(unit_index(x), unit_index(y)), e);
  }

  ExtendedGaloisElement element(int x) const {
    ExtendedGaloisElement g;
    g.unit = GaloisUnit(spec_->conductor(), unit(x));
    g.shifts = shifts(x);
    return g;
  }

  /// (b_i, 0) for the generators of Gal(K/k), then (1, δ_t) per slot.
  std::vector<int> generators() const {
    std::vector<int> out;
    const Exponents zero(spec_->nslots(), 0);
    for (int gi : gal_.generators()) out.push_back(index(gi, zero));
    for (int t = 0; t < spec_->nslots(); ++t) out.push_back(delta(t));
    return out;
  }

  int delta(int slot) const {
    Exponents e(spec_->nslots(), 0);
    e.at(slot) = 1;
    return index(0, e);
  }

  std::string describe(int x) const {
    std::string s = "(" + std::to_string(unit(x));
    const Exponents e = shifts(x);
    if (!e.empty()) s += "; ";
    for (std::size_t t = 0; t < e.size(); ++t) s += (t ? "," : "") + std::to_string(e[t]);
    return s + ")";
  }

  /// "k(zeta_N, m^(1/3), ...)".
  std::string splitting_field() const {
    std::string s = "k(zeta_" + std::to_string(spec_->conductor());
    for (const auto& slot : spec_->slots()) s += ", " + slot.name + "^(1/" + std::to_string(slot.q) + ")";
    return s + ")";
  }

 private:
  GalGroup gal_;
  RadSpecPtr spec_;
  long radical_ = 1;
};

using TowerPtr = std::shared_ptr<const GaloisTower>;

struct EmbeddingProblem {
  const GammaGroup* gamma = nullptr;
  PairGH pair;
};

inline EmbeddingProblem pose_problem(const GammaGroup& gamma, const PairGH& pair) {
  std::vector<char> hit(gamma.gal().size(), 0);
  for (int x : pair.g.elements) {
    hit[gamma.pi2(x)] = 1;
    if ((gamma.pi2(x) == 0) != pair.h.contains(x)) throw VerificationError("kernel of the projection is not H");
  }
  for (char c : hit) {
    if (!c) throw VerificationError("projection of G onto Gal(K/k) is not surjective");
  }
  return {&gamma, pair};
}

/// Ψ: Gal(L/k) → G, stored on every element.
struct Solution {
  TowerPtr tower;
  std::vector<int> images;  // Gamma ids
  std::vector<int> exponents;  // u_t with Ψ(1, δ_t) = h_t^{u_t}
  bool pure = true;            // agrees with the base solution on (b, 0)
  std::string tag;

  std::vector<std::pair<int, int>> generator_images() const {
    std::vector<std::pair<int, int>> out;
    for (int s : tower->generators()) out.emplace_back(s, images[s]);
    return out;
  }
};

/// ξ: Gal(L/k) → Aut, stored on every element.
struct Cocycle {
  TowerPtr tower;
  std::vector<int> values;  // Aut ids
};

struct KummerSolutionFamily {
  TowerPtr tower;
  std::vector<int> kernel_generators;  // h_t as Aut ids, one per slot
  std::vector<Solution> solutions;     // base solution first

  std::string splitting_field() const { return tower->splitting_field(); }
};

/// True when Ψ is a homomorphism onto G lifting the projection to Gal(K/k).
inline bool check_solution(const GammaGroup& gamma, const Subgroup& g, const Solution& s) {
  const GaloisTower& t = *s.tower;
  const int n = static_cast<int>(t.size());
  if (static_cast<int>(s.images.size()) != n || static_cast<std::size_t>(n) != g.size()) return false;
  std::vector<char> hit(gamma.size(), 0);
  for (int x = 0; x < n; ++x) {
    const int y = s.images[x];
    if (!g.contains(y) || hit[y]) return false;
    hit[y] = 1;
    if (gamma.gal().unit(gamma.pi2(y)) != t.unit(x)) return false;
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (s.images[t.mul(x, y)] != gamma.mul(s.images[x], s.images[y])) return false;
    }
  }
  return true;
}

inline bool check_cocycle(const GammaGroup& gamma, const Cocycle& c) {
  const GaloisTower& t = *c.tower;
  const int n = static_cast<int>(t.size());
  const auto& aut = gamma.aut();
  for (int x = 0; x < n; ++x) {
    const auto s = gamma.gal().index_of(t.unit(x));
    if (!s) return false;
    for (int y = 0; y < n; ++y) {
      if (c.values[t.mul(x, y)] != aut.mul(c.values[x], gamma.act(*s, c.values[y]))) return false;
    }
  }
  return true;
}

inline Cocycle solution_to_cocycle(const GammaGroup& gamma, const Solution& s) {
  Cocycle c{s.tower, {}};
  for (int y : s.images) c.values.push_back(gamma.pi1(y));
  return c;
}

/// σ ↦ (ξ_σ, σ̄).
inline Solution cocycle_to_solution(const GammaGroup& gamma, const Cocycle& c) {
  Solution s;
  s.tower = c.tower;
  for (std::size_t x = 0; x < c.values.size(); ++x) {
    const auto b = gamma.gal().index_of(c.tower->unit(static_cast<int>(x)));
    if (!b) throw VerificationError("cocycle leaves Gal(K/k)");
    s.images.push_back(gamma.id(c.values[x], *b));
  }
  return s;
}

namespace detail {

/// Extends images of the Gal(K/k) generators to a homomorphism Gal(K/k) → Gamma.
inline std::optional<std::vector<int>> extend_from_gal(const GammaGroup& gamma, const std::vector<int>& imgs) {
  const GalGroup& gal = gamma.gal();
  const auto& gens = gal.generators();
  std::vector<int> map(gal.size(), -1);
  map[0] = 0;
  std::vector<int> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const int y = gal.mul(x, gens[i]);
      const int img = gamma.mul(map[x], imgs[i]);
      if (map[y] < 0) {
        map[y] = img;
        queue.push_back(y);
      } else if (map[y] != img) {
        return std::nullopt;
      }
    }
  }
  return map;
}

inline std::string slot_tag(const RadicalSlot& s, int u) { return u == 1 ? s.name : s.name + "^" + std::to_string(u); }

}  // namespace detail

/// Solves the embedding problem when H is a product of Kummer layers; throws OutsideFamily otherwise.
/// param_name maps a prime-power order q to the parameter symbol.
template <class Names>
KummerSolutionFamily solve_kummer(const EmbeddingProblem& problem, Names param_name, Budget& budget) {
  const GammaGroup& gamma = *problem.gamma;
  const PairGH& pair = problem.pair;
  const GalGroup& gal = gamma.gal();
  const long n_cond = gal.conductor();
  const auto& aut = gamma.aut();

  for (int x : pair.h.elements) {
    for (int y : pair.h.elements) {
      if (gamma.mul(x, y) != gamma.mul(y, x)) throw OutsideFamily("kernel H is not abelian");
    }
  }
  // cyclic Sylow subgroups, ordered by prime
  std::vector<RadicalSlot> slots;
  std::vector<int> hgen;
  for (long p : prime_factors(static_cast<long>(pair.h.size()))) {
    long q = 1;
    long rest = static_cast<long>(pair.h.size());
    while (rest % p == 0) {
      rest /= p;
      q *= p;
    }
    int h = -1;
    for (int x : pair.h.elements) {
      if (gamma.order(x) == q) {
        h = x;
        break;
      }
    }
    if (h < 0) throw OutsideFamily("Sylow " + std::to_string(p) + "-subgroup of H is not cyclic");
    if (n_cond % q != 0) {
      throw OutsideFamily("zeta_" + std::to_string(q) + " is not in K = k(zeta_" + std::to_string(n_cond) + ")");
    }
    std::set<long> residues;
    for (std::size_t i = 0; i < gal.size(); ++i) residues.insert(mod_floor(gal.unit(i), q));
    if (static_cast<long>(residues.size()) != euler_phi(q)) {
      throw OutsideFamily("[k(zeta_" + std::to_string(q) + "):k] is not maximal");
    }
    for (int x : pair.g.elements) {
      const long b = gal.unit(gamma.pi2(x));
      if (gamma.mul(gamma.mul(x, h), gamma.inv(x)) != gamma.power(h, mod_floor(b, q))) {
        throw OutsideFamily("G does not act on the order-" + std::to_string(q) + " kernel through the cyclotomic character");
      }
    }
    slots.push_back({param_name(static_cast<int>(q)), static_cast<int>(q)});
    hgen.push_back(h);
  }

  // complement c: Gal(K/k) → G, identity lifts preferred
  const auto& ggens = gal.generators();
  std::vector<std::vector<int>> lifts(ggens.size());
  for (std::size_t i = 0; i < ggens.size(); ++i) {
    for (int x : pair.g.elements) {
      if (gamma.pi2(x) == ggens[i]) lifts[i].push_back(x);
    }
  }
  std::optional<std::vector<int>> comp;
  std::vector<std::size_t> choice(ggens.size(), 0);
  while (!comp) {
    std::vector<int> imgs;
    for (std::size_t i = 0; i < ggens.size(); ++i) imgs.push_back(lifts[i][choice[i]]);
    budget.charge(gal.size());
    comp = detail::extend_from_gal(gamma, imgs);
    std::size_t k = 0;
    while (k < choice.size() && ++choice[k] == lifts[k].size()) choice[k++] = 0;
    if (k == choice.size()) break;
  }
  if (!comp) throw OutsideFamily("the extension G -> Gal(K/k) does not split");

  auto spec = std::make_shared<const RadFieldSpec>(n_cond, slots);
  auto tower = std::make_shared<const GaloisTower>(gal, spec);
  const int nt = static_cast<int>(tower->size());

  Solution base;
  base.tower = tower;
  base.images.resize(nt);
  for (int x = 0; x < nt; ++x) {
    const Exponents e = tower->shifts(x);
    int y = 0;
    for (std::size_t t = 0; t < hgen.size(); ++t) y = gamma.mul(y, gamma.power(hgen[t], e[t]));
    base.images[x] = gamma.mul(y, (*comp)[tower->unit_index(x)]);
  }
  base.exponents.assign(slots.size(), 1);
  if (!check_solution(gamma, pair.g, base)) throw VerificationError("base solution is not an isomorphism onto G");

  // all solutions α∘Ψ, grouped by (β,1)-conjugacy
  const Aut2Data a2 = automorphisms_fixing_pi2(gamma, pair.g, pair.g_generators, budget);
  std::vector<int> normalizer;
  for (int phi = 0; phi < static_cast<int>(aut.size()); ++phi) {
    bool ok = true;
    for (int x : pair.g_generators) ok = ok && pair.g.contains(gamma.conjugate_by_aut(phi, x));
    if (ok) normalizer.push_back(phi);
  }
  const std::vector<int> tgens = tower->generators();
  std::map<std::vector<int>, std::vector<Solution>> classes;
  for (const auto& imgs : a2.automorphisms) {
    const auto alpha = extend_homomorphism(gamma, pair.g, pair.g_generators, imgs, &budget);
    if (!alpha) throw VerificationError("automorphism search returned a non-homomorphism");
    Solution s;
    s.tower = tower;
    for (int y : base.images) s.images.push_back((*alpha)[y]);
    std::vector<int> key = s.images;
    for (int phi : normalizer) {
      std::vector<int> c;
      c.reserve(s.images.size());
      for (int y : s.images) c.push_back(gamma.conjugate_by_aut(phi, y));
      budget.charge(c.size());
      key = std::min(key, c);
    }
    for (std::size_t t = 0; t < hgen.size(); ++t) {
      const int img = s.images[tower->delta(static_cast<int>(t))];
      int u = -1;
      for (int k = 1; k < slots[t].q; ++k) {
        if (gamma.power(hgen[t], k) == img) u = k;
      }
      if (u < 0) throw VerificationError("solution moves a Kummer generator out of its layer");
      s.exponents.push_back(u);
    }
    for (int gi : ggens) {
      const int x = tower->index(gi, Exponents(slots.size(), 0));
      s.pure = s.pure && s.images[x] == base.images[x];
    }
    classes[key].push_back(std::move(s));
  }
  auto better = [](const Solution& a, const Solution& b) {
    if (a.pure != b.pure) return a.pure;
    if (a.exponents != b.exponents) return a.exponents < b.exponents;
    return a.images < b.images;
  };
  KummerSolutionFamily fam;
  fam.tower = tower;
  for (int h : hgen) fam.kernel_generators.push_back(gamma.pi1(h));
  for (auto& [key, members] : classes) {
    fam.solutions.push_back(*std::min_element(members.begin(), members.end(), better));
  }
  std::sort(fam.solutions.begin(), fam.solutions.end(), better);
  std::map<std::string, int> seen;
  for (auto& s : fam.solutions) {
    std::string tag;
    for (std::size_t t = 0; t < slots.size(); ++t) tag += (t ? "," : "") + detail::slot_tag(slots[t], s.exponents[t]);
    if (tag.empty()) tag = "1";
    const int k = seen[tag]++;
    if (k > 0) tag += "#" + std::to_string(k + 1);
    s.tag = tag;
    if (!check_solution(gamma, pair.g, s)) throw VerificationError("solution " + tag + " fails the homomorphism check");
  }
  if (fam.solutions.size() != count_solutions(gamma, pair, budget)) {
    throw VerificationError("number of inequivalent solutions disagrees with the group count");
  }
  return fam;
}

/// One twist over a finite field: the image γ = (α, b) of Frobenius.
struct FiniteFieldClass {
  int alpha = 0;               // Aut id of the orbit representative
  long frobenius = 1;          // b mod N
  int order = 1;               // order of γ = degree of the splitting field over k
  std::vector<int> values;     // ξ(Frob^i) = π1(γ^i), i < order
  std::size_t orbit_size = 1;
};

/// Twisting group Aut ⋊ <b> for a finite base field with Frobenius acting as ζ ↦ ζ^b.
inline GammaGroup frobenius_gamma(const AutGroup& aut, long b) {
  const long n = aut.conductor();
  if (n > 1 && std::gcd(mod_floor(b, n), n) != 1) {
    throw DomainError("frobenius " + std::to_string(b) + " is not a unit mod " + std::to_string(n));
  }
  return GammaGroup(aut, GalGroup::close(n, {b}));
}

/// Classes of epi2-morphisms from the absolute Galois group of a finite field, up to (φ,1)-conjugacy.
inline std::vector<FiniteFieldClass> solve_finite_field(const GammaGroup& gamma, long b) {
  const long n = std::max<long>(gamma.gal().conductor(), 1);
  const auto sidx = gamma.gal().index_of(mod_floor(b, n));
  if (!sidx || static_cast<long>(gamma.gal().size()) != (n == 1 ? 1 : multiplicative_order(mod_floor(b, n), n))) {
    throw DomainError("Gal(K/k) is not cyclic under the frobenius " + std::to_string(b));
  }
  const int na = static_cast<int>(gamma.aut().size());
  std::vector<char> done(na, 0);
  std::vector<FiniteFieldClass> out;
  for (int a = 0; a < na; ++a) {
    if (done[a]) continue;
    FiniteFieldClass c;
    c.alpha = a;
    c.frobenius = gamma.gal().unit(*sidx);
    const int g = gamma.id(a, *sidx);
    std::size_t size = 0;
    for (int phi = 0; phi < na; ++phi) {
      const int y = gamma.pi1(gamma.conjugate_by_aut(phi, g));
      if (!done[y]) {
        done[y] = 1;
        ++size;
      }
    }
    c.orbit_size = size;
    c.order = gamma.order(g);
    for (int i = 0; i < c.order; ++i) c.values.push_back(gamma.pi1(gamma.power(g, i)));
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace twistforge
