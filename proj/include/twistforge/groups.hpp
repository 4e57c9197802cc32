#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "cyclotomic.hpp"

namespace twistforge {

using CycMatrix = Matrix<CycNum>;

namespace detail {

inline std::string matrix_key(const CycMatrix& m, long conductor) {
  std::string key;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const CycNum e = m(i, j).lift(conductor);
      for (const auto& c : e.coords()) {
        key += c.get_str();
        key += ',';
      }
      key += ';';
    }
  }
  return key;
}

inline std::string word_text(const std::vector<int>& word, const std::vector<std::string>& names) {
  if (word.empty()) return "1";
  std::string s;
  std::size_t i = 0;
  while (i < word.size()) {
    std::size_t j = i;
    while (j < word.size() && word[j] == word[i]) ++j;
    if (!s.empty()) s += "*";
    s += names[word[i]];
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

}  // namespace detail

inline CycMatrix galois_apply(const GaloisUnit& u, const CycMatrix& m) {
  return m.map([&](const CycNum& x) { return galois_apply(u, x); });
}

/// Finite matrix group over Q(zeta_N) with its multiplication table; index 0 is the identity.
class AutGroup {
 public:
  static AutGroup close(const std::vector<CycMatrix>& gens, const std::vector<std::string>& names, int dim,
                        long conductor, std::size_t bound) {
    AutGroup a;
    a.dim_ = dim;
    a.conductor_ = conductor;
    a.gen_names_ = names;
    const CycNum zero = CycNum::rational(0, conductor);
    const CycNum one = CycNum::rational(1, conductor);
    for (const auto& g : gens) {
      if (static_cast<int>(g.rows()) != dim || static_cast<int>(g.cols()) != dim) {
        throw VerificationError("generator matrix has the wrong size");
      }
      if (!try_inverse(g, one)) throw VerificationError("generator matrix not invertible");
    }
    a.add(CycMatrix::identity(dim, zero, one), {});
    for (std::size_t head = 0; head < a.elements_.size(); ++head) {
      for (std::size_t k = 0; k < gens.size(); ++k) {
        CycMatrix y = a.elements_[head] * gens[k];
        if (a.index_of(y)) continue;
        if (a.elements_.size() >= bound) {
          throw BudgetExceeded("matrix group closure exceeds the bound of " + std::to_string(bound) + " elements");
        }
        std::vector<int> w = a.words_[head];
        w.push_back(static_cast<int>(k));
        a.add(std::move(y), std::move(w));
      }
    }
    for (std::size_t k = 0; k < gens.size(); ++k) a.gen_index_.push_back(*a.index_of(gens[k]));
    const std::size_t n = a.elements_.size();
    a.table_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto idx = a.index_of(a.elements_[i] * a.elements_[j]);
        if (!idx) throw VerificationError("matrix group is not closed");
        a.table_[i * n + j] = *idx;
      }
    }
    a.inv_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (a.table_[i * n + j] == 0) a.inv_[i] = static_cast<int>(j);
      }
    }
    return a;
  }

  std::size_t size() const noexcept { return elements_.size(); }
  int dim() const noexcept { return dim_; }
  long conductor() const noexcept { return conductor_; }
  const CycMatrix& matrix(std::size_t i) const { return elements_.at(i); }
  int mul(int i, int j) const { return table_[static_cast<std::size_t>(i) * size() + j]; }
  int inv(int i) const { return inv_[i]; }
  const std::vector<int>& generators() const noexcept { return gen_index_; }
  const std::vector<std::string>& generator_names() const noexcept { return gen_names_; }
  const std::vector<int>& word(std::size_t i) const { return words_.at(i); }
  std::string word_text(std::size_t i) const { return detail::word_text(words_.at(i), gen_names_); }

  std::optional<int> index_of(const CycMatrix& m) const {
    auto it = index_.find(detail::matrix_key(m, conductor_));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Permutation of the elements induced by the entrywise Galois action.
  std::vector<int> galois_permutation(const GaloisUnit& u) const {
    std::vector<int> perm(size());
    for (std::size_t i = 0; i < size(); ++i) {
      auto j = index_of(galois_apply(u, elements_[i]));
      if (!j) {
        throw VerificationError("the Galois unit " + std::to_string(u.exponent()) +
                                " does not stabilise the automorphism group");
      }
      perm[i] = *j;
    }
    return perm;
  }

 private:
  void add(CycMatrix m, std::vector<int> w) {
    index_.emplace(detail::matrix_key(m, conductor_), static_cast<int>(elements_.size()));
    elements_.push_back(std::move(m));
    words_.push_back(std::move(w));
  }

  int dim_ = 0;
  long conductor_ = 1;
  std::vector<CycMatrix> elements_;
  std::vector<std::vector<int>> words_;
  std::map<std::string, int> index_;
  std::vector<int> table_;
  std::vector<int> inv_;
  std::vector<int> gen_index_;
  std::vector<std::string> gen_names_;
};

/// Subgroup of (Z/N)^* acting on zeta_N; index 0 is the unit 1.
class GalGroup {
 public:
  static GalGroup close(long conductor, const std::vector<long>& gens) {
    GalGroup g;
    g.conductor_ = conductor;
    g.units_.push_back(1);
    std::vector<long> reduced;
    for (long b : gens) {
      const long r = mod_floor(b, conductor);
      if (conductor > 1 && std::gcd(r, conductor) != 1) {
        throw DomainError("Galois generator " + std::to_string(b) + " is not a unit modulo " + std::to_string(conductor));
      }
      reduced.push_back(conductor == 1 ? 1 : r);
    }
    for (std::size_t head = 0; head < g.units_.size(); ++head) {
      for (long b : reduced) {
        const long y = conductor == 1 ? 1 : (g.units_[head] * b) % conductor;
        if (std::find(g.units_.begin(), g.units_.end(), y) == g.units_.end()) g.units_.push_back(y);
      }
    }
    for (long b : reduced) g.gen_index_.push_back(*g.index_of(b));
    return g;
  }

  long conductor() const noexcept { return conductor_; }
  std::size_t size() const noexcept { return units_.size(); }
  long unit(std::size_t i) const { return units_.at(i); }
  GaloisUnit galois_unit(std::size_t i) const { return GaloisUnit(conductor_, units_.at(i)); }
  const std::vector<int>& generators() const noexcept { return gen_index_; }

  std::optional<int> index_of(long b) const {
    const long r = conductor_ == 1 ? 1 : mod_floor(b, conductor_);
    auto it = std::find(units_.begin(), units_.end(), r);
    if (it == units_.end()) return std::nullopt;
    return static_cast<int>(it - units_.begin());
  }

  int mul(int i, int j) const { return *index_of(units_[i] * units_[j]); }
  int inv(int i) const {
    for (std::size_t j = 0; j < size(); ++j) {
      if (mul(i, static_cast<int>(j)) == 0) return static_cast<int>(j);
    }
    return 0;
  }

 private:
  long conductor_ = 1;
  std::vector<long> units_;
  std::vector<int> gen_index_;
};

/// The twisting group Aut x| Gal with (a, s)(b, t) = (a * s(b), s t).
/// Element id(a, s) = a + |Aut| * s, so the first |Aut| ids form Aut x {1}.
class GammaGroup {
 public:
  GammaGroup(AutGroup aut, GalGroup gal) : aut_(std::move(aut)), gal_(std::move(gal)) {
    const std::size_t na = aut_.size(), ng = gal_.size();
    act_.resize(ng);
    for (std::size_t s = 0; s < ng; ++s) act_[s] = aut_.galois_permutation(gal_.galois_unit(s));
    const std::size_t n = na * ng;
    table_.assign(n * n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        const int a = static_cast<int>(x % na), s = static_cast<int>(x / na);
        const int b = static_cast<int>(y % na), t = static_cast<int>(y / na);
        table_[x * n + y] = id(aut_.mul(a, act_[s][b]), gal_.mul(s, t));
      }
    }
    inv_.assign(n, 0);
    order_.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (table_[x * n + y] == 0) inv_[x] = static_cast<int>(y);
      }
      int k = 1;
      int p = static_cast<int>(x);
      while (p != 0) {
        p = mul(p, static_cast<int>(x));
        ++k;
      }
      order_[x] = k;
    }
  }

  const AutGroup& aut() const noexcept { return aut_; }
  const GalGroup& gal() const noexcept { return gal_; }
  std::size_t size() const noexcept { return aut_.size() * gal_.size(); }

  int id(int a, int s) const { return a + static_cast<int>(aut_.size()) * s; }
  int pi1(int x) const { return x % static_cast<int>(aut_.size()); }
  int pi2(int x) const { return x / static_cast<int>(aut_.size()); }
  int mul(int x, int y) const { return table_[static_cast<std::size_t>(x) * size() + y]; }
  int inv(int x) const { return inv_[x]; }
  int order(int x) const { return order_[x]; }
  int power(int x, long k) const {
    int r = 0;
    for (long i = 0; i < k; ++i) r = mul(r, x);
    return r;
  }
  /// Index of s(b) in Aut.
  int act(int s, int b) const { return act_[s][b]; }
  /// (phi, 1) x (phi, 1)^{-1}.
  int conjugate_by_aut(int phi, int x) const { return mul(mul(id(phi, 0), x), id(aut_.inv(phi), 0)); }

 private:
  AutGroup aut_;
  GalGroup gal_;
  std::vector<std::vector<int>> act_;
  std::vector<int> table_;
  std::vector<int> inv_;
  std::vector<int> order_;
};

/// Subset of Gamma given as a membership mask plus sorted element ids.
struct Subgroup {
  std::vector<char> mask;
  std::vector<int> elements;

  std::size_t size() const noexcept { return elements.size(); }
  bool contains(int x) const { return mask[x] != 0; }
  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.mask == b.mask; }
};

/// Subgroup generated by the given elements of a finite group with multiplication mul.
template <class Mul>
Subgroup closure_of(std::size_t group_size, const std::vector<int>& gens, Mul mul, Budget* budget = nullptr) {
  Subgroup s;
  s.mask.assign(group_size, 0);
  s.mask[0] = 1;
  s.elements.push_back(0);
  for (std::size_t head = 0; head < s.elements.size(); ++head) {
    for (int g : gens) {
      if (budget) budget->charge();
      const int y = mul(s.elements[head], g);
      if (!s.mask[y]) {
        s.mask[y] = 1;
        s.elements.push_back(y);
      }
    }
  }
  std::sort(s.elements.begin(), s.elements.end());
  return s;
}

inline Subgroup gamma_closure(const GammaGroup& gamma, const std::vector<int>& gens, Budget* budget = nullptr) {
  return closure_of(gamma.size(), gens, [&](int x, int y) { return gamma.mul(x, y); }, budget);
}

/// All subgroups of Aut x {1}, as subgroups of Gamma; the trivial group comes first.
inline std::vector<Subgroup> aut_subgroups(const GammaGroup& gamma, Budget& budget) {
  const int na = static_cast<int>(gamma.aut().size());
  std::vector<Subgroup> out;
  std::set<std::vector<char>> seen;
  auto push = [&](Subgroup s) {
    if (seen.insert(s.mask).second) out.push_back(std::move(s));
  };
  push(gamma_closure(gamma, {}, &budget));
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int x = 1; x < na; ++x) {
      if (out[i].contains(x)) continue;
      std::vector<int> gens = out[i].elements;
      gens.push_back(x);
      push(gamma_closure(gamma, gens, &budget));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) { return a.size() < b.size(); });
  return out;
}

/// Smallest generating set found greedily, scanning candidates in increasing id.
inline std::vector<int> greedy_generators(const GammaGroup& gamma, const Subgroup& g) {
  std::vector<int> gens;
  Subgroup cur = gamma_closure(gamma, gens);
  while (cur.size() < g.size()) {
    int best = -1;
    std::size_t best_size = 0;
    for (int x : g.elements) {
      if (cur.contains(x)) continue;
      std::vector<int> trial = gens;
      trial.push_back(x);
      const std::size_t sz = gamma_closure(gamma, trial).size();
      if (sz > best_size) {
        best = x;
        best_size = sz;
      }
    }
    gens.push_back(best);
    cur = gamma_closure(gamma, gens);
  }
  return gens;
}

/// Generators of a subgroup of Aut x {1} chosen in order of shortest words.
inline std::vector<int> aut_subgroup_generators(const GammaGroup& gamma, const Subgroup& h) {
  std::vector<int> gens;
  Subgroup cur = gamma_closure(gamma, gens);
  for (int x : h.elements) {
    if (cur.contains(x)) continue;
    gens.push_back(x);
    cur = gamma_closure(gamma, gens);
  }
  return gens;
}

struct GroupFingerprint {
  std::size_t order = 0;
  std::map<int, int> order_histogram;
  std::vector<long> abelian_invariants;
  std::size_t center_order = 0;
  std::size_t derived_order = 0;

  bool is_abelian() const { return derived_order == 1; }

  std::string key() const {
    std::ostringstream os;
    os << "order=" << order << ";orders=";
    bool first = true;
    for (const auto& [o, c] : order_histogram) {
      os << (first ? "" : ",") << o << ":" << c;
      first = false;
    }
    os << ";ab=";
    if (abelian_invariants.empty()) os << "1";
    for (std::size_t i = 0; i < abelian_invariants.size(); ++i) os << (i ? "x" : "") << abelian_invariants[i];
    os << ";center=" << center_order << ";derived=" << derived_order;
    return os.str();
  }

  friend bool operator==(const GroupFingerprint&, const GroupFingerprint&) = default;
};

template <class Mul, class Order>
GroupFingerprint fingerprint_of(const std::vector<int>& elements, std::size_t group_size, Mul mul, Order order_of,
                                const std::vector<int>& gens) {
  GroupFingerprint fp;
  fp.order = elements.size();
  for (int x : elements) fp.order_histogram[order_of(x)]++;
  // x^{-1} is x^{ord-1}
  auto inverse = [&](int x) {
    int r = 0;
    const int o = order_of(x);
    for (int i = 0; i < o - 1; ++i) r = mul(r, x);
    return r;
  };
  std::vector<int> comms;
  std::vector<char> seen(group_size, 0);
  for (int x : elements) {
    const int xi = inverse(x);
    for (int y : elements) {
      const int c = mul(mul(xi, inverse(y)), mul(x, y));
      if (!seen[c]) {
        seen[c] = 1;
        comms.push_back(c);
      }
    }
  }
  const Subgroup d = closure_of(group_size, comms, mul);
  fp.derived_order = d.size();
  for (int x : elements) {
    bool central = true;
    for (int g : gens) central = central && mul(x, g) == mul(g, x);
    if (central) fp.center_order++;
  }
  // abelianization from the counts |{x : x^{p^k} in D}| / |D|
  const long quotient = static_cast<long>(fp.order / fp.derived_order);
  std::vector<long> prime_powers;
  for (long p : prime_factors(quotient)) {
    std::vector<int> rank_at;  // rank_at[k] = #{cyclic factors of exponent >= k}
    long prev_log = 0;
    long pk = 1;
    for (int k = 1;; ++k) {
      pk *= p;
      std::size_t count = 0;
      for (int x : elements) {
        int y = 0;
        for (long i = 0; i < pk; ++i) y = mul(y, x);
        if (d.contains(y)) ++count;
      }
      long c = static_cast<long>(count / d.size());
      long lg = 0;
      while (c > 1) {
        c /= p;
        ++lg;
      }
      const long r = lg - prev_log;
      if (r == 0) break;
      rank_at.push_back(static_cast<int>(r));
      prev_log = lg;
    }
    for (std::size_t k = 0; k < rank_at.size(); ++k) {
      const int next = k + 1 < rank_at.size() ? rank_at[k + 1] : 0;
      long q = 1;
      for (std::size_t i = 0; i <= k; ++i) q *= p;
      for (int i = 0; i < rank_at[k] - next; ++i) prime_powers.push_back(q);
    }
  }
  // elementary divisors -> invariant factors d_1 | d_2 | ...
  std::map<long, std::vector<long>> by_prime;
  for (long q : prime_powers) {
    long p = prime_factors(q).front();
    by_prime[p].push_back(q);
  }
  std::size_t len = 0;
  for (auto& [p, v] : by_prime) {
    std::sort(v.begin(), v.end(), std::greater<long>());
    len = std::max(len, v.size());
  }
  std::vector<long> inv_factors(len, 1);
  for (auto& [p, v] : by_prime) {
    for (std::size_t i = 0; i < v.size(); ++i) inv_factors[len - 1 - i] *= v[i];
  }
  fp.abelian_invariants = inv_factors;
  return fp;
}

inline GroupFingerprint fingerprint(const GammaGroup& gamma, const Subgroup& g) {
  const auto gens = greedy_generators(gamma, g);
  return fingerprint_of(
      g.elements, gamma.size(), [&](int x, int y) { return gamma.mul(x, y); }, [&](int x) { return gamma.order(x); },
      gens);
}

struct PairGH {
  Subgroup g;
  Subgroup h;
  std::vector<int> g_generators;  // generators of G as ids of Gamma
  std::vector<int> h_generators;  // generators of H as ids of Aut
};

/// Subgroups G of Gamma with G.pi2 = Gal and G meeting Aut x {1} in H, one per class under
/// conjugation by Aut x {1}; sorted by |G|, stable in discovery order.
inline std::vector<PairGH> enumerate_pairs(const GammaGroup& gamma, Budget& budget) {
  const int na = static_cast<int>(gamma.aut().size());
  const auto& gal_gens = gamma.gal().generators();
  const std::size_t target_index = gamma.gal().size();
  std::vector<PairGH> out;
  std::set<std::vector<char>> seen_classes;
  for (const Subgroup& h : aut_subgroups(gamma, budget)) {
    // representatives of the cosets H a
    std::vector<int> reps;
    std::vector<char> covered(na, 0);
    for (int a = 0; a < na; ++a) {
      if (covered[a]) continue;
      reps.push_back(a);
      for (int x : h.elements) covered[gamma.aut().mul(x, a)] = 1;
    }
    std::vector<std::size_t> choice(gal_gens.size(), 0);
    while (true) {
      std::vector<int> gens = aut_subgroup_generators(gamma, h);
      for (std::size_t i = 0; i < gal_gens.size(); ++i) gens.push_back(gamma.id(reps[choice[i]], gal_gens[i]));
      Subgroup g = gamma_closure(gamma, gens, &budget);
      if (g.size() == h.size() * target_index) {
        std::vector<char> key = g.mask;
        for (int phi = 1; phi < na; ++phi) {
          std::vector<char> m(gamma.size(), 0);
          for (int x : g.elements) m[gamma.conjugate_by_aut(phi, x)] = 1;
          budget.charge(g.size());
          key = std::min(key, m);
        }
        if (seen_classes.insert(key).second) {
          PairGH pair;
          pair.g = std::move(g);
          pair.h = h;
          pair.g_generators = greedy_generators(gamma, pair.g);
          for (int x : aut_subgroup_generators(gamma, h)) pair.h_generators.push_back(gamma.pi1(x));
          out.push_back(std::move(pair));
        }
      }
      std::size_t k = 0;
      while (k < choice.size() && ++choice[k] == reps.size()) choice[k++] = 0;
      if (k == choice.size()) break;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const PairGH& a, const PairGH& b) { return a.g.size() < b.g.size(); });
  return out;
}

/// Automorphisms of G fixing the second coordinate, recorded by generator images.
struct Aut2Data {
  std::vector<int> generators;
  std::vector<std::vector<int>> automorphisms;  // images of the generators
  std::set<std::vector<int>> inner;             // restrictions of conjugation by (phi, 1)
  std::size_t count() const { return automorphisms.size() / std::max<std::size_t>(inner.size(), 1); }
};

/// Extends generator images to a map on all of G; nullopt if it is not a well-defined bijective homomorphism.
inline std::optional<std::vector<int>> extend_homomorphism(const GammaGroup& gamma, const Subgroup& g,
                                                           const std::vector<int>& gens, const std::vector<int>& images,
                                                           Budget* budget = nullptr) {
  std::vector<int> map(gamma.size(), -1);
  map[0] = 0;
  std::vector<int> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int x = queue[head];
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (budget) budget->charge(2);
      const int y = gamma.mul(x, gens[i]);
      const int img = gamma.mul(map[x], images[i]);
      if (map[y] < 0) {
        map[y] = img;
        queue.push_back(y);
      } else if (map[y] != img) {
        return std::nullopt;
      }
    }
  }
  std::vector<char> hit(gamma.size(), 0);
  for (int x : g.elements) {
    const int y = map[x];
    if (y < 0 || !g.contains(y) || hit[y]) return std::nullopt;
    hit[y] = 1;
  }
  return map;
}

inline Aut2Data automorphisms_fixing_pi2(const GammaGroup& gamma, const Subgroup& g, const std::vector<int>& gens,
                                         Budget& budget) {
  Aut2Data out;
  out.generators = gens;
  const std::size_t k = gens.size();
  std::vector<std::vector<int>> cand(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (int y : g.elements) {
      if (gamma.order(y) == gamma.order(gens[i]) && gamma.pi2(y) == gamma.pi2(gens[i])) cand[i].push_back(y);
    }
  }
  std::vector<int> img(k, 0);
  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    if (i == k) {
      if (extend_homomorphism(gamma, g, gens, img, &budget)) out.automorphisms.push_back(img);
      return;
    }
    for (int y : cand[i]) {
      budget.charge();
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        ok = gamma.order(gamma.mul(img[j], y)) == gamma.order(gamma.mul(gens[j], gens[i])) &&
             gamma.order(gamma.mul(y, img[j])) == gamma.order(gamma.mul(gens[i], gens[j]));
      }
      if (!ok) continue;
      img[i] = y;
      dfs(i + 1);
    }
  };
  dfs(0);
  const int na = static_cast<int>(gamma.aut().size());
  for (int phi = 0; phi < na; ++phi) {
    bool normalizes = true;
    std::vector<int> im;
    for (int x : gens) {
      const int y = gamma.conjugate_by_aut(phi, x);
      normalizes = normalizes && g.contains(y);
      im.push_back(y);
    }
    if (normalizes) out.inner.insert(im);
  }
  return out;
}

/// n_(G,H) = |Aut_2(G)| / |Inn|.
inline std::size_t count_solutions(const GammaGroup& gamma, const PairGH& pair, Budget& budget) {
  const Aut2Data d = automorphisms_fixing_pi2(gamma, pair.g, pair.g_generators, budget);
  if (d.inner.empty() || d.automorphisms.size() % d.inner.size() != 0) {
    throw VerificationError("inner automorphisms do not form a subgroup of Aut_2(G)");
  }
  return d.count();
}

}  // namespace twistforge
