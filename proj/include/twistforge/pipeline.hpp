#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "curve_spec.hpp"
#include "embedding.hpp"
#include "twist.hpp"

namespace twistforge {

struct PipelineOptions {
  std::size_t closure_bound = 1000;
  std::size_t subgroup_budget = 10'000'000;
  std::size_t automorphism_budget = 10'000'000;
  unsigned threads = 1;
};

/// Runs f(0..n-1) on up to `threads` workers; results keep index order, the lowest-index exception wins.
template <class F>
auto parallel_map(std::size_t n, unsigned threads, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned k = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < k; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

/// "(word, b)" for an element of Gamma.
inline std::string describe_gamma(const GammaGroup& gamma, int x) {
  return "(" + gamma.aut().word_text(gamma.pi1(x)) + ", " + std::to_string(gamma.gal().unit(gamma.pi2(x))) + ")";
}

struct PairRecord {
  std::size_t index = 0;  // 1-based row number
  PairGH pair;
  std::size_t solutions = 0;
  GroupFingerprint g_fingerprint;
  GroupFingerprint h_fingerprint;
  std::string g_label;
  std::string h_label;
  std::vector<std::string> g_generators;
  std::vector<std::string> h_generators;
};

inline std::vector<PairRecord> compute_pairs(const CurveSpec& spec, const GammaGroup& gamma, const PipelineOptions& opt) {
  Budget subgroups(opt.subgroup_budget);
  Budget automorphisms(opt.automorphism_budget);
  std::vector<PairRecord> out;
  for (auto& p : enumerate_pairs(gamma, subgroups)) {
    PairRecord r;
    r.index = out.size() + 1;
    r.solutions = count_solutions(gamma, p, automorphisms);
    r.g_fingerprint = fingerprint(gamma, p.g);
    r.h_fingerprint = fingerprint(gamma, p.h);
    r.g_label = spec.label_for(r.g_fingerprint.key());
    r.h_label = spec.label_for(r.h_fingerprint.key());
    for (int x : p.g_generators) r.g_generators.push_back(describe_gamma(gamma, x));
    for (int a : p.h_generators) r.h_generators.push_back(gamma.aut().word_text(a));
    r.pair = std::move(p);
    out.push_back(std::move(r));
  }
  return out;
}

struct TwistRecord {
  std::size_t pair_index = 0;
  Solution solution;
  TwistOutput twist;
  bool cocycle_ok = false;
  std::vector<CheckResult> checks;

  bool ok() const {
    return cocycle_ok && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
  }
};

struct PairOutcome {
  PairRecord row;
  bool solved = false;
  std::string notice;  // reason when the pair lies outside the Kummer family
  std::string splitting_field;
  std::vector<TwistRecord> twists;
};

struct NumberFieldReport {
  std::vector<PairOutcome> pairs;

  std::size_t twist_count() const {
    std::size_t n = 0;
    for (const auto& p : pairs) n += p.twists.size();
    return n;
  }
  bool ok() const {
    for (const auto& p : pairs) {
      for (const auto& t : p.twists) {
        if (!t.ok()) return false;
      }
    }
    return true;
  }
};

inline NumberFieldReport run_number_field(const CurveSpec& spec, const GammaGroup& gamma, const PipelineOptions& opt) {
  NumberFieldReport rep;
  Budget automorphisms(opt.automorphism_budget);
  struct Job {
    std::size_t outcome;
    Solution solution;
  };
  std::vector<Job> jobs;
  for (auto& row : compute_pairs(spec, gamma, opt)) {
    PairOutcome po;
    try {
      auto fam = solve_kummer(pose_problem(gamma, row.pair), [&](int q) { return spec.param_name(q); }, automorphisms);
      po.solved = true;
      po.splitting_field = fam.splitting_field();
      for (auto& s : fam.solutions) jobs.push_back({rep.pairs.size(), std::move(s)});
    } catch (const OutsideFamily& e) {
      po.notice = e.what();
    }
    po.row = std::move(row);
    rep.pairs.push_back(std::move(po));
  }
  auto records = parallel_map(jobs.size(), opt.threads, [&](std::size_t i) {
    TwistRecord r;
    r.pair_index = rep.pairs[jobs[i].outcome].row.index;
    r.solution = jobs[i].solution;
    const Cocycle xi = solution_to_cocycle(gamma, r.solution);
    r.cocycle_ok = check_cocycle(gamma, xi);
    r.twist = compute_twist(gamma, xi, spec.ideal, r.solution.tag);
    r.checks = verify_twist(gamma, r.twist, spec.ideal);
    return r;
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) rep.pairs[jobs[i].outcome].twists.push_back(std::move(records[i]));
  return rep;
}

struct FiniteFieldRecord {
  FiniteFieldTwist twist;
  std::vector<CheckResult> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
  }
};

struct FiniteFieldReport {
  long frobenius = 1;
  std::vector<FiniteFieldRecord> twists;

  bool ok() const {
    return std::all_of(twists.begin(), twists.end(), [](const FiniteFieldRecord& r) { return r.ok(); });
  }
};

inline FiniteFieldReport run_finite_field(const CurveSpec& spec, long b, const PipelineOptions& opt) {
  const GammaGroup gb = frobenius_gamma(build_aut(spec, opt.closure_bound), b);
  const auto classes = solve_finite_field(gb, b);
  FiniteFieldReport rep;
  rep.frobenius = classes.empty() ? b : classes.front().frobenius;
  rep.twists = parallel_map(classes.size(), opt.threads, [&](std::size_t i) {
    FiniteFieldRecord r;
    r.twist = finite_field_twist(gb, classes[i], spec.ideal);
    r.checks = verify_finite_field_twist(gb, r.twist);
    return r;
  });
  return rep;
}

/// Values of the Kummer parameters by name; every slot of `spec` must be covered.
inline std::vector<Integer> parameter_values(const RadFieldSpec& spec,
                                             const std::vector<std::pair<std::string, Integer>>& values) {
  std::vector<Integer> out;
  for (const auto& slot : spec.slots()) {
    auto it = std::find_if(values.begin(), values.end(), [&](const auto& v) { return v.first == slot.name; });
    if (it == values.end()) throw DomainError("no value given for parameter " + slot.name);
    if (it->second == 0) throw DomainError("parameter " + slot.name + " must be nonzero");
    out.push_back(it->second);
  }
  return out;
}

}  // namespace twistforge
