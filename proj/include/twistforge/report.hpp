#pragma once

#include <iomanip>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "pipeline.hpp"

namespace twistforge {

using Json = nlohmann::ordered_json;
using ParameterValues = std::vector<std::pair<std::string, Integer>>;

namespace detail {

inline std::string group_name(const GroupFingerprint& fp, const std::string& label) {
  return label.empty() ? "order " + std::to_string(fp.order) : label;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

inline Json checks_json(const std::vector<CheckResult>& checks) {
  Json a = Json::array();
  for (const auto& c : checks) a.push_back(Json{{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return a;
}

/// Row i of μ as the linear form w'_i = Σ_j μ_ij w_j.
inline std::string basis_row(const Matrix<RadNum>& mu, std::size_t i) {
  std::vector<std::string> terms;
  for (std::size_t j = 0; j < mu.cols(); ++j) {
    if (mu(i, j).is_zero()) continue;
    std::string c = mu(i, j).to_string();
    const std::string w = "w" + std::to_string(j + 1);
    if (c == "1") {
      terms.push_back(w);
    } else if (c.find_first_of("+ ") == std::string::npos) {
      terms.push_back(c + "*" + w);
    } else {
      terms.push_back("(" + c + ")*" + w);
    }
  }
  return terms.empty() ? "0" : join(terms, " + ");
}

inline Json basis_json(const Matrix<RadNum>& mu) {
  Json a = Json::array();
  for (std::size_t i = 0; i < mu.rows(); ++i) a.push_back(basis_row(mu, i));
  return a;
}

inline Json equations_json(const CanonicalIdeal& ideal, const std::vector<RadPoly>& eqs, int g,
                           const std::optional<ParameterValues>& eval) {
  const auto names = default_variable_names(g);
  Json a = Json::array();
  for (std::size_t h = 0; h < eqs.size(); ++h) {
    Json e = {{"name", ideal.names.at(h)}, {"poly", to_string(eqs[h], names)}};
    if (eval) {
      e["evaluated"] = to_string(evaluate_parameters(eqs[h], parameter_values(*eqs[h].leading_coefficient().spec(), *eval)), names);
    }
    a.push_back(std::move(e));
  }
  return a;
}

}  // namespace detail

inline Json verify_json(const CurveSpec& spec, const std::vector<SpecCheck>& checks,
                        const std::optional<GroupFingerprint>& aut_fp) {
  Json j;
  j["curve"] = spec.name;
  j["genus"] = spec.genus;
  j["conductor"] = spec.conductor;
  Json a = Json::array();
  for (const auto& c : checks) a.push_back(Json{{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  j["checks"] = a;
  if (aut_fp) {
    j["aut_order"] = aut_fp->order;
    j["aut_fingerprint"] = aut_fp->key();
    j["aut_label"] = spec.label_for(aut_fp->key());
  }
  return j;
}

inline std::string verify_text(const CurveSpec& spec, const std::vector<SpecCheck>& checks,
                               const std::optional<GroupFingerprint>& aut_fp) {
  std::ostringstream os;
  os << "curve: " << spec.name << " (genus " << spec.genus << ", conductor " << spec.conductor << ")\n";
  for (const auto& c : checks) {
    os << (c.ok ? "  ok    " : "  FAIL  ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  if (aut_fp) {
    os << "Aut: order " << aut_fp->order << ", fingerprint " << aut_fp->key();
    const std::string label = spec.label_for(aut_fp->key());
    if (!label.empty()) os << " " << label;
    os << "\n";
  }
  return os.str();
}

inline Json pair_json(const PairRecord& r) {
  return {{"index", r.index},
          {"G_order", r.pair.g.size()},
          {"H_order", r.pair.h.size()},
          {"solutions", r.solutions},
          {"G_label", r.g_label},
          {"H_label", r.h_label},
          {"G_fingerprint", r.g_fingerprint.key()},
          {"H_fingerprint", r.h_fingerprint.key()},
          {"G_generators", r.g_generators},
          {"H_generators", r.h_generators}};
}

inline Json pairs_json(const std::vector<PairRecord>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(pair_json(r));
  return Json{{"pairs", a}};
}

inline std::string pairs_text(const std::vector<PairRecord>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(6) << "pair" << std::setw(6) << "|G|" << std::setw(6) << "|H|" << std::setw(6) << "n"
     << std::setw(12) << "G" << std::setw(10) << "H" << std::setw(14) << "H gens"
     << "G gens\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(6) << r.index << std::setw(6) << r.pair.g.size() << std::setw(6) << r.pair.h.size()
       << std::setw(6) << r.solutions << std::setw(12) << detail::group_name(r.g_fingerprint, r.g_label)
       << std::setw(10) << detail::group_name(r.h_fingerprint, r.h_label) << std::setw(14)
       << (r.h_generators.empty() ? "-" : detail::join(r.h_generators, ","))
       << (r.g_generators.empty() ? "-" : detail::join(r.g_generators, ", "))
       << "\n";
  }
  return os.str();
}

inline Json twist_json(const GammaGroup& gamma, const CanonicalIdeal& ideal, const TwistRecord& r,
                       const std::optional<ParameterValues>& eval) {
  const GaloisTower& t = *r.twist.cocycle.tower;
  Json cocycle = Json::array();
  for (int s : t.generators()) {
    cocycle.push_back(Json{{"sigma", t.describe(s)}, {"value", gamma.aut().word_text(r.twist.cocycle.values[s])}});
  }
  const std::size_t kdeg = static_cast<std::size_t>(euler_phi(t.spec()->conductor())) / t.gal().size();
  Json checks = detail::checks_json(r.checks);
  checks.insert(checks.begin(), Json{{"name", "cocycle law"}, {"ok", r.cocycle_ok}, {"detail", ""}});
  return {{"pair", r.pair_index},
          {"tag", r.solution.tag},
          {"pure", r.solution.pure},
          {"exponents", r.solution.exponents},
          {"splitting_field", t.splitting_field()},
          {"cocycle", cocycle},
          {"fixed_dimension", r.twist.basis.fixed_dimension / kdeg},
          {"fixed_basis", detail::basis_json(r.twist.basis.mu)},
          {"equations", detail::equations_json(ideal, r.twist.equations, static_cast<int>(r.twist.basis.mu.rows()), eval)},
          {"checks", checks}};
}

inline Json number_field_json(const GammaGroup& gamma, const CanonicalIdeal& ideal, const NumberFieldReport& rep,
                              const std::optional<ParameterValues>& eval) {
  Json pairs = Json::array();
  for (const auto& p : rep.pairs) {
    Json j = pair_json(p.row);
    j["solved"] = p.solved;
    if (p.solved) {
      j["splitting_field"] = p.splitting_field;
    } else {
      j["notice"] = p.notice;
    }
    Json twists = Json::array();
    for (const auto& t : p.twists) twists.push_back(twist_json(gamma, ideal, t, eval));
    j["twists"] = twists;
    pairs.push_back(std::move(j));
  }
  return {{"mode", "number-field"}, {"twist_count", rep.twist_count()}, {"ok", rep.ok()}, {"pairs", pairs}};
}

inline std::string number_field_text(const GammaGroup& gamma, const CanonicalIdeal& ideal, const NumberFieldReport& rep,
                                     const std::optional<ParameterValues>& eval) {
  std::ostringstream os;
  for (const auto& p : rep.pairs) {
    const auto& r = p.row;
    os << "pair " << r.index << ": |G| = " << r.pair.g.size() << ", |H| = " << r.pair.h.size()
       << ", G = " << detail::group_name(r.g_fingerprint, r.g_label)
       << ", H = " << detail::group_name(r.h_fingerprint, r.h_label) << ", n = " << r.solutions << "\n";
    if (!p.solved) {
      os << "  outside the solvable family: " << p.notice << "\n";
      continue;
    }
    os << "  splitting field " << p.splitting_field << "\n";
    for (const auto& t : p.twists) {
      const Json j = twist_json(gamma, ideal, t, eval);
      os << "  twist [" << t.solution.tag << "]" << (t.ok() ? "" : "  VERIFICATION FAILED") << "\n";
      os << "    cocycle:" << (j["cocycle"].empty() ? " trivial" : "");
      for (const auto& c : j["cocycle"]) os << " " << c["sigma"].get<std::string>() << " -> " << c["value"].get<std::string>() << ";";
      os << "\n    fixed basis:\n";
      std::size_t i = 1;
      for (const auto& b : j["fixed_basis"]) os << "      w'" << i++ << " = " << b.get<std::string>() << "\n";
      os << "    equations:\n";
      for (const auto& e : j["equations"]) {
        os << "      " << e["name"].get<std::string>() << ": " << e["poly"].get<std::string>() << "\n";
        if (e.contains("evaluated")) os << "        at the given values: " << e["evaluated"].get<std::string>() << "\n";
      }
      for (const auto& c : j["checks"]) {
        if (!c["ok"].get<bool>()) os << "    FAIL " << c["name"].get<std::string>() << " " << c["detail"].get<std::string>() << "\n";
      }
    }
  }
  os << "twists: " << rep.twist_count() << (rep.ok() ? ", all verified" : ", verification failures present") << "\n";
  return os.str();
}

inline Json finite_field_json(const AutGroup& aut, const CanonicalIdeal& ideal, const FiniteFieldReport& rep) {
  Json twists = Json::array();
  for (const auto& r : rep.twists) {
    const auto& t = r.twist;
    std::vector<std::string> values;
    for (int v : t.cls.values) values.push_back(aut.word_text(v));
    twists.push_back(Json{{"alpha", aut.word_text(t.cls.alpha)},
                      {"order", t.cls.order},
                      {"class_size", t.cls.orbit_size},
                      {"cocycle", values},
                      {"lift_conductor", t.lift_conductor},
                      {"lift_unit", t.lift_unit},
                      {"fixed_basis", detail::basis_json(t.mu)},
                      {"equations", detail::equations_json(ideal, t.equations, aut.dim(), std::nullopt)},
                      {"checks", detail::checks_json(r.checks)}});
  }
  return {{"mode", "finite-field"}, {"frobenius", rep.frobenius}, {"twist_count", rep.twists.size()}, {"ok", rep.ok()},
          {"twists", twists}};
}

inline std::string finite_field_text(const AutGroup& aut, const CanonicalIdeal& ideal, const FiniteFieldReport& rep) {
  std::ostringstream os;
  const Json j = finite_field_json(aut, ideal, rep);
  os << "frobenius acts as zeta -> zeta^" << rep.frobenius << "\n";
  for (const auto& t : j["twists"]) {
    os << "  twist alpha = " << t["alpha"].get<std::string>() << ": splitting degree " << t["order"].get<int>()
       << ", class size " << t["class_size"].get<std::size_t>() << ", model over Q(zeta_"
       << t["lift_conductor"].get<long>() << ") with frobenius " << t["lift_unit"].get<long>() << "\n";
    for (const auto& e : t["equations"]) {
      os << "    " << e["name"].get<std::string>() << ": " << e["poly"].get<std::string>() << "\n";
    }
    for (const auto& c : t["checks"]) {
      if (!c["ok"].get<bool>()) os << "    FAIL " << c["name"].get<std::string>() << "\n";
    }
  }
  os << "twists: " << rep.twists.size() << (rep.ok() ? ", all verified" : ", verification failures present") << "\n";
  return os.str();
}

}  // namespace twistforge
