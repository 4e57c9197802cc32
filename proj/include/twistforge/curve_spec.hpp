#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "groups.hpp"
#include "text.hpp"

namespace twistforge {

/// Parsed curve-spec file: the canonical model, its automorphism generators and the Galois data.
struct CurveSpec {
  std::string name;
  int genus = 0;
  long conductor = 1;
  std::vector<RadicalSlot> params;  // declared Kummer parameter names per exponent
  long gal_index = 1;
  std::vector<long> gal_gens;
  std::vector<std::string> aut_names;
  std::vector<CycMatrix> aut_gens;
  CanonicalIdeal ideal;
  std::vector<std::pair<std::string, std::string>> labels;  // fingerprint key -> display name

  /// Parameter symbol for a Kummer layer of exponent q; undeclared layers get "m<q>".
  std::string param_name(int q) const {
    for (const auto& p : params) {
      if (p.q == q) return p.name;
    }
    return "m" + std::to_string(q);
  }

  std::string label_for(const std::string& key) const {
    for (const auto& [k, v] : labels) {
      if (k == key) return v;
    }
    return "";
  }

  PolyContext context() const {
    PolyContext c;
    c.conductor = conductor;
    c.nvars = genus;
    return c;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::pair<std::string, std::size_t>> split_commas(const std::string& s, std::size_t col0) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    const std::string part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto lead = part.find_first_not_of(" \t");
    out.emplace_back(trim(part), col0 + start + (lead == std::string::npos ? 0 : lead));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline long parse_long(const std::string& s, std::size_t line, std::size_t col) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, found '" + s + "'", line, col);
  }
}

}  // namespace detail

inline CurveSpec parse_curve_spec(const std::string& text) {
  CurveSpec spec;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  bool have_genus = false, have_conductor = false, have_galois = false, have_ideal = false;
  struct PendingMatrix {
    std::string name;
    std::size_t line;
    std::vector<std::vector<std::pair<std::string, std::size_t>>> rows;
    std::vector<std::size_t> row_lines;
  };
  std::vector<PendingMatrix> pending;
  std::vector<std::tuple<std::string, std::string, std::size_t, std::size_t>> ideal_lines;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const std::size_t indent = line.find_first_not_of(" \t") + 1;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError("unterminated section header", lineno, indent);
      section = t.substr(1, t.size() - 2);
      if (section != "CURVE" && section != "GALOIS" && section != "AUTGENS" && section != "IDEAL" &&
          section != "LABELS") {
        throw ParseError("unknown section [" + section + "]", lineno, indent);
      }
      if (section == "GALOIS") have_galois = true;
      if (section == "IDEAL") have_ideal = true;
      continue;
    }
    if (section.empty()) throw ParseError("content before the first section", lineno, indent);
    const auto sp = t.find_first_of(" \t");
    const std::string key = t.substr(0, sp);
    const std::string rest = sp == std::string::npos ? "" : detail::trim(t.substr(sp));
    const std::size_t rest_col = indent + (sp == std::string::npos ? t.size() : t.find(rest, sp));

    if (section == "CURVE") {
      if (key == "name") {
        spec.name = rest;
      } else if (key == "genus") {
        spec.genus = static_cast<int>(detail::parse_long(rest, lineno, rest_col));
        if (spec.genus < 1) throw ParseError("genus must be positive", lineno, rest_col);
        have_genus = true;
      } else if (key == "conductor") {
        spec.conductor = detail::parse_long(rest, lineno, rest_col);
        if (spec.conductor < 1) throw ParseError("conductor must be positive", lineno, rest_col);
        have_conductor = true;
      } else if (key == "param") {
        std::istringstream ps(rest);
        std::string qs, name;
        ps >> qs >> name;
        if (name.empty()) throw ParseError("expected 'param <q> <name>'", lineno, rest_col);
        spec.params.push_back({name, static_cast<int>(detail::parse_long(qs, lineno, rest_col))});
      } else {
        throw ParseError("unknown key '" + key + "' in [CURVE]", lineno, indent);
      }
    } else if (section == "GALOIS") {
      if (key == "index") {
        spec.gal_index = detail::parse_long(rest, lineno, rest_col);
      } else if (key == "gens") {
        std::istringstream gs(rest);
        std::string tok;
        while (gs >> tok) spec.gal_gens.push_back(detail::parse_long(tok, lineno, rest_col));
      } else {
        throw ParseError("unknown key '" + key + "' in [GALOIS]", lineno, indent);
      }
    } else if (section == "AUTGENS") {
      const auto colon = t.find(':');
      if (colon != std::string::npos && t.find_first_of(" \t,") > colon) {
        PendingMatrix pm;
        pm.name = detail::trim(t.substr(0, colon));
        pm.line = lineno;
        const std::string body = detail::trim(t.substr(colon + 1));
        if (!body.empty()) {
          if (body.rfind("diag", 0) != 0) throw ParseError("expected 'diag' or matrix rows", lineno, indent + colon + 1);
          const std::string entries = body.substr(4);
          pm.rows.push_back(detail::split_commas(entries, indent + t.find(entries)));
          pm.row_lines.push_back(lineno);
          pm.name = "diag:" + pm.name;
        }
        pending.push_back(std::move(pm));
      } else {
        if (pending.empty() || pending.back().name.rfind("diag:", 0) == 0) {
          throw ParseError("matrix row outside a generator", lineno, indent);
        }
        pending.back().rows.push_back(detail::split_commas(t, indent));
        pending.back().row_lines.push_back(lineno);
      }
    } else if (section == "IDEAL") {
      const auto colon = t.find(':');
      std::string name = "f" + std::to_string(ideal_lines.size() + 1);
      std::string body = t;
      std::size_t col = indent;
      if (colon != std::string::npos) {
        name = detail::trim(t.substr(0, colon));
        body = t.substr(colon + 1);
        col = indent + colon + 1;
      }
      ideal_lines.emplace_back(name, body, lineno, col);
    } else if (section == "LABELS") {
      // keys contain '=' themselves; the label follows the last one
      const auto eq = t.rfind('=');
      if (eq == std::string::npos) throw ParseError("expected '<fingerprint> = <label>'", lineno, indent);
      spec.labels.emplace_back(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
  }
  if (!have_genus) throw ParseError("missing 'genus' in [CURVE]", lineno, 1);
  if (!have_conductor) throw ParseError("missing 'conductor' in [CURVE]", lineno, 1);
  if (!have_galois) throw ParseError("missing [GALOIS] section", lineno, 1);
  if (!have_ideal || ideal_lines.empty()) throw ParseError("missing [IDEAL] generators", lineno, 1);
  for (const auto& p : spec.params) {
    if (p.q < 2 || spec.conductor % p.q != 0) {
      throw ParseError("parameter " + p.name + " needs an exponent dividing the conductor", 1, 1);
    }
  }

  const PolyContext ctx = spec.context();
  const CycNum zero = CycNum::rational(0, spec.conductor);
  const CycNum one = CycNum::rational(1, spec.conductor);
  for (const auto& pm : pending) {
    CycMatrix m(spec.genus, spec.genus, zero);
    std::string name = pm.name;
    if (name.rfind("diag:", 0) == 0) {
      name = name.substr(5);
      const auto& entries = pm.rows.front();
      if (static_cast<int>(entries.size()) != spec.genus) {
        throw ParseError("diagonal of " + name + " needs " + std::to_string(spec.genus) + " entries", pm.line, 1);
      }
      for (int i = 0; i < spec.genus; ++i) {
        m(i, i) = parse_scalar(entries[i].first, spec.conductor, pm.line, entries[i].second);
      }
    } else {
      if (static_cast<int>(pm.rows.size()) != spec.genus) {
        throw ParseError("matrix " + name + " needs " + std::to_string(spec.genus) + " rows", pm.line, 1);
      }
      for (int i = 0; i < spec.genus; ++i) {
        const auto& row = pm.rows[i];
        if (static_cast<int>(row.size()) != spec.genus) {
          throw ParseError("row of " + name + " needs " + std::to_string(spec.genus) + " entries", pm.row_lines[i], 1);
        }
        for (int j = 0; j < spec.genus; ++j) m(i, j) = parse_scalar(row[j].first, spec.conductor, pm.row_lines[i], row[j].second);
      }
    }
    if (!try_inverse(m, one)) throw ParseError("generator matrix not invertible: " + name, pm.line, 1);
    spec.aut_names.push_back(name);
    spec.aut_gens.push_back(std::move(m));
  }
  spec.ideal.nvars = spec.genus;
  for (const auto& [name, body, line, col] : ideal_lines) {
    CycPoly f = parse_form(body, ctx, line, col);
    if (f.is_zero()) throw ParseError("ideal generator " + name + " is zero", line, col);
    spec.ideal.generators.push_back(std::move(f));
    spec.ideal.names.push_back(name);
  }
  return spec;
}

inline CurveSpec load_curve_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open spec file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_curve_spec(ss.str());
}


inline AutGroup build_aut(const CurveSpec& spec, std::size_t bound = 1000) {
  return AutGroup::close(spec.aut_gens, spec.aut_names, spec.genus, spec.conductor, bound);
}

inline GammaGroup build_gamma(const CurveSpec& spec, std::size_t bound = 1000) {
  AutGroup aut = build_aut(spec, bound);
  GalGroup gal = GalGroup::close(spec.conductor, spec.gal_gens);
  return GammaGroup(std::move(aut), std::move(gal));
}

struct SpecCheck {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Consistency checks of a curve spec: closure, ideal preservation, Galois index and stability.
inline std::vector<SpecCheck> verify_spec(const CurveSpec& spec, std::size_t bound = 1000) {
  std::vector<SpecCheck> out;
  std::optional<AutGroup> aut;
  try {
    aut = build_aut(spec, bound);
    out.push_back({"automorphism group closes", true, "order " + std::to_string(aut->size())});
  } catch (const VerificationError& e) {
    out.push_back({"automorphism group closes", false, e.what()});
    return out;
  }
  GradedMembership gm(spec.ideal, spec.conductor);
  SpecCheck pres{"generators preserve the ideal", true, ""};
  for (std::size_t k = 0; k < spec.aut_gens.size() && pres.ok; ++k) {
    const CycMatrix t = spec.aut_gens[k].transpose();
    for (std::size_t h = 0; h < spec.ideal.generators.size(); ++h) {
      if (!gm.contains(substitute(spec.ideal.generators[h], t))) {
        pres.ok = false;
        pres.detail = "generator " + spec.aut_names[k] + " does not preserve " + spec.ideal.names[h];
        break;
      }
    }
  }
  out.push_back(pres);
  std::optional<GalGroup> gal;
  try {
    gal = GalGroup::close(spec.conductor, spec.gal_gens);
    const bool ok = static_cast<long>(gal->size()) == spec.gal_index;
    out.push_back({"Galois subgroup has the declared index", ok,
                   "generated " + std::to_string(gal->size()) + ", declared " + std::to_string(spec.gal_index)});
  } catch (const Error& e) {
    out.push_back({"Galois subgroup has the declared index", false, e.what()});
    return out;
  }
  SpecCheck stab{"Galois action stabilises the automorphism group", true, ""};
  for (int gi : gal->generators()) {
    try {
      aut->galois_permutation(gal->galois_unit(gi));
    } catch (const VerificationError& e) {
      stab.ok = false;
      stab.detail = e.what();
    }
  }
  out.push_back(stab);
  return out;
}

}  // namespace twistforge
