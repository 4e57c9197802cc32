#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "twistforge/twistforge.hpp"

namespace fs = std::filesystem;
using namespace twistforge;

namespace {

enum Exit { kOk = 0, kVerification = 1, kParse = 2, kBudget = 3 };

struct UsageError : Error {
  using Error::Error;
};

std::string fixture_dir() {
  const char* env = std::getenv("TWISTFORGE_FIXTURES");
  return env ? env : "";
}

// Relative paths are tried against TWISTFORGE_FIXTURES first.
std::string resolve(const std::string& path) {
  const std::string dir = fixture_dir();
  if (!dir.empty() && fs::path(path).is_relative() && fs::exists(fs::path(dir) / path)) {
    return (fs::path(dir) / path).string();
  }
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ParameterValues parse_eval(const std::string& text) {
  ParameterValues out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--eval expects name=INT pairs, got '" + item + "'");
    Integer v;
    if (v.set_str(item.substr(eq + 1), 10) != 0) throw UsageError("--eval value is not an integer: " + item);
    out.emplace_back(item.substr(0, eq), v);
  }
  return out;
}

std::size_t budget_value(double v, const char* flag) {
  if (!(v >= 1) || v > 1e18) throw UsageError(std::string(flag) + " must be a positive count");
  return static_cast<std::size_t>(v);
}

void emit(const Json& j, const std::string& text, const std::string& json_path) {
  if (json_path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << text;
  if (!json_path.empty()) {
    std::ofstream f(json_path);
    if (!f) throw UsageError("cannot write " + json_path);
    f << j.dump(2) << "\n";
  }
}

int run_verify(const CurveSpec& spec, const PipelineOptions& opt, const std::string& json_path) {
  const auto checks = verify_spec(spec, opt.closure_bound);
  std::optional<GroupFingerprint> fp;
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.ok;
  if (ok) {
    const GammaGroup g = build_gamma(spec, opt.closure_bound);
    std::vector<int> aut_ids;
    for (int a = 0; a < static_cast<int>(g.aut().size()); ++a) aut_ids.push_back(g.id(a, 0));
    fp = fingerprint(g, gamma_closure(g, aut_ids));
  }
  emit(verify_json(spec, checks, fp), verify_text(spec, checks, fp), json_path);
  return ok ? kOk : kVerification;
}

// Every command starts from a verified spec.
bool preflight(const CurveSpec& spec, const PipelineOptions& opt) {
  bool ok = true;
  for (const auto& c : verify_spec(spec, opt.closure_bound)) {
    if (!c.ok) {
      std::cerr << "verify: " << c.name << ": " << c.detail << "\n";
      ok = false;
    }
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twistforge: twists of non-hyperelliptic curves by exact computation"};
  app.require_subcommand(1);

  PipelineOptions opt;
  opt.threads = std::max(1u, std::thread::hardware_concurrency());
  double closure = 1000, subgroups = 1e7, automorphisms = 1e7;
  std::string spec_path, json_path, mode = "nf", eval_text;
  long frobenius = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--budget-closure", closure, "maximum order of the automorphism group")->capture_default_str();
    sub->add_option("--budget-subgroups", subgroups, "node budget of the subgroup search")->capture_default_str();
    sub->add_option("--budget-automorphisms", automorphisms, "node budget of the automorphism search")
        ->capture_default_str();
    sub->add_option("--threads", opt.threads, "worker threads for per-record work")->check(CLI::PositiveNumber);
    sub->add_option("--json", json_path, "write the machine-readable report to PATH ('-' for stdout only)");
  };

  auto* verify = app.add_subcommand("verify", "check closure, ideal preservation and the Galois data");
  verify->add_option("spec", spec_path, "curve spec file")->required();
  add_common(verify);

  auto* pairs = app.add_subcommand("pairs", "table of (G, H) pairs with solution counts");
  pairs->add_option("spec", spec_path, "curve spec file")->required();
  add_common(pairs);

  auto* twist = app.add_subcommand("twist", "compute every twist with its equations");
  twist->add_option("spec", spec_path, "curve spec file")->required();
  twist->add_option("--mode", mode, "nf (number field) or ff (finite field)")
      ->check(CLI::IsMember({"nf", "ff"}))
      ->capture_default_str();
  twist->add_option("--frobenius", frobenius, "unit b mod N by which Frobenius acts on zeta_N (ff mode)");
  twist->add_option("--eval", eval_text, "also print equations at parameter values, e.g. m=2,n=3");
  add_common(twist);

  auto* selftest = app.add_subcommand("selftest", "run the built-in acceptance checks on the embedded fixture");
  selftest->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    opt.closure_bound = budget_value(closure, "--budget-closure");
    opt.subgroup_budget = budget_value(subgroups, "--budget-subgroups");
    opt.automorphism_budget = budget_value(automorphisms, "--budget-automorphisms");

    if (selftest->parsed()) {
      const std::string dir = fixture_dir();
      std::unique_ptr<SelfTest> st;
      if (dir.empty()) {
        st = std::make_unique<SelfTest>(opt.threads);
      } else {
        st = std::make_unique<SelfTest>(opt.threads, read_file((fs::path(dir) / "x7_y3z4_z7.tfs").string()),
                                        read_file((fs::path(dir) / "quartic_trivial.tfs").string()));
      }
      bool all = true;
      for (int id = 1; id <= SelfTest::kCriteria; ++id) {
        const CriterionResult r = st->run(id);
        all = all && r.ok;
        std::cout << "criterion " << r.id << " [" << (r.ok ? "PASS" : "FAIL") << "] " << r.name << ": " << r.detail
                  << " (" << std::fixed << std::setprecision(1) << r.seconds << " s)" << std::endl;
      }
      return all ? kOk : kVerification;
    }

    const std::string path = resolve(spec_path);
    const CurveSpec spec = parse_curve_spec(read_file(path));
    if (verify->parsed()) return run_verify(spec, opt, json_path);
    if (!preflight(spec, opt)) return kVerification;

    if (pairs->parsed()) {
      const GammaGroup g = build_gamma(spec, opt.closure_bound);
      const auto rows = compute_pairs(spec, g, opt);
      emit(pairs_json(rows), pairs_text(rows), json_path);
      return kOk;
    }

    std::optional<ParameterValues> eval;
    if (!eval_text.empty()) eval = parse_eval(eval_text);
    if (mode == "ff") {
      if (twist->count("--frobenius") == 0) throw UsageError("--mode ff requires --frobenius");
      if (eval) throw UsageError("--eval applies to number-field mode only");
      const auto rep = run_finite_field(spec, frobenius, opt);
      const AutGroup aut = build_aut(spec, opt.closure_bound);
      emit(finite_field_json(aut, spec.ideal, rep), finite_field_text(aut, spec.ideal, rep), json_path);
      return rep.ok() ? kOk : kVerification;
    }
    const GammaGroup g = build_gamma(spec, opt.closure_bound);
    const auto rep = run_number_field(spec, g, opt);
    emit(number_field_json(g, spec.ideal, rep, eval), number_field_text(g, spec.ideal, rep, eval), json_path);
    return rep.ok() ? kOk : kVerification;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerification;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kVerification;
  }
}
