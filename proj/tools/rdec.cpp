// rdec: decomposable and cb norms of real maps between matrix systems.
//
//   rdec norm   --kind dec|cb --map FILE [--tol T]
//   rdec check  --property cp|skew|selfadjoint --map FILE [--tol T]
//   rdec verify --suite NAME --seed S --trials K [--tol T] [--format json|md|csv]
//   rdec report --input FILE [--format json|md|csv]
//
// Exit codes: 0 success or pass, 1 suite failure or not_decomposable,
// 2 input error, 3 solver indeterminate. RDEC_TOL sets the default --tol.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rdec/decnorm.hpp"
#include "rdec/error.hpp"
#include "rdec/io.hpp"
#include "rdec/suite.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rdec;

enum Exit { kOk = 0, kFail = 1, kInput = 2, kIndeterminate = 3 };

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

double r12(double x) { return suite::round12(x); }

double resolve_tol(const std::optional<double>& flag, double fallback) {
  double tol = fallback;
  if (flag) {
    tol = *flag;
  } else if (const char* env = std::getenv("RDEC_TOL")) {
    char* end = nullptr;
    tol = std::strtod(env, &end);
    if (end == env || *end != '\0') throw InputError("RDEC_TOL is not a number: '" + std::string(env) + "'");
  }
  if (!(tol >= 1e-10 && tol <= 1e-4)) throw InputError("tolerance must lie in [1e-10, 1e-4]");
  return tol;
}

ordered_json certificate_json(const decnorm::Certificate& c) {
  return {{"status", sdp::to_string(c.status)},
          {"gap", r12(c.gap)},
          {"min_block_eig", r12(c.min_block_eig)},
          {"equality_residual", r12(c.equality_residual)},
          {"iterations", c.iterations},
          {"variables", c.variables},
          {"equalities", c.equalities}};
}

ordered_json images_json(const opsys::LinearMap& u) {
  ordered_json out = ordered_json::array();
  for (const auto& img : u.images()) out.push_back(ordered_json::parse(io::matrix_to_report(img).dump()));
  return out;
}

int run_norm(const std::string& kind, const std::string& file, double tol) {
  const auto u = io::read_map_file(file);
  ordered_json out;
  out["kind"] = kind;
  if (kind == "cb") {
    const auto r = decnorm::cb_norm(u, tol);
    out["value"] = r12(r.value);
    out["residuals"] = certificate_json(r.certificate);
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  const auto r = decnorm::dec_norm(u, tol);
  out["residuals"] = certificate_json(r.certificate);
  if (r.outcome == decnorm::Outcome::indeterminate) {
    out["value"] = "indeterminate";
    std::cout << out.dump(2) << "\n";
    return kIndeterminate;
  }
  if (r.outcome == decnorm::Outcome::not_decomposable) {
    out["value"] = "not_decomposable";
    std::cout << out.dump(2) << "\n";
    return kFail;
  }
  out["value"] = r12(r.value);
  out["witnesses"] = {{"s1", images_json(*r.s1)}, {"s2", images_json(*r.s2)}};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int run_check(const std::string& property, const std::string& file, double tol) {
  const auto u = io::read_map_file(file);
  ordered_json out;
  out["property"] = property;
  if (property == "cp") {
    const auto c = cpmap::is_cp(u, tol);
    if (c.verdict == cpmap::Verdict::indeterminate) {
      out["verdict"] = "indeterminate";
      out["note"] = c.note;
      std::cout << out.dump(2) << "\n";
      return kIndeterminate;
    }
    out["verdict"] = c.verdict == cpmap::Verdict::cp;
    out["route"] = c.route;
    out["star_residual"] = r12(c.star_residual);
    out["min_eig"] = r12(c.min_eig);
  } else if (property == "skew") {
    const double res = cpmap::skew_residual(u);
    out["verdict"] = res <= tol;
    out["residual"] = r12(res);
  } else {
    const double res = cpmap::selfadjoint_residual(u);
    out["verdict"] = res <= tol;
    out["residual"] = r12(res);
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

std::string render(const suite::SuiteReport& r, const std::string& format) {
  if (format == "md") return suite::to_markdown(r);
  if (format == "csv") return suite::to_csv(r);
  return suite::to_json(r) + "\n";
}

int emit_report(const suite::SuiteReport& r, const std::string& format, const std::string& out_file) {
  const std::string text = render(r, format);
  if (out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_file);
    if (!out) throw InputError(out_file + ": cannot write");
    out << text;
  }
  return r.pass ? kOk : kFail;
}

std::string read_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError(file + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decomposable and completely bounded norms of real maps between matrix systems"};
  app.require_subcommand(1);

  std::string kind, map_file, property, suite_name, format = "json", out_file, input;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::size_t trials = 1;

  auto* norm = app.add_subcommand("norm", "compute the dec or cb norm of a map document");
  norm->add_option("--kind", kind, "dec or cb")->required()->check(CLI::IsMember({"dec", "cb"}));
  norm->add_option("--map", map_file, "map document (JSON)")->required();
  norm->add_option("--tol", tol, "solver tolerance in [1e-10, 1e-4]");

  auto* check = app.add_subcommand("check", "check a structural property of a map");
  check->add_option("--property", property, "cp, skew or selfadjoint")
      ->required()
      ->check(CLI::IsMember({"cp", "skew", "selfadjoint"}));
  check->add_option("--map", map_file, "map document (JSON)")->required();
  check->add_option("--tol", tol, "verdict tolerance in [1e-10, 1e-4]");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite_name, "suite name")->required();
  verify->add_option("--seed", seed, "random seed")->required();
  verify->add_option("--trials", trials, "number of trials")->required()->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol, "comparison tolerance");
  verify->add_option("--format", format, "json, md or csv")->check(CLI::IsMember({"json", "md", "csv"}));
  verify->add_option("--out", out_file, "write the report to a file");

  auto* report = app.add_subcommand("report", "re-render a saved JSON suite report");
  report->add_option("--input", input, "saved report (JSON)")->required();
  report->add_option("--format", format, "json, md or csv")->check(CLI::IsMember({"json", "md", "csv"}));
  report->add_option("--out", out_file, "write the rendering to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kInput;
  }

  try {
    if (*norm) return run_norm(kind, map_file, resolve_tol(tol, sdp::kDefaultTol));
    if (*check) return run_check(property, map_file, resolve_tol(tol, mat::kPsdTol));
    if (*verify) {
      double t = suite::kDefaultSuiteTol;
      if (tol) {
        t = *tol;
      } else if (std::getenv("RDEC_TOL")) {
        t = resolve_tol(std::nullopt, t);
      }
      if (!(t > 0.0)) throw InputError("tolerance must be positive");
      return emit_report(suite::run_suite(suite_name, seed, trials, t), format, out_file);
    }
    if (*report) return emit_report(suite::from_json(read_file(input)), format, out_file);
  } catch (const IndeterminateError& e) {
    std::cerr << "indeterminate: " << e.what() << "\n";
    return kIndeterminate;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIndeterminate;
  }
  return kInput;
}
