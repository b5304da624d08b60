#include "rdec/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

#include "rdec/error.hpp"

namespace rdec::suite {

namespace {

using decnorm::dec_norm;
using opsys::full_real;

struct Entry {
  std::string name;
  std::string citation;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list = {
      {"cp_norms", "CP maps: \"\\|u\\|_{\\idec}=\\|u\\|_{\\rm cb}=\\|u\\|\""},
      {"complexification", "complexification isometry: \"Moreover $\\|u\\|_{\\idec} = \\|u_c\\|_{\\idec}.$\""},
      {"injective_collapse",
       "injective codomain: \"\\|u\\|_{\\rm cb}=\\|u_c\\|_{\\rm cb}=\\|u_c\\|_{\\idec} = \\|u\\|_{\\idec}\""},
      {"ordering", "cb below dec: \"\\|u\\|_{\\icb} \\leq\\|u\\|_{\\rm dec}\""},
      {"ruan", "submultiplicativity: \"\\|u^\\prime \\circ u\\|_{\\idec} \\leq\\|u^\\prime\\|_{\\idec} \\, \\|u\\|_{\\idec}\""},
      {"jordan", "Jordan split: \"any  $u = (u+ u^*)/2 + (u- u^*)/2$\""},
      {"skew", "skew completion: \"\\| \\hat{u} \\| = \\| \\varphi \\| = \\| u \\|_{\\rm dec} + \\| u(1) \\|\""},
      {"scp_stinespring", "Stinespring for SCP maps: \"\\|\\phi \\|_{\\rm cb} + \\| \\phi(1) \\| =\\| T \\|^2\""},
      {"paulsen", "Paulsen system: \"Thus we have that $\\|u\\|_{\\icb} \\leq 1$ if and only if $\\Theta $ is cp.\""},
      {"delta", "factorization norm: \"\\|u\\|_{\\idec}=\\delta(z)\""},
      {"quaternion_dims", "quaternions: \"This is 10 (real) dimensional, while Dec$_{\\rm as}(\\bH,\\bH) = "
                          "CB_{\\rm as}(\\bH,\\bH)$ is 6 dimensional.\""},
      {"real_gap", "real gap: \"but Im is not selfadjoint\""},
      {"direct_sum", "direct sums: \"\\|u\\oplus v\\|_{\\idec} = \\max\\{\\|u\\|_{\\idec},\\|v\\|_{\\idec}\\}\""},
  };
  return list;
}

// Per-trial accumulation.
class Trial {
 public:
  explicit Trial(std::size_t index) { rec_.trial = index; }

  void value(const std::string& name, double v) { rec_.values.push_back({name, v}); }
  // Passes when measured <= tol.
  void check(const std::string& name, double measured, double tol) {
    rec_.checks.push_back({name, measured, tol, std::isfinite(measured) && measured <= tol});
  }
  void pair(double dec, double cb) { rec_.norm_pairs.push_back({dec, cb}); }
  void digest(const std::string& d) { rec_.digest += rec_.digest.empty() ? d : "+" + d; }

  Record finish() {
    rec_.pass = !rec_.checks.empty() &&
                std::all_of(rec_.checks.begin(), rec_.checks.end(), [](const Check& c) { return c.pass; });
    return rec_;
  }
  Record fail(const std::string& note) {
    rec_.note = note;
    rec_.pass = false;
    return rec_;
  }

 private:
  Record rec_;
};

double unit_norm(const LinearMap& u) {
  const Eigen::Index n = u.domain()->ambient();
  return mat::op_norm(u.apply(RealMatrix::Identity(n, n)));
}

double dec_value(const LinearMap& u) {
  const auto r = dec_norm(u);
  if (!r.decomposable()) throw IndeterminateError("dec program ended " + decnorm::to_string(r.outcome));
  return r.value;
}

// Records dec and cb of u with the ordering check.
NormPair dec_with_cb(Trial& t, const LinearMap& u, const std::string& tag) {
  const double d = dec_value(u);
  const double c = decnorm::cb_norm(u).value;
  t.value("dec" + tag, d);
  t.value("cb" + tag, c);
  t.pair(d, c);
  t.check("cb-dec" + tag, c - d, 1e-7);
  return {d, c};
}

double dec_with_cb_value(Trial& t, const LinearMap& u, const std::string& tag) { return dec_with_cb(t, u, tag).dec; }

bool cp_verdict(const LinearMap& u) { return cpmap::is_cp(u).verdict == cpmap::Verdict::cp; }

struct Context {
  std::uint64_t seed;
  double tol;
};

using TrialFn = std::function<void(Trial&, std::mt19937_64&, std::size_t, const Context&)>;

void cp_norms(Trial& t, std::mt19937_64& rng, std::size_t, const Context& ctx) {
  const int r = std::uniform_int_distribution<int>(1, 4)(rng);
  const auto u = random_cp_map(rng, full_real(2), 3, r);
  t.digest(digest(u));
  t.value("kraus_count", r);
  const auto [d, c] = dec_with_cb(t, u, "");
  const double unit = unit_norm(u);
  t.value("unit", unit);
  t.check("|dec-cb|", std::abs(d - c), ctx.tol);
  t.check("|dec-|u(I)||", std::abs(d - unit), ctx.tol);
  t.check("not_cp", cp_verdict(u) ? 0.0 : 1.0, 0.0);
}

void complexification(Trial& t, std::mt19937_64& rng, std::size_t, const Context& ctx) {
  const auto m2 = full_real(2);
  const auto u = random_map(rng, m2, m2);
  t.digest(digest(u));
  const double d = dec_with_cb_value(t, u, "");
  const double dc = dec_with_cb_value(t, opsys::complexify_map(u), "_c");
  t.check("|dec-dec_c|", std::abs(d - dc), ctx.tol);
}

void injective_collapse(Trial& t, std::mt19937_64& rng, std::size_t trial, const Context& ctx) {
  const std::vector<SystemPtr> domains = {full_real(2), opsys::ell_inf(3), opsys::quaternion(), full_real(3)};
  const auto v = domains[trial % domains.size()];
  const auto w = full_real(trial % 2 == 0 ? 2 : 3);
  const auto u = random_map(rng, v, w);
  t.digest(digest(u));
  const auto [d, c] = dec_with_cb(t, u, "");
  t.check("|dec-cb|", std::abs(d - c), ctx.tol);
}

void ordering(Trial& t, std::mt19937_64& rng, std::size_t trial, const Context&) {
  const std::vector<SystemPtr> domains = {full_real(2), opsys::ell_inf(3), opsys::quaternion(), full_real(3)};
  const auto v = domains[trial % domains.size()];
  const std::size_t pick = (trial / domains.size()) % 3;
  const SystemPtr w = pick == 0 ? full_real(2) : pick == 1 ? full_real(3) : random_subsystem(rng, 3);
  const auto u = random_map(rng, v, w);
  t.digest(digest(u));
  const auto [d, c] = dec_with_cb(t, u, "");
  t.value("gap", d - c);
  t.value("codomain_dim", static_cast<double>(w->dim()));
}

void ruan(Trial& t, std::mt19937_64& rng, std::size_t, const Context&) {
  const auto m2 = full_real(2);
  const auto u = random_map(rng, m2, m2);
  const auto u2 = random_map(rng, m2, m2);
  const RealMatrix alpha = gaussian(rng, 2, 2);
  const RealMatrix beta = gaussian(rng, 2, 2);
  t.digest(digest(u));
  t.digest(digest(u2));
  const double du = dec_with_cb_value(t, u, "_u");
  const double du2 = dec_with_cb_value(t, u2, "_u'");
  const double dm = dec_with_cb_value(t, opsys::multiply_map(alpha, u, beta), "_aub");
  const double dcomp = dec_with_cb_value(t, opsys::compose(u2, u), "_u'u");
  const double bound = mat::op_norm(alpha) * du * mat::op_norm(beta);
  t.check("aub-bound", dm - bound, 1e-7);
  t.check("u'u-bound", dcomp - du2 * du, 1e-7);
}

void direct_sum(Trial& t, std::mt19937_64& rng, std::size_t, const Context& ctx) {
  const auto m2 = full_real(2);
  const auto u = random_map(rng, m2, m2);
  const auto v = random_map(rng, m2, full_real(3));
  t.digest(digest(u));
  t.digest(digest(v));
  const double du = dec_with_cb_value(t, u, "_u");
  const double dv = dec_with_cb_value(t, v, "_v");
  const double ds = dec_with_cb_value(t, opsys::direct_sum_map(u, v), "_sum");
  t.check("|sum-max|", std::abs(ds - std::max(du, dv)), ctx.tol);
}

void jordan(Trial& t, std::mt19937_64& rng, std::size_t trial, const Context& ctx) {
  const auto u = random_map(rng, full_real(2), full_real(trial % 2 == 0 ? 2 : 3));
  t.digest(digest(u));
  const auto parts = decnorm::jordan_split(u);
  const double scale = std::max(1.0, u.coefficient_norm());
  t.check("recombination", (parts.sa + parts.as).distance(u) / scale, 1e-14);
  t.check("sa_residual", cpmap::selfadjoint_residual(parts.sa), 1e-12);
  t.check("as_residual", cpmap::skew_residual(parts.as), 1e-12);
  const double dsa = dec_with_cb_value(t, parts.sa, "_sa");
  const double sd = decnorm::sa_difference_norm(parts.sa).value;
  t.value("sa_difference", sd);
  t.check("|sa_diff-dec_sa|", std::abs(sd - dsa), ctx.tol);
  const auto r = dec_norm(parts.as);
  const double das = r.value;
  const double cbas = decnorm::cb_norm(parts.as).value;
  t.value("dec_as", das);
  t.value("cb_as", cbas);
  t.pair(das, cbas);
  t.check("cb-dec_as", cbas - das, 1e-7);
  const double sw = decnorm::skew_witness(parts.as).value;
  t.value("skew_witness", sw);
  t.check("|skew_witness-dec_as|", std::abs(sw - das), ctx.tol);
  const auto avg = decnorm::average_witness(r);
  t.check("averaged_witness_not_cp", cp_verdict(cpmap::block_map(avg, parts.as, avg)) ? 0.0 : 1.0, 0.0);
}

void skew(Trial& t, std::mt19937_64& rng, std::size_t, const Context& ctx) {
  const auto u = random_skew_map(rng, full_real(2), full_real(2));
  t.digest(digest(u));
  const auto comp = decnorm::scp_complete(u);
  t.value("dec", comp.dec);
  t.value("unit", comp.unit_norm);
  t.value("block_norm", comp.block_norm);
  t.check("|block-(dec+unit)|", std::abs(comp.block_norm - (comp.dec + comp.unit_norm)), ctx.tol);
  t.check("c(s,u)_not_cp", cp_verdict(cpmap::c_map(comp.s, u)) ? 0.0 : 1.0, 0.0);
  const RealMatrix g = gaussian(rng, 3, 3);
  const RealMatrix x = g - g.transpose();
  const double lhs = mat::op_norm(mat::realify(RealMatrix::Identity(3, 3), x));
  t.value("|c(I,x)|", lhs);
  t.check("|c(I,x)-(1+|x|)|", std::abs(lhs - (1.0 + mat::op_norm(x))), 1e-8);
}

void scp_stinespring(Trial& t, std::mt19937_64& rng, std::size_t, const Context& ctx) {
  const auto u = random_skew_map(rng, full_real(2), full_real(2));
  t.digest(digest(u));
  const auto st = decnorm::stinespring_scp(u);
  const double cb = decnorm::cb_norm(u).value;
  t.pair(st.completion.dec, cb);
  t.check("cb-dec", cb - st.completion.dec, 1e-7);
  t.value("cb", cb);
  t.value("unit", st.completion.unit_norm);
  t.value("|T|^2", st.data.t_norm_sq);
  t.value("dilation_dim", static_cast<double>(st.data.dilation_dim));
  t.check("reconstruction", st.data.residual, 1e-6);
  t.check("||T|^2-(cb+unit)|", std::abs(st.data.t_norm_sq - (cb + st.completion.unit_norm)), ctx.tol);
}

void paulsen(Trial& t, std::mt19937_64& rng, std::size_t, const Context&) {
  const auto m2 = full_real(2);
  const auto u = random_map(rng, m2, m2);
  t.digest(digest(u));
  const double cb = decnorm::cb_norm(u).value;
  t.value("cb", cb);
  const bool above = cp_verdict(paulsen_map(u, cb * (1.0 + 1e-4)));
  const bool below = cp_verdict(paulsen_map(u, cb * (1.0 - 1e-3)));
  t.check("theta_above_not_cp", above ? 0.0 : 1.0, 0.0);
  t.check("theta_below_cp", below ? 1.0 : 0.0, 0.0);
}

void delta(Trial& t, std::mt19937_64& rng, std::size_t, const Context&) {
  const auto v = opsys::ell_inf(3);
  const auto u = random_map(rng, v, full_real(2));
  t.digest(digest(u));
  const double d = dec_with_cb_value(t, u, "");
  double lowest = std::numeric_limits<double>::infinity();
  for (int f = 0; f < 5; ++f) {
    const int inner = std::uniform_int_distribution<int>(2, 3)(rng);
    decnorm::Factorization fac;
    for (std::size_t k = 0; k < 3; ++k) {
      const RealMatrix a = gaussian(rng, 2, inner);
      const RealMatrix b = a.completeOrthogonalDecomposition().pseudoInverse() * u.images()[k];
      fac.pairs.emplace_back(a, b);
    }
    const double dv = decnorm::delta_value(fac, u);
    lowest = std::min(lowest, dv);
    t.check("dec-delta_" + std::to_string(f), d - dv, 1e-7);
  }
  t.value("min_delta", lowest);
}

void quaternion_dims(Trial& t, std::mt19937_64& rng, std::size_t, const Context&) {
  const auto h = opsys::quaternion();
  const auto dims = involution_dims(h, h);
  t.value("sa_dim", dims.sa);
  t.value("as_dim", dims.as);
  t.check("|sa_dim-10|", std::abs(dims.sa - 10.0), 0.0);
  t.check("|as_dim-6|", std::abs(dims.as - 6.0), 0.0);
  const auto u = random_map(rng, h, h);
  t.digest(digest(u));
  const auto parts = decnorm::jordan_split(u);
  t.check("sa_residual", cpmap::selfadjoint_residual(parts.sa), 1e-12);
  t.check("as_residual", cpmap::skew_residual(parts.as), 1e-12);
}

void real_gap(Trial& t, std::mt19937_64& rng, std::size_t trial, const Context& ctx) {
  const double lambda = trial == 0 ? 1.0 : std::uniform_real_distribution<double>(0.5, 2.0)(rng);
  const auto im = opsys::imaginary_part_map(2) * lambda;
  t.digest(digest(im));
  t.value("lambda", lambda);
  const auto [d, c] = dec_with_cb(t, im, "");
  t.check("|dec-lambda|", std::abs(d - lambda), ctx.tol);
  t.check("|cb-lambda|", std::abs(c - lambda), ctx.tol);
  t.check("skew_residual", cpmap::skew_residual(im), 1e-10);
  t.check("|sa_part|", decnorm::jordan_split(im).sa.coefficient_norm(), 1e-10);
  const auto re = opsys::real_part_map(2) * lambda;
  t.check("c(Re,Im)_not_cp", cp_verdict(cpmap::c_map(re, im)) ? 0.0 : 1.0, 0.0);
}

const std::map<std::string, TrialFn>& battery() {
  static const std::map<std::string, TrialFn> fns = {
      {"cp_norms", cp_norms},         {"complexification", complexification},
      {"injective_collapse", injective_collapse}, {"ordering", ordering},
      {"ruan", ruan},                 {"jordan", jordan},
      {"skew", skew},                 {"scp_stinespring", scp_stinespring},
      {"paulsen", paulsen},           {"delta", delta},
      {"quaternion_dims", quaternion_dims}, {"real_gap", real_gap},
      {"direct_sum", direct_sum},
  };
  return fns;
}

std::string format12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

RealMatrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  RealMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = g(rng);
  }
  return a;
}

LinearMap random_map(std::mt19937_64& rng, const SystemPtr& v, const SystemPtr& w) {
  std::normal_distribution<double> g;
  const Eigen::Index m = w->ambient();
  std::vector<RealMatrix> imgs;
  for (std::size_t a = 0; a < v->dim(); ++a) {
    RealMatrix img = RealMatrix::Zero(m, m);
    for (const auto& q : w->orthonormal()) img += g(rng) * q;
    imgs.push_back(std::move(img));
  }
  return LinearMap(v, w, std::move(imgs));
}

LinearMap random_cp_map(std::mt19937_64& rng, const SystemPtr& v, Eigen::Index m, int r) {
  const Eigen::Index n = v->ambient();
  std::vector<RealMatrix> kraus;
  for (int k = 0; k < r; ++k) kraus.push_back(gaussian(rng, n, m));
  return LinearMap::from_function(v, full_real(m), [&](const RealMatrix& x) {
    RealMatrix out = RealMatrix::Zero(m, m);
    for (const auto& kr : kraus) out += kr.transpose() * x * kr;
    return RealMatrix(out / static_cast<double>(r));
  });
}

LinearMap random_skew_map(std::mt19937_64& rng, const SystemPtr& v, const SystemPtr& w) {
  return decnorm::jordan_split(random_map(rng, v, w)).as;
}

SystemPtr random_subsystem(std::mt19937_64& rng, Eigen::Index n) {
  const RealMatrix g = gaussian(rng, n, n);
  const RealMatrix h = gaussian(rng, n, n);
  return opsys::span(n, {RealMatrix::Identity(n, n), RealMatrix(g + g.transpose()), RealMatrix(h - h.transpose())},
                     "random_subsystem(" + std::to_string(n) + ")");
}

std::string digest(const LinearMap& u) {
  // FNV-1a over the image entries.
  std::uint64_t hash = 1469598103934665603ULL;
  for (const auto& img : u.images()) {
    for (Eigen::Index k = 0; k < img.size(); ++k) {
      const double x = img.data()[k];
      unsigned char bytes[sizeof x];
      std::memcpy(bytes, &x, sizeof x);
      for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 1099511628211ULL;
      }
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

const std::vector<std::string>& catalogue() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.push_back(e.name);
    return out;
  }();
  return names;
}

const std::string& citation(const std::string& name) {
  for (const auto& e : entries()) {
    if (e.name == name) return e.citation;
  }
  std::string valid;
  for (const auto& e : entries()) valid += (valid.empty() ? "" : ", ") + e.name;
  throw CatalogueError("unknown suite '" + name + "'; valid suites: " + valid);
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, std::size_t trials, double tol) {
  SuiteReport report;
  report.citation = citation(name);
  if (trials < 1) throw ValidationError("run_suite: trials must be positive");
  if (!(tol > 0.0)) throw ValidationError("run_suite: tolerance must be positive");
  report.suite = name;
  report.seed = seed;
  report.trials = trials;
  report.tol = tol;
  const auto& fn = battery().at(name);
  const Context ctx{seed, tol};
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < trials; ++k) {
    auto rng = trial_rng(seed, k);
    Trial trial(k);
    try {
      fn(trial, rng, k, ctx);
      report.records.push_back(trial.finish());
    } catch (const std::exception& e) {
      report.records.push_back(trial.fail(e.what()));
    }
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.pass = std::all_of(report.records.begin(), report.records.end(), [](const Record& r) { return r.pass; });
  return report;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format12(x));
}

std::string to_json(const SuiteReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["suite"] = r.suite;
  j["citation"] = r.citation;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["tol"] = round12(r.tol);
  j["pass"] = r.pass;
  j["wall_time"] = round12(r.wall_time);
  j["records"] = ordered_json::array();
  for (const auto& rec : r.records) {
    ordered_json jr;
    jr["trial"] = rec.trial;
    jr["digest"] = rec.digest;
    jr["values"] = ordered_json::object();
    for (const auto& v : rec.values) jr["values"][v.name] = round12(v.value);
    jr["checks"] = ordered_json::array();
    for (const auto& c : rec.checks) {
      jr["checks"].push_back(
          {{"name", c.name}, {"measured", round12(c.measured)}, {"tolerance", round12(c.tolerance)}, {"pass", c.pass}});
    }
    jr["norm_pairs"] = ordered_json::array();
    for (const auto& p : rec.norm_pairs) jr["norm_pairs"].push_back({round12(p.dec), round12(p.cb)});
    jr["pass"] = rec.pass;
    if (!rec.note.empty()) jr["note"] = rec.note;
    j["records"].push_back(std::move(jr));
  }
  return j.dump(2);
}

SuiteReport from_json(const std::string& text) {
  SuiteReport r;
  try {
    const auto j = nlohmann::ordered_json::parse(text);
    r.suite = j.at("suite").get<std::string>();
    r.citation = j.at("citation").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.trials = j.at("trials").get<std::size_t>();
    r.tol = j.at("tol").get<double>();
    r.pass = j.at("pass").get<bool>();
    r.wall_time = j.at("wall_time").get<double>();
    for (const auto& jr : j.at("records")) {
      Record rec;
      rec.trial = jr.at("trial").get<std::size_t>();
      rec.digest = jr.at("digest").get<std::string>();
      for (const auto& [k, v] : jr.at("values").items()) rec.values.push_back({k, v.get<double>()});
      for (const auto& jc : jr.at("checks")) {
        rec.checks.push_back({jc.at("name").get<std::string>(), jc.at("measured").get<double>(),
                              jc.at("tolerance").get<double>(), jc.at("pass").get<bool>()});
      }
      for (const auto& jp : jr.at("norm_pairs")) rec.norm_pairs.push_back({jp.at(0).get<double>(), jp.at(1).get<double>()});
      rec.pass = jr.at("pass").get<bool>();
      if (jr.contains("note")) rec.note = jr.at("note").get<std::string>();
      r.records.push_back(std::move(rec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report: ") + e.what());
  }
  return r;
}

std::string to_markdown(const SuiteReport& r) {
  auto cell = [](const std::string& text) {
    std::string out;
    for (char ch : text) out += ch == '|' ? std::string("\\|") : std::string(1, ch);
    return out;
  };
  std::ostringstream os;
  os << "# Suite `" << r.suite << "`\n\n";
  os << "- citation: " << r.citation << "\n";
  os << "- seed: " << r.seed << ", trials: " << r.trials << ", tol: " << format12(r.tol) << "\n";
  os << "- verdict: " << (r.pass ? "PASS" : "FAIL") << " (" << format12(r.wall_time) << " s)\n\n";
  os << "| trial | digest | values | checks (measured <= tol) | verdict |\n";
  os << "|---|---|---|---|---|\n";
  for (const auto& rec : r.records) {
    os << "| " << rec.trial << " | `" << rec.digest << "` | ";
    for (std::size_t k = 0; k < rec.values.size(); ++k) {
      os << (k ? ", " : "") << cell(rec.values[k].name) << "=" << format12(rec.values[k].value);
    }
    os << " | ";
    for (std::size_t k = 0; k < rec.checks.size(); ++k) {
      const auto& c = rec.checks[k];
      os << (k ? ", " : "") << cell(c.name) << ": " << format12(c.measured) << " <= " << format12(c.tolerance)
         << (c.pass ? "" : " (fail)");
    }
    if (!rec.note.empty()) os << " note: " << cell(rec.note);
    os << " | " << (rec.pass ? "pass" : "fail") << " |\n";
  }
  return os.str();
}

std::string to_csv(const SuiteReport& r) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
  };
  std::ostringstream os;
  os << "suite,seed,trial,digest,check,measured,tolerance,pass\n";
  for (const auto& rec : r.records) {
    for (const auto& c : rec.checks) {
      os << r.suite << "," << r.seed << "," << rec.trial << "," << rec.digest << "," << quote(c.name) << ","
         << format12(c.measured) << "," << format12(c.tolerance) << "," << (c.pass ? "true" : "false") << "\n";
    }
    if (rec.checks.empty()) {
      os << r.suite << "," << r.seed << "," << rec.trial << "," << rec.digest << "," << quote(rec.note)
         << ",,,false\n";
    }
  }
  return os.str();
}

InvolutionDims involution_dims(const SystemPtr& v, const SystemPtr& w, double rank_tol) {
  const auto& qv = v->orthonormal();
  const auto& qw = w->orthonormal();
  const auto dv = static_cast<Eigen::Index>(qv.size());
  const auto dw = static_cast<Eigen::Index>(qw.size());
  InvolutionDims out;
  out.involution = RealMatrix::Zero(dv * dw, dv * dw);
  // Map coordinates: C(a, b) = <qw_a, u(qv_b)>, flattened as a * dv + b.
  for (Eigen::Index a = 0; a < dw; ++a) {
    for (Eigen::Index b = 0; b < dv; ++b) {
      // u*(qv_c) = u(qv_c^T)^T with u = (qv_b -> qw_a).
      for (Eigen::Index c = 0; c < dv; ++c) {
        const double coef = mat::inner(qv[static_cast<std::size_t>(b)], qv[static_cast<std::size_t>(c)].transpose());
        if (coef == 0.0) continue;
        const RealMatrix img = coef * qw[static_cast<std::size_t>(a)].transpose();
        for (Eigen::Index e = 0; e < dw; ++e) {
          out.involution(e * dv + c, a * dv + b) += mat::inner(qw[static_cast<std::size_t>(e)], img);
        }
      }
    }
  }
  const RealMatrix id = RealMatrix::Identity(dv * dw, dv * dw);
  const RealMatrix plus = mat::symmetrized(0.5 * (id + out.involution));
  const RealMatrix minus = mat::symmetrized(0.5 * (id - out.involution));
  const auto ep = mat::sym_eig(plus);
  const auto em = mat::sym_eig(minus);
  out.sa = static_cast<int>((ep.values.array() > rank_tol).count());
  out.as = static_cast<int>((em.values.array() > rank_tol).count());
  return out;
}

LinearMap paulsen_map(const LinearMap& u, double t) {
  const auto& v = u.domain();
  const Eigen::Index n = v->ambient();
  const Eigen::Index m = u.codomain()->ambient();
  const auto s = opsys::paulsen_system(v->basis(), n, n, opsys::PaulsenDiagonal::scalar);
  std::vector<RealMatrix> imgs;
  RealMatrix top = RealMatrix::Zero(2 * m, 2 * m);
  top.topLeftCorner(m, m) = t * RealMatrix::Identity(m, m);
  RealMatrix bottom = RealMatrix::Zero(2 * m, 2 * m);
  bottom.bottomRightCorner(m, m) = t * RealMatrix::Identity(m, m);
  imgs.push_back(top);
  imgs.push_back(bottom);
  for (const auto& img : u.images()) {
    RealMatrix x = RealMatrix::Zero(2 * m, 2 * m);
    x.topRightCorner(m, m) = img;
    imgs.push_back(x);
  }
  for (const auto& img : u.images()) {
    RealMatrix y = RealMatrix::Zero(2 * m, 2 * m);
    y.bottomLeftCorner(m, m) = img.transpose();
    imgs.push_back(y);
  }
  return LinearMap(s, full_real(2 * m), std::move(imgs));
}

}  // namespace rdec::suite
