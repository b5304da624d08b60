#pragma once

// Named, seeded verification batteries with reproducible reports.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rdec/decnorm.hpp"

namespace rdec::suite {

using mat::RealMatrix;
using opsys::LinearMap;
using opsys::SystemPtr;

// Random instances. Every trial draws from its own generator keyed to
// (seed, trial).
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);
RealMatrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols);
// Independent standard Gaussian coordinates on the orthonormal basis of w.
LinearMap random_map(std::mt19937_64& rng, const SystemPtr& v, const SystemPtr& w);
// x -> sum_k K_k^T x K_k / r with r Gaussian n x m Kraus factors.
LinearMap random_cp_map(std::mt19937_64& rng, const SystemPtr& v, Eigen::Index m, int r);
LinearMap random_skew_map(std::mt19937_64& rng, const SystemPtr& v, const SystemPtr& w);
// span{I, S, A} with S symmetric and A antisymmetric Gaussian.
SystemPtr random_subsystem(std::mt19937_64& rng, Eigen::Index n);
std::string digest(const LinearMap& u);

struct Check {
  std::string name;
  double measured = 0.0;  // discrepancy; passes when measured <= tolerance
  double tolerance = 0.0;
  bool pass = false;
};

struct Value {
  std::string name;
  double value = 0.0;
};

// A (dec, cb) pair computed on one instance.
struct NormPair {
  double dec = 0.0;
  double cb = 0.0;
};

struct Record {
  std::size_t trial = 0;
  std::string digest;
  std::vector<Value> values;
  std::vector<Check> checks;
  std::vector<NormPair> norm_pairs;
  bool pass = false;
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::string citation;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  double tol = 0.0;
  std::vector<Record> records;
  bool pass = false;
  double wall_time = 0.0;
};

inline constexpr double kDefaultSuiteTol = 1e-5;

const std::vector<std::string>& catalogue();
// Throws CatalogueError for names outside the catalogue.
const std::string& citation(const std::string& name);
SuiteReport run_suite(const std::string& name, std::uint64_t seed, std::size_t trials,
                      double tol = kDefaultSuiteTol);

// Rounds to 12 significant digits (report-grade output).
double round12(double x);
std::string to_json(const SuiteReport& r);
SuiteReport from_json(const std::string& text);
std::string to_markdown(const SuiteReport& r);
std::string to_csv(const SuiteReport& r);

// Quaternion involution eigenspace dimensions (selfadjoint, skew) on the
// 16-dimensional space of real-linear maps H -> H.
struct InvolutionDims {
  int sa = 0;
  int as = 0;
  RealMatrix involution;  // u -> u* in orthonormal map coordinates
};
InvolutionDims involution_dims(const SystemPtr& v, const SystemPtr& w, double rank_tol = 1e-8);

// Theta_t on the scalar-diagonal Paulsen system of u's domain:
// [[a I, x], [y^T, b I]] -> [[a t I, u(x)], [u(y)^T, b t I]].
LinearMap paulsen_map(const LinearMap& u, double t);

}  // namespace rdec::suite
