#pragma once

// Small dense linear-matrix-inequality solver.
//
// Problems have the form
//
//     minimize  c . y   subject to   F0_b + sum_i y_i F_i_b  >= 0   for every block b
//
// and are solved with a primal-dual interior-point method (HKM search
// direction, Mehrotra predictor-corrector). The dual iterate X certifies the
// objective through the duality gap <X, Z>.

#include <cstddef>
#include <string>
#include <vector>

#include "rdec/mat.hpp"

namespace rdec::sdp {

using mat::RealMatrix;
using mat::RealVector;

// One LMI block. Column i of `stack` holds vec(F_i) (column-major) of the
// size x size symmetric coefficient of variable i.
struct LmiBlock {
  RealMatrix constant;
  RealMatrix stack;

  LmiBlock() = default;
  LmiBlock(RealMatrix f0, const std::vector<RealMatrix>& coefficients);

  Eigen::Index size() const { return constant.rows(); }
  RealMatrix coefficient(Eigen::Index i) const;
  // F0 + sum_i y_i F_i
  RealMatrix evaluate(const RealVector& y) const;
};

struct SdpProblem {
  RealVector objective;
  std::vector<LmiBlock> blocks;

  Eigen::Index variables() const { return objective.size(); }
  // Throws ShapeError / ValidationError on malformed input.
  void validate() const;
  // Largest Frobenius norm among all pencil matrices and the objective.
  double scale() const;
};

enum class SdpStatus { optimal, infeasible, indeterminate };

std::string to_string(SdpStatus status);

struct SdpSolution {
  RealVector y;
  SdpStatus status = SdpStatus::indeterminate;
  double objective_value = 0.0;
  // Smallest eigenvalue over all blocks of F0 + sum y_i F_i.
  double min_block_eig = 0.0;
  // Certified width: objective_value minus the dual bound.
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::string note;
  std::vector<RealMatrix> dual;
};

inline constexpr double kDefaultTol = 1e-9;

// tol must lie in [1e-10, 1e-4].
SdpSolution solve(const SdpProblem& problem, double tol = kDefaultTol);

}  // namespace rdec::sdp
