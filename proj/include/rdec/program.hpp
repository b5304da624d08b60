#pragma once

// Modelling layer over the LMI solver: scalar and symmetric-matrix decision
// variables, affine matrix inequalities and linear equalities. Equalities are
// eliminated by an affine parameterization y = y0 + N z (N an orthonormal
// null-space basis) before the reduced problem reaches the solver.

#include <cstddef>
#include <utility>
#include <vector>

#include "rdec/sdp.hpp"

namespace rdec::sdp {

using Var = std::size_t;

class LinearForm {
 public:
  LinearForm() = default;
  explicit LinearForm(double constant) : constant_(constant) {}

  LinearForm& add(Var v, double coef);
  LinearForm& add(const LinearForm& other, double scale = 1.0);
  LinearForm& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  const std::vector<std::pair<Var, double>>& terms() const { return terms_; }
  double constant() const { return constant_; }

 private:
  std::vector<std::pair<Var, double>> terms_;
  double constant_ = 0.0;
};

// Symmetric matrix whose entries are affine in the decision variables.
class AffineMatrix {
 public:
  explicit AffineMatrix(Eigen::Index size);

  Eigen::Index size() const { return constant_.rows(); }
  // Adds coef * v at (i, j) and (j, i).
  void add(Eigen::Index i, Eigen::Index j, Var v, double coef);
  // Adds the form at (i, j) and (j, i).
  void add(Eigen::Index i, Eigen::Index j, const LinearForm& f);
  void add_constant(const RealMatrix& m);
  void add_identity(Var v, double coef);

  struct Term {
    Eigen::Index row;
    Eigen::Index col;
    Var var;
    double coef;
  };
  const RealMatrix& constant() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }

 private:
  RealMatrix constant_;
  std::vector<Term> terms_;
};

// Symmetric matrix of fresh variables, one per upper-triangular entry.
class SymmetricVariable {
 public:
  SymmetricVariable() = default;
  SymmetricVariable(Var first, Eigen::Index size) : first_(first), size_(size) {}

  Eigen::Index size() const { return size_; }
  Var at(Eigen::Index i, Eigen::Index j) const;
  AffineMatrix as_affine() const;

 private:
  Var first_ = 0;
  Eigen::Index size_ = 0;
};

struct ProgramSolution {
  SdpStatus status = SdpStatus::indeterminate;
  std::vector<double> values;
  double objective = 0.0;
  double gap = 0.0;
  double min_block_eig = 0.0;
  double equality_residual = 0.0;
  int iterations = 0;
  std::string note;

  double value(Var v) const { return values.at(v); }
  double value(const LinearForm& f) const;
  RealMatrix value(const SymmetricVariable& s) const;
};

class Program {
 public:
  Var add_scalar();
  // Adds the variable and, when psd is set, the constraint S >= 0.
  SymmetricVariable add_symmetric(Eigen::Index size, bool psd = true);

  // f == rhs
  void add_equality(const LinearForm& f, double rhs = 0.0);
  // m >= 0
  void add_lmi(AffineMatrix m);
  void minimize(LinearForm objective) { objective_ = std::move(objective); }

  std::size_t variable_count() const { return variables_; }
  std::size_t equality_count() const { return equalities_.size(); }

  ProgramSolution solve(double tol = kDefaultTol) const;

 private:
  std::size_t variables_ = 0;
  std::vector<std::pair<LinearForm, double>> equalities_;
  std::vector<AffineMatrix> lmis_;
  LinearForm objective_;
};

}  // namespace rdec::sdp
