#include "rdec/program.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>

#include "rdec/error.hpp"

namespace rdec::sdp {

LinearForm& LinearForm::add(Var v, double coef) {
  if (coef != 0.0) terms_.emplace_back(v, coef);
  return *this;
}

LinearForm& LinearForm::add(const LinearForm& other, double scale) {
  for (const auto& [v, c] : other.terms_) add(v, scale * c);
  constant_ += scale * other.constant_;
  return *this;
}

AffineMatrix::AffineMatrix(Eigen::Index size) : constant_(RealMatrix::Zero(size, size)) {}

void AffineMatrix::add(Eigen::Index i, Eigen::Index j, Var v, double coef) {
  if (coef == 0.0) return;
  terms_.push_back({i, j, v, coef});
}

void AffineMatrix::add(Eigen::Index i, Eigen::Index j, const LinearForm& f) {
  for (const auto& [v, c] : f.terms()) add(i, j, v, c);
  constant_(i, j) += f.constant();
  if (i != j) constant_(j, i) += f.constant();
}

void AffineMatrix::add_constant(const RealMatrix& m) {
  if (m.rows() != size() || m.cols() != size()) throw ShapeError("AffineMatrix: size mismatch");
  constant_ += mat::symmetrized(m);
}

void AffineMatrix::add_identity(Var v, double coef) {
  for (Eigen::Index i = 0; i < size(); ++i) add(i, i, v, coef);
}

Var SymmetricVariable::at(Eigen::Index i, Eigen::Index j) const {
  if (i > j) std::swap(i, j);
  // Row-major upper triangle.
  const auto offset = i * size_ - i * (i - 1) / 2 + (j - i);
  return first_ + static_cast<Var>(offset);
}

AffineMatrix SymmetricVariable::as_affine() const {
  AffineMatrix m(size_);
  for (Eigen::Index i = 0; i < size_; ++i) {
    for (Eigen::Index j = i; j < size_; ++j) m.add(i, j, at(i, j), 1.0);
  }
  return m;
}

double ProgramSolution::value(const LinearForm& f) const {
  double s = f.constant();
  for (const auto& [v, c] : f.terms()) s += c * values.at(v);
  return s;
}

RealMatrix ProgramSolution::value(const SymmetricVariable& s) const {
  RealMatrix m(s.size(), s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    for (Eigen::Index j = i; j < s.size(); ++j) m(i, j) = m(j, i) = values.at(s.at(i, j));
  }
  return m;
}

Var Program::add_scalar() { return variables_++; }

SymmetricVariable Program::add_symmetric(Eigen::Index size, bool psd) {
  SymmetricVariable s(variables_, size);
  variables_ += static_cast<std::size_t>(size * (size + 1) / 2);
  if (psd) add_lmi(s.as_affine());
  return s;
}

void Program::add_equality(const LinearForm& f, double rhs) { equalities_.emplace_back(f, rhs); }

void Program::add_lmi(AffineMatrix m) { lmis_.push_back(std::move(m)); }

ProgramSolution Program::solve(double tol) const {
  using Sparse = Eigen::SparseMatrix<double>;
  const auto K = static_cast<Eigen::Index>(variables_);
  ProgramSolution out;

  // Affine parameterization of the equality set.
  RealVector y0 = RealVector::Zero(K);
  RealMatrix basis;
  if (!equalities_.empty()) {
    const auto q = static_cast<Eigen::Index>(equalities_.size());
    RealMatrix g = RealMatrix::Zero(q, K);
    RealVector h(q);
    for (Eigen::Index r = 0; r < q; ++r) {
      const auto& [form, rhs] = equalities_[static_cast<std::size_t>(r)];
      for (const auto& [v, c] : form.terms()) g(r, static_cast<Eigen::Index>(v)) += c;
      h(r) = rhs - form.constant();
    }
    // Row scaling leaves the solution set unchanged and evens out conditioning.
    for (Eigen::Index r = 0; r < q; ++r) {
      const double n = g.row(r).norm();
      if (n > 0) {
        g.row(r) /= n;
        h(r) /= n;
      }
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(g.transpose());
    qr.setThreshold(1e-11);
    const Eigen::Index rank = qr.rank();
    const RealMatrix qfull = qr.householderQ();
    basis = qfull.rightCols(K - rank);
    // y0 in the row space of g: y0 = Q1 w with (g Q1) w = h.
    const RealMatrix q1 = qfull.leftCols(rank);
    const RealMatrix gq = g * q1;
    const RealVector w = gq.colPivHouseholderQr().solve(h);
    y0 = q1 * w;
    out.equality_residual = (g * y0 - h).norm();
    if (out.equality_residual > 1e-9 * (1.0 + h.norm())) {
      out.status = SdpStatus::infeasible;
      out.note = "linear equality constraints are inconsistent";
      out.values.assign(y0.data(), y0.data() + y0.size());
      return out;
    }
  } else {
    basis = RealMatrix::Identity(K, K);
  }

  SdpProblem reduced;
  RealVector c_full = RealVector::Zero(K);
  for (const auto& [v, c] : objective_.terms()) c_full(static_cast<Eigen::Index>(v)) += c;
  reduced.objective = basis.transpose() * c_full;

  for (const auto& lmi : lmis_) {
    const Eigen::Index s = lmi.size();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(lmi.terms().size() * 2);
    for (const auto& t : lmi.terms()) {
      const auto col = static_cast<Eigen::Index>(t.var);
      trips.emplace_back(t.row + t.col * s, col, t.coef);
      if (t.row != t.col) trips.emplace_back(t.col + t.row * s, col, t.coef);
    }
    Sparse pencil(s * s, K);
    pencil.setFromTriplets(trips.begin(), trips.end());
    LmiBlock blk;
    const RealVector shift = pencil * y0;
    blk.constant = lmi.constant() + Eigen::Map<const RealMatrix>(shift.data(), s, s);
    blk.constant = mat::symmetrized(blk.constant);
    blk.stack = pencil * basis;
    reduced.blocks.push_back(std::move(blk));
  }

  const SdpSolution sol = sdp::solve(reduced, tol);
  const RealVector y = y0 + basis * sol.y;
  out.values.assign(y.data(), y.data() + y.size());
  out.status = sol.status;
  out.objective = c_full.dot(y) + objective_.constant();
  out.gap = sol.gap;
  out.min_block_eig = sol.min_block_eig;
  out.iterations = sol.iterations;
  out.note = sol.note;
  return out;
}

}  // namespace rdec::sdp
