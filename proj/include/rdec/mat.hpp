#pragma once

// Dense real-matrix kernel: symmetric spectra, norms, tensor plumbing and the
// realification c(x, y) = [[x, -y], [y, x]] of complex matrices.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace rdec::mat {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Default relative tolerance for PSD verdicts: a is PSD iff
// lambda_min(a) >= -tol * max(1, ||a||).
inline constexpr double kPsdTol = 1e-9;

struct ComplexMatrix {
  RealMatrix re;
  RealMatrix im;

  ComplexMatrix() = default;
  ComplexMatrix(RealMatrix re_part, RealMatrix im_part);

  Eigen::Index rows() const { return re.rows(); }
  Eigen::Index cols() const { return re.cols(); }
};

struct SymEig {
  RealVector values;   // descending
  RealMatrix vectors;  // columns are orthonormal eigenvectors
};

// Cyclic Jacobi eigensolver. Throws ShapeError for non-square input and
// ValidationError when a is not symmetric within 1e-10 * ||a||_F.
SymEig sym_eig(const RealMatrix& a);

double max_eig(const RealMatrix& a);
double min_eig(const RealMatrix& a);

// Largest singular value.
double op_norm(const RealMatrix& a);

bool is_psd(const RealMatrix& a, double tol = kPsdTol);

// (a + a^T) / 2
RealMatrix symmetrized(const RealMatrix& a);

// Spectral square root of a PSD matrix; negative eigenvalues are clipped.
RealMatrix psd_sqrt(const RealMatrix& a);

// Moore-Penrose inverse of a symmetric matrix, eigenvalues below
// rel_tol * lambda_max treated as zero.
RealMatrix sym_pinv(const RealMatrix& a, double rel_tol = 1e-10);

// Orthogonal projection onto the range of a symmetric PSD matrix.
RealMatrix range_projection(const RealMatrix& a, double rel_tol = 1e-10);

RealMatrix matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i,
                       Eigen::Index j);
RealMatrix kron(const RealMatrix& a, const RealMatrix& b);

enum class Factor { first, second };

// Partial trace of m in M_n (x) M_k over the named factor.
RealMatrix partial_trace(const RealMatrix& m, Eigen::Index n, Eigen::Index k,
                         Factor traced);

// c(x, y) = [[x, -y], [y, x]].
RealMatrix realify(const RealMatrix& x, const RealMatrix& y);
RealMatrix realify(const ComplexMatrix& z);

// Index permutation taking M_n (x) M_2 (x) M_m ordering to
// M_2 (x) M_n (x) M_m: result[source_index] = target_index.
std::vector<std::size_t> canonical_shuffle(std::size_t n, std::size_t m);

// P a P^T for the permutation matrix P sending index i to perm[i].
RealMatrix permute(const RealMatrix& a, const std::vector<std::size_t>& perm);

// Frobenius inner product.
inline double inner(const RealMatrix& a, const RealMatrix& b) {
  return (a.array() * b.array()).sum();
}

bool all_finite(const RealMatrix& a);

}  // namespace rdec::mat
