#pragma once

// Concrete finite-dimensional operator systems (unital, transpose-closed
// subspaces of M_n(R)), linear maps between them, and the complexification
// functor V -> R_V = { c(x, y) : x, y in V } inside M_2n(R).

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rdec/mat.hpp"

namespace rdec::opsys {

using mat::RealMatrix;
using mat::RealVector;

enum class SystemKind {
  full_real,
  ell_inf,
  quaternion,
  complex_full,
  span,
  complexified,
  paulsen,
  direct_sum,
};

std::string to_string(SystemKind kind);

class MatrixSystem;
using SystemPtr = std::shared_ptr<const MatrixSystem>;

class MatrixSystem {
 public:
  struct Spec {
    Eigen::Index ambient = 0;
    std::vector<RealMatrix> basis;
    std::optional<RealMatrix> complex_structure;
    std::string label;
    SystemKind kind = SystemKind::span;
    // Size parameter of the named kinds (n of full_real(n) etc.).
    Eigen::Index order = 0;
    // Underlying real system for complexified kinds.
    SystemPtr real_form;
  };

  // Validates every invariant; throws ValidationError naming the failed one.
  static SystemPtr create(Spec spec);

  Eigen::Index ambient() const { return spec_.ambient; }
  std::size_t dim() const { return spec_.basis.size(); }
  const std::vector<RealMatrix>& basis() const { return spec_.basis; }
  // Frobenius-orthonormal basis of the same span.
  const std::vector<RealMatrix>& orthonormal() const { return orthonormal_; }
  // orthonormal()[a] = sum_b from_basis()(b, a) * basis()[b]
  const RealMatrix& from_basis() const { return from_basis_; }
  // Orthonormal basis of the Frobenius complement of the span in M_n.
  const std::vector<RealMatrix>& complement() const { return complement_; }

  const std::optional<RealMatrix>& complex_structure() const { return spec_.complex_structure; }
  bool is_complex() const { return spec_.complex_structure.has_value(); }
  const SystemPtr& real_form() const { return spec_.real_form; }
  const std::string& label() const { return spec_.label; }
  SystemKind kind() const { return spec_.kind; }
  Eigen::Index order() const { return spec_.order; }
  bool is_full() const {
    return dim() == static_cast<std::size_t>(ambient() * ambient());
  }

  // Coordinates of x with respect to basis(); throws ValidationError when x
  // is farther than tol * max(1, ||x||) from the span.
  RealVector coordinates(const RealMatrix& x, double tol = 1e-9) const;
  // Frobenius distance from x to the span.
  double span_residual(const RealMatrix& x) const;
  bool contains(const RealMatrix& x, double tol = 1e-9) const;

  // Same ambient size and same span.
  bool same_span(const MatrixSystem& other, double tol = 1e-9) const;

 private:
  explicit MatrixSystem(Spec spec) : spec_(std::move(spec)) {}

  Spec spec_;
  std::vector<RealMatrix> orthonormal_;
  RealMatrix from_basis_;
  RealMatrix coord_solve_;  // user coordinates = coord_solve_ * (orthonormal coordinates)
  std::vector<RealMatrix> complement_;
};

// Named systems. Canonical basis orders: full_real uses E_ij row-major,
// ell_inf uses e_1..e_n, quaternion uses (1, i, j, k), complex_full uses
// c(E_ij, 0) row-major followed by c(0, E_ij).
SystemPtr full_real(Eigen::Index n);
SystemPtr ell_inf(Eigen::Index n);
SystemPtr quaternion();
SystemPtr complex_full(Eigen::Index n);
SystemPtr span(Eigen::Index n, std::vector<RealMatrix> basis, std::string label = "span");

// Left regular representation of the quaternion with coordinates (a, b, c, d)
// = a + b i + c j + d k on R^4.
RealMatrix quaternion_matrix(double a, double b, double c, double d);

SystemPtr complexify_system(const SystemPtr& v);
// Same span with the complex structure forgotten.
SystemPtr underlying_real(const SystemPtr& v);

enum class PaulsenDiagonal { scalar, full };

// { [[a, x], [y^T, b]] } in M_{p+q}(R) with x, y in span(x_basis).
SystemPtr paulsen_system(const std::vector<RealMatrix>& x_basis, Eigen::Index p,
                         Eigen::Index q, PaulsenDiagonal diag);

SystemPtr direct_sum(const SystemPtr& v, const SystemPtr& w);

// M_k(W) inside M_{k n}(R).
SystemPtr amplify(const SystemPtr& w, Eigen::Index k);

class LinearMap {
 public:
  // images[a] is the image of domain->basis()[a]; each must lie in the
  // codomain span.
  LinearMap(SystemPtr domain, SystemPtr codomain, std::vector<RealMatrix> images);

  static LinearMap identity(const SystemPtr& v);
  static LinearMap zero(const SystemPtr& domain, const SystemPtr& codomain);
  // Map given by a function on the domain basis.
  template <typename F>
  static LinearMap from_function(const SystemPtr& domain, const SystemPtr& codomain, F&& f) {
    std::vector<RealMatrix> images;
    images.reserve(domain->dim());
    for (const auto& b : domain->basis()) images.push_back(f(b));
    return LinearMap(domain, codomain, std::move(images));
  }

  const SystemPtr& domain() const { return domain_; }
  const SystemPtr& codomain() const { return codomain_; }
  const std::vector<RealMatrix>& images() const { return images_; }

  RealMatrix apply(const RealMatrix& x) const;
  // Images of domain()->orthonormal().
  std::vector<RealMatrix> orthonormal_images() const;

  LinearMap operator+(const LinearMap& other) const;
  LinearMap operator-(const LinearMap& other) const;
  LinearMap operator*(double s) const;

  // Largest Frobenius difference over the domain basis.
  double distance(const LinearMap& other) const;
  // Largest Frobenius norm of an image of an orthonormal basis element.
  double coefficient_norm() const;

 private:
  SystemPtr domain_;
  SystemPtr codomain_;
  std::vector<RealMatrix> images_;
};

inline LinearMap operator*(double s, const LinearMap& u) { return u * s; }

// after o before
LinearMap compose(const LinearMap& after, const LinearMap& before);

// Same map with a different (containing) codomain.
LinearMap with_codomain(const LinearMap& u, const SystemPtr& codomain);
// Restriction of u to a subsystem of its domain.
LinearMap restrict_to(const LinearMap& u, const SystemPtr& subsystem);

LinearMap complexify_map(const LinearMap& u);

enum class Canonical { kappa, rho, sigma, theta };

// kappa: V -> V_c (v real); rho, sigma: V_c -> V; theta: V_c -> V_c.
LinearMap canonical_map(Canonical which, const SystemPtr& v);

// Coordinate projection of v (+) w onto the named summand (0 or 1).
LinearMap direct_sum_projection(const SystemPtr& v, const SystemPtr& w, int which);
// x -> u(x) (+) v(x)
LinearMap direct_sum_map(const LinearMap& u, const LinearMap& v);

// x -> x^T on a transpose-closed system.
LinearMap transpose_map(const SystemPtr& v);
// x -> alpha^T x beta on full_real(n).
LinearMap conjugation_map(const RealMatrix& alpha, const RealMatrix& beta);
// x -> alpha u(x) beta, codomain the full algebra of the result size.
LinearMap multiply_map(const RealMatrix& alpha, const LinearMap& u, const RealMatrix& beta);
// Entrywise imaginary part on complex_full(n): c(x, y) -> c(y, 0).
LinearMap imaginary_part_map(Eigen::Index n);
// Entrywise real part on complex_full(n): c(x, y) -> c(x, 0).
LinearMap real_part_map(Eigen::Index n);
// The *-homomorphism complexify(underlying_real(complex_full(n))) ->
// complex_full(n),
// c(z1, z2) -> z1 + J z2, with J = realify(i I).
LinearMap complex_multiplication_map(Eigen::Index n);

}  // namespace rdec::opsys
