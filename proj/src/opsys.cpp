#include "rdec/opsys.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdec/error.hpp"

namespace rdec::opsys {

namespace {

constexpr double kStructureTol = 1e-10;

RealVector vec(const RealMatrix& m) { return Eigen::Map<const RealVector>(m.data(), m.size()); }

RealMatrix unvec(const RealVector& v, Eigen::Index n) {
  return Eigen::Map<const RealMatrix>(v.data(), n, n);
}

RealMatrix block_diag(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out = RealMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

MatrixSystem::Spec complexified_spec(const SystemPtr& v) {
  if (v->is_complex()) {
    throw DomainError("complexify: system '" + v->label() + "' already carries a complex structure");
  }
  const Eigen::Index n = v->ambient();
  const RealMatrix zero = RealMatrix::Zero(n, n);
  MatrixSystem::Spec spec;
  spec.ambient = 2 * n;
  for (const auto& b : v->basis()) spec.basis.push_back(mat::realify(b, zero));
  for (const auto& b : v->basis()) spec.basis.push_back(mat::realify(zero, b));
  spec.complex_structure = mat::realify(zero, RealMatrix::Identity(n, n));
  spec.label = "complexify(" + v->label() + ")";
  spec.kind = SystemKind::complexified;
  spec.real_form = v;
  return spec;
}

const SystemPtr& require_real_form(const SystemPtr& v, const char* what) {
  if (!v->real_form()) {
    throw DomainError(std::string(what) + ": system '" + v->label() +
                      "' is not a complexification");
  }
  return v->real_form();
}

}  // namespace

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::full_real:
      return "full_real";
    case SystemKind::ell_inf:
      return "ell_inf";
    case SystemKind::quaternion:
      return "quaternion";
    case SystemKind::complex_full:
      return "complex_full";
    case SystemKind::span:
      return "span";
    case SystemKind::complexified:
      return "complexified";
    case SystemKind::paulsen:
      return "paulsen";
    case SystemKind::direct_sum:
      return "direct_sum";
  }
  return "span";
}

SystemPtr MatrixSystem::create(Spec spec) {
  const Eigen::Index n = spec.ambient;
  if (n < 1) throw ValidationError("system: ambient size must be positive");
  if (spec.basis.empty()) throw ValidationError("system: basis is empty");
  for (std::size_t a = 0; a < spec.basis.size(); ++a) {
    const auto& b = spec.basis[a];
    if (b.rows() != n || b.cols() != n) {
      throw ShapeError("system: basis element " + std::to_string(a) + " is " +
                       std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                       ", ambient is " + std::to_string(n));
    }
    if (!b.allFinite()) {
      throw ValidationError("system: basis element " + std::to_string(a) + " is not finite");
    }
  }
  const auto d = static_cast<Eigen::Index>(spec.basis.size());
  if (d > n * n) throw ValidationError("system: more basis elements than ambient dimension");

  // Independence via the Gram determinant of the normalized basis.
  RealMatrix normalized(n * n, d);
  RealMatrix raw(n * n, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    raw.col(a) = vec(spec.basis[static_cast<std::size_t>(a)]);
    const double nrm = raw.col(a).norm();
    if (nrm == 0.0) throw ValidationError("system: basis element " + std::to_string(a) + " is zero (linearly dependent basis)");
    normalized.col(a) = raw.col(a) / nrm;
  }
  const double gram_det = (normalized.transpose() * normalized).determinant();
  if (!(gram_det > 1e-12)) {
    throw ValidationError("system: basis is linearly dependent (Gram determinant " +
                          std::to_string(gram_det) + ")");
  }

  auto sys = std::shared_ptr<MatrixSystem>(new MatrixSystem(std::move(spec)));
  Eigen::HouseholderQR<RealMatrix> qr(raw);
  const RealMatrix qfull = qr.householderQ();
  const RealMatrix q = qfull.leftCols(d);
  RealMatrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  const RealMatrix rinv = r.triangularView<Eigen::Upper>().solve(RealMatrix::Identity(d, d));
  sys->from_basis_ = rinv;
  sys->coord_solve_ = rinv;
  for (Eigen::Index a = 0; a < d; ++a) sys->orthonormal_.push_back(unvec(q.col(a), n));
  for (Eigen::Index a = d; a < n * n; ++a) sys->complement_.push_back(unvec(qfull.col(a), n));

  const RealMatrix id = RealMatrix::Identity(n, n);
  if (sys->span_residual(id) > kStructureTol * std::sqrt(static_cast<double>(n))) {
    throw ValidationError("system '" + sys->label() + "': identity is not in the span");
  }
  for (std::size_t a = 0; a < sys->basis().size(); ++a) {
    const auto& b = sys->basis()[a];
    if (sys->span_residual(b.transpose()) > kStructureTol * std::max(1.0, b.norm())) {
      throw ValidationError("system '" + sys->label() + "': span is not closed under transpose (element " +
                            std::to_string(a) + ")");
    }
  }
  if (sys->is_complex()) {
    const RealMatrix& j = *sys->complex_structure();
    if (j.rows() != n || j.cols() != n) throw ShapeError("system: complex structure has the wrong size");
    if ((j + j.transpose()).norm() > kStructureTol * std::sqrt(static_cast<double>(n))) {
      throw ValidationError("system '" + sys->label() + "': complex structure is not antisymmetric");
    }
    if ((j * j + id).norm() > kStructureTol * std::sqrt(static_cast<double>(n))) {
      throw ValidationError("system '" + sys->label() + "': complex structure does not square to -I");
    }
    for (const auto& b : sys->basis()) {
      if (sys->span_residual(j * b) > kStructureTol * std::max(1.0, b.norm())) {
        throw ValidationError("system '" + sys->label() + "': span is not invariant under the complex structure");
      }
    }
  }
  return sys;
}

RealVector MatrixSystem::coordinates(const RealMatrix& x, double tol) const {
  if (x.rows() != ambient() || x.cols() != ambient()) {
    throw ShapeError("coordinates: element is " + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()) + ", ambient is " + std::to_string(ambient()));
  }
  const auto d = static_cast<Eigen::Index>(dim());
  RealVector ortho(d);
  for (Eigen::Index a = 0; a < d; ++a) ortho(a) = mat::inner(orthonormal_[static_cast<std::size_t>(a)], x);
  RealMatrix proj = RealMatrix::Zero(ambient(), ambient());
  for (Eigen::Index a = 0; a < d; ++a) proj += ortho(a) * orthonormal_[static_cast<std::size_t>(a)];
  if ((x - proj).norm() > tol * std::max(1.0, x.norm())) {
    throw ValidationError("element does not lie in the span of system '" + label() + "'");
  }
  return coord_solve_ * ortho;
}

double MatrixSystem::span_residual(const RealMatrix& x) const {
  RealMatrix proj = RealMatrix::Zero(ambient(), ambient());
  for (const auto& q : orthonormal_) proj += mat::inner(q, x) * q;
  return (x - proj).norm();
}

bool MatrixSystem::contains(const RealMatrix& x, double tol) const {
  if (x.rows() != ambient() || x.cols() != ambient()) return false;
  return span_residual(x) <= tol * std::max(1.0, x.norm());
}

bool MatrixSystem::same_span(const MatrixSystem& other, double tol) const {
  if (this == &other) return true;
  if (ambient() != other.ambient() || dim() != other.dim()) return false;
  return std::all_of(other.orthonormal_.begin(), other.orthonormal_.end(),
                     [&](const RealMatrix& q) { return contains(q, tol); });
}

SystemPtr full_real(Eigen::Index n) {
  MatrixSystem::Spec spec;
  spec.ambient = n;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) spec.basis.push_back(mat::matrix_unit(n, n, i, j));
  }
  spec.label = "full_real(" + std::to_string(n) + ")";
  spec.kind = SystemKind::full_real;
  spec.order = n;
  return MatrixSystem::create(std::move(spec));
}

SystemPtr ell_inf(Eigen::Index n) {
  MatrixSystem::Spec spec;
  spec.ambient = n;
  for (Eigen::Index i = 0; i < n; ++i) spec.basis.push_back(mat::matrix_unit(n, n, i, i));
  spec.label = "ell_inf(" + std::to_string(n) + ")";
  spec.kind = SystemKind::ell_inf;
  spec.order = n;
  return MatrixSystem::create(std::move(spec));
}

RealMatrix quaternion_matrix(double a, double b, double c, double d) {
  // Columns are q * 1, q * i, q * j, q * k in coordinates (1, i, j, k).
  RealMatrix m(4, 4);
  m << a, -b, -c, -d,
       b,  a, -d,  c,
       c,  d,  a, -b,
       d, -c,  b,  a;
  return m;
}

SystemPtr quaternion() {
  MatrixSystem::Spec spec;
  spec.ambient = 4;
  spec.basis = {quaternion_matrix(1, 0, 0, 0), quaternion_matrix(0, 1, 0, 0),
                quaternion_matrix(0, 0, 1, 0), quaternion_matrix(0, 0, 0, 1)};
  spec.label = "quaternion";
  spec.kind = SystemKind::quaternion;
  spec.order = 1;
  return MatrixSystem::create(std::move(spec));
}

SystemPtr complex_full(Eigen::Index n) {
  auto spec = complexified_spec(full_real(n));
  spec.label = "complex_full(" + std::to_string(n) + ")";
  spec.kind = SystemKind::complex_full;
  spec.order = n;
  return MatrixSystem::create(std::move(spec));
}

SystemPtr span(Eigen::Index n, std::vector<RealMatrix> basis, std::string label) {
  MatrixSystem::Spec spec;
  spec.ambient = n;
  spec.basis = std::move(basis);
  spec.label = std::move(label);
  spec.kind = SystemKind::span;
  return MatrixSystem::create(std::move(spec));
}

SystemPtr complexify_system(const SystemPtr& v) { return MatrixSystem::create(complexified_spec(v)); }

SystemPtr underlying_real(const SystemPtr& v) {
  MatrixSystem::Spec spec;
  spec.ambient = v->ambient();
  spec.basis = v->basis();
  spec.label = "real(" + v->label() + ")";
  spec.kind = SystemKind::span;
  return MatrixSystem::create(std::move(spec));
}

SystemPtr paulsen_system(const std::vector<RealMatrix>& x_basis, Eigen::Index p, Eigen::Index q,
                         PaulsenDiagonal diag) {
  if (p < 1 || q < 1) throw ShapeError("paulsen_system: corner sizes must be positive");
  MatrixSystem::Spec spec;
  spec.ambient = p + q;
  const RealMatrix zp = RealMatrix::Zero(p, p);
  const RealMatrix zq = RealMatrix::Zero(q, q);
  if (diag == PaulsenDiagonal::scalar) {
    spec.basis.push_back(block_diag(RealMatrix::Identity(p, p), zq));
    spec.basis.push_back(block_diag(zp, RealMatrix::Identity(q, q)));
  } else {
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = 0; j < p; ++j) spec.basis.push_back(block_diag(mat::matrix_unit(p, p, i, j), zq));
    for (Eigen::Index i = 0; i < q; ++i)
      for (Eigen::Index j = 0; j < q; ++j) spec.basis.push_back(block_diag(zp, mat::matrix_unit(q, q, i, j)));
  }
  for (const auto& x : x_basis) {
    if (x.rows() != p || x.cols() != q) throw ShapeError("paulsen_system: corner element has the wrong shape");
    RealMatrix upper = RealMatrix::Zero(p + q, p + q);
    upper.topRightCorner(p, q) = x;
    spec.basis.push_back(upper);
  }
  for (const auto& x : x_basis) {
    RealMatrix lower = RealMatrix::Zero(p + q, p + q);
    lower.bottomLeftCorner(q, p) = x.transpose();
    spec.basis.push_back(lower);
  }
  spec.label = "paulsen(" + std::to_string(p) + "," + std::to_string(q) + ")";
  spec.kind = SystemKind::paulsen;
  return MatrixSystem::create(std::move(spec));
}

SystemPtr direct_sum(const SystemPtr& v, const SystemPtr& w) {
  MatrixSystem::Spec spec;
  spec.ambient = v->ambient() + w->ambient();
  const RealMatrix zv = RealMatrix::Zero(v->ambient(), v->ambient());
  const RealMatrix zw = RealMatrix::Zero(w->ambient(), w->ambient());
  for (const auto& b : v->basis()) spec.basis.push_back(block_diag(b, zw));
  for (const auto& b : w->basis()) spec.basis.push_back(block_diag(zv, b));
  if (v->is_complex() && w->is_complex()) {
    spec.complex_structure = block_diag(*v->complex_structure(), *w->complex_structure());
  }
  spec.label = v->label() + "+" + w->label();
  spec.kind = SystemKind::direct_sum;
  return MatrixSystem::create(std::move(spec));
}

SystemPtr amplify(const SystemPtr& w, Eigen::Index k) {
  MatrixSystem::Spec spec;
  spec.ambient = k * w->ambient();
  for (Eigen::Index s = 0; s < k; ++s) {
    for (Eigen::Index t = 0; t < k; ++t) {
      for (const auto& b : w->basis()) spec.basis.push_back(mat::kron(mat::matrix_unit(k, k, s, t), b));
    }
  }
  if (w->is_complex()) {
    spec.complex_structure = mat::kron(RealMatrix::Identity(k, k), *w->complex_structure());
  }
  spec.label = "M" + std::to_string(k) + "(" + w->label() + ")";
  spec.kind = w->is_full() ? SystemKind::full_real : SystemKind::span;
  if (w->is_full()) spec.order = spec.ambient;
  return MatrixSystem::create(std::move(spec));
}

LinearMap::LinearMap(SystemPtr domain, SystemPtr codomain, std::vector<RealMatrix> images)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), images_(std::move(images)) {
  if (!domain_ || !codomain_) throw ValidationError("linear map: missing domain or codomain");
  if (images_.size() != domain_->dim()) {
    throw ShapeError("linear map: " + std::to_string(images_.size()) + " images for a domain of dimension " +
                     std::to_string(domain_->dim()));
  }
  const Eigen::Index m = codomain_->ambient();
  for (std::size_t a = 0; a < images_.size(); ++a) {
    const auto& img = images_[a];
    if (img.rows() != m || img.cols() != m) {
      throw ShapeError("linear map: image " + std::to_string(a) + " is " + std::to_string(img.rows()) + "x" +
                       std::to_string(img.cols()) + ", codomain ambient is " + std::to_string(m));
    }
    if (!img.allFinite()) throw ValidationError("linear map: image " + std::to_string(a) + " is not finite");
    if (!codomain_->is_full() && codomain_->span_residual(img) > 1e-10 * std::max(1.0, img.norm())) {
      throw ValidationError("linear map: image " + std::to_string(a) + " is not in codomain '" +
                            codomain_->label() + "'");
    }
  }
}

LinearMap LinearMap::identity(const SystemPtr& v) { return LinearMap(v, v, v->basis()); }

LinearMap LinearMap::zero(const SystemPtr& domain, const SystemPtr& codomain) {
  const Eigen::Index m = codomain->ambient();
  return LinearMap(domain, codomain, std::vector<RealMatrix>(domain->dim(), RealMatrix::Zero(m, m)));
}

RealMatrix LinearMap::apply(const RealMatrix& x) const {
  const RealVector c = domain_->coordinates(x);
  const Eigen::Index m = codomain_->ambient();
  RealMatrix out = RealMatrix::Zero(m, m);
  for (Eigen::Index a = 0; a < c.size(); ++a) out += c(a) * images_[static_cast<std::size_t>(a)];
  return out;
}

std::vector<RealMatrix> LinearMap::orthonormal_images() const {
  const auto& t = domain_->from_basis();
  const Eigen::Index m = codomain_->ambient();
  std::vector<RealMatrix> out;
  for (Eigen::Index a = 0; a < t.cols(); ++a) {
    RealMatrix img = RealMatrix::Zero(m, m);
    for (Eigen::Index b = 0; b < t.rows(); ++b) {
      if (t(b, a) != 0.0) img += t(b, a) * images_[static_cast<std::size_t>(b)];
    }
    out.push_back(std::move(img));
  }
  return out;
}

namespace {

void require_same_systems(const LinearMap& u, const LinearMap& v, const char* what) {
  if (!u.domain()->same_span(*v.domain()) || !u.codomain()->same_span(*v.codomain())) {
    throw DomainError(std::string(what) + ": maps act between different systems");
  }
}

}  // namespace

LinearMap LinearMap::operator+(const LinearMap& other) const {
  require_same_systems(*this, other, "map sum");
  std::vector<RealMatrix> imgs;
  for (const auto& b : domain_->basis()) imgs.push_back(apply(b) + other.apply(b));
  return LinearMap(domain_, codomain_, std::move(imgs));
}

LinearMap LinearMap::operator-(const LinearMap& other) const { return *this + other * -1.0; }

LinearMap LinearMap::operator*(double s) const {
  std::vector<RealMatrix> imgs;
  for (const auto& img : images_) imgs.push_back(s * img);
  return LinearMap(domain_, codomain_, std::move(imgs));
}

double LinearMap::distance(const LinearMap& other) const {
  require_same_systems(*this, other, "map distance");
  double d = 0.0;
  for (const auto& b : domain_->basis()) d = std::max(d, (apply(b) - other.apply(b)).norm());
  return d;
}

double LinearMap::coefficient_norm() const {
  double d = 0.0;
  for (const auto& img : orthonormal_images()) d = std::max(d, img.norm());
  return d;
}

LinearMap compose(const LinearMap& after, const LinearMap& before) {
  if (!before.codomain()->same_span(*after.domain())) {
    throw DomainError("compose: codomain '" + before.codomain()->label() + "' does not match domain '" +
                      after.domain()->label() + "'");
  }
  std::vector<RealMatrix> imgs;
  for (const auto& img : before.images()) imgs.push_back(after.apply(img));
  return LinearMap(before.domain(), after.codomain(), std::move(imgs));
}

LinearMap with_codomain(const LinearMap& u, const SystemPtr& codomain) {
  return LinearMap(u.domain(), codomain, u.images());
}

LinearMap restrict_to(const LinearMap& u, const SystemPtr& subsystem) {
  std::vector<RealMatrix> imgs;
  for (const auto& b : subsystem->basis()) imgs.push_back(u.apply(b));
  return LinearMap(subsystem, u.codomain(), std::move(imgs));
}

LinearMap complexify_map(const LinearMap& u) {
  const auto dom = complexify_system(u.domain());
  const auto cod = complexify_system(u.codomain());
  const Eigen::Index m = u.codomain()->ambient();
  const RealMatrix zero = RealMatrix::Zero(m, m);
  std::vector<RealMatrix> imgs;
  for (const auto& img : u.images()) imgs.push_back(mat::realify(img, zero));
  for (const auto& img : u.images()) imgs.push_back(mat::realify(zero, img));
  return LinearMap(dom, cod, std::move(imgs));
}

LinearMap canonical_map(Canonical which, const SystemPtr& v) {
  if (which == Canonical::kappa) {
    const auto vc = complexify_system(v);
    const RealMatrix zero = RealMatrix::Zero(v->ambient(), v->ambient());
    return LinearMap::from_function(v, vc, [&](const RealMatrix& b) { return mat::realify(b, zero); });
  }
  const auto& real = require_real_form(v, "canonical_map");
  const Eigen::Index n = real->ambient();
  switch (which) {
    case Canonical::rho:
      return LinearMap::from_function(v, real, [&](const RealMatrix& b) { return RealMatrix(b.topLeftCorner(n, n)); });
    case Canonical::sigma:
      return LinearMap::from_function(v, real,
                                      [&](const RealMatrix& b) { return RealMatrix(b.bottomLeftCorner(n, n)); });
    case Canonical::theta:
      return LinearMap::from_function(v, v, [&](const RealMatrix& b) {
        return mat::realify(b.topLeftCorner(n, n), -b.bottomLeftCorner(n, n));
      });
    case Canonical::kappa:
      break;
  }
  throw DomainError("canonical_map: unknown map");
}

LinearMap direct_sum_projection(const SystemPtr& v, const SystemPtr& w, int which) {
  const auto sum = direct_sum(v, w);
  const Eigen::Index nv = v->ambient();
  const Eigen::Index nw = w->ambient();
  if (which == 0) {
    return LinearMap::from_function(sum, v, [&](const RealMatrix& b) { return RealMatrix(b.topLeftCorner(nv, nv)); });
  }
  return LinearMap::from_function(sum, w, [&](const RealMatrix& b) { return RealMatrix(b.bottomRightCorner(nw, nw)); });
}

LinearMap direct_sum_map(const LinearMap& u, const LinearMap& v) {
  if (!u.domain()->same_span(*v.domain())) throw DomainError("direct_sum_map: maps have different domains");
  const auto cod = direct_sum(u.codomain(), v.codomain());
  return LinearMap::from_function(u.domain(), cod,
                                  [&](const RealMatrix& b) { return block_diag(u.apply(b), v.apply(b)); });
}

LinearMap transpose_map(const SystemPtr& v) {
  return LinearMap::from_function(v, v, [](const RealMatrix& b) { return RealMatrix(b.transpose()); });
}

LinearMap conjugation_map(const RealMatrix& alpha, const RealMatrix& beta) {
  if (alpha.rows() != beta.rows() || alpha.cols() != beta.cols()) {
    throw ShapeError("conjugation_map: alpha and beta differ in shape");
  }
  return LinearMap::from_function(full_real(alpha.rows()), full_real(alpha.cols()),
                                  [&](const RealMatrix& x) { return RealMatrix(alpha.transpose() * x * beta); });
}

LinearMap multiply_map(const RealMatrix& alpha, const LinearMap& u, const RealMatrix& beta) {
  const Eigen::Index m = u.codomain()->ambient();
  if (alpha.cols() != m || beta.rows() != m || alpha.rows() != beta.cols()) {
    throw ShapeError("multiply_map: alpha u(x) beta is not a square product");
  }
  return LinearMap::from_function(u.domain(), full_real(alpha.rows()),
                                  [&](const RealMatrix& x) { return RealMatrix(alpha * u.apply(x) * beta); });
}

LinearMap imaginary_part_map(Eigen::Index n) {
  const auto v = complex_full(n);
  return LinearMap::from_function(v, v, [&](const RealMatrix& b) {
    return mat::realify(b.bottomLeftCorner(n, n), RealMatrix::Zero(n, n));
  });
}

LinearMap real_part_map(Eigen::Index n) {
  const auto v = complex_full(n);
  return LinearMap::from_function(v, v, [&](const RealMatrix& b) {
    return mat::realify(b.topLeftCorner(n, n), RealMatrix::Zero(n, n));
  });
}

LinearMap complex_multiplication_map(Eigen::Index n) {
  const auto w = complex_full(n);
  const auto vc = complexify_system(underlying_real(w));
  const RealMatrix& j = *w->complex_structure();
  const Eigen::Index m = 2 * n;
  return LinearMap::from_function(vc, w, [&](const RealMatrix& b) {
    return RealMatrix(b.topLeftCorner(m, m) + j * b.bottomLeftCorner(m, m));
  });
}

}  // namespace rdec::opsys
