#include "rdec/mat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rdec/error.hpp"

namespace rdec::mat {

ComplexMatrix::ComplexMatrix(RealMatrix re_part, RealMatrix im_part)
    : re(std::move(re_part)), im(std::move(im_part)) {
  if (re.rows() != im.rows() || re.cols() != im.cols()) {
    throw ShapeError("complex matrix: real and imaginary parts differ in shape");
  }
}

namespace {

void require_square(const RealMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw ShapeError(std::string(what) + ": matrix is " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + ", expected square");
  }
}

// Off-diagonal Frobenius norm.
double off_norm(const RealMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

}  // namespace

SymEig sym_eig(const RealMatrix& input) {
  require_square(input, "sym_eig");
  const Eigen::Index n = input.rows();
  const double fro = input.norm();
  if ((input - input.transpose()).norm() > 1e-10 * fro) {
    throw ValidationError("sym_eig: matrix is not symmetric");
  }
  RealMatrix a = symmetrized(input);
  RealMatrix v = RealMatrix::Identity(n, n);

  const double target = 1e-16 * std::max(fro, 1e-300);
  for (int sweep = 0; sweep < 80; ++sweep) {
    if (off_norm(a) <= target) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // a <- R^T a R with R the rotation in the (p, q) plane.
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });
  SymEig out{RealVector(n), RealMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double max_eig(const RealMatrix& a) {
  if (a.size() == 0) return 0.0;
  return sym_eig(a).values(0);
}

double min_eig(const RealMatrix& a) {
  if (a.size() == 0) return 0.0;
  const auto e = sym_eig(a);
  return e.values(e.values.size() - 1);
}

double op_norm(const RealMatrix& a) {
  if (a.size() == 0) return 0.0;
  const RealMatrix gram =
      a.rows() <= a.cols() ? RealMatrix(a * a.transpose()) : RealMatrix(a.transpose() * a);
  return std::sqrt(std::max(0.0, max_eig(symmetrized(gram))));
}

bool is_psd(const RealMatrix& a, double tol) {
  require_square(a, "is_psd");
  if (a.size() == 0) return true;
  if ((a - a.transpose()).norm() > 1e-10 * std::max(1.0, a.norm())) return false;
  const auto e = sym_eig(symmetrized(a));
  const double lo = e.values(e.values.size() - 1);
  const double norm = std::max(std::abs(e.values(0)), std::abs(lo));
  return lo >= -tol * std::max(1.0, norm);
}

RealMatrix symmetrized(const RealMatrix& a) {
  require_square(a, "symmetrized");
  return 0.5 * (a + a.transpose());
}

RealMatrix psd_sqrt(const RealMatrix& a) {
  const auto e = sym_eig(symmetrized(a));
  RealVector d = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * d.asDiagonal() * e.vectors.transpose();
}

RealMatrix sym_pinv(const RealMatrix& a, double rel_tol) {
  const auto e = sym_eig(symmetrized(a));
  const double top = e.values.cwiseAbs().maxCoeff();
  RealVector d(e.values.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    d(k) = std::abs(e.values(k)) > rel_tol * top ? 1.0 / e.values(k) : 0.0;
  }
  return e.vectors * d.asDiagonal() * e.vectors.transpose();
}

RealMatrix range_projection(const RealMatrix& a, double rel_tol) {
  const auto e = sym_eig(symmetrized(a));
  const double top = e.values.size() ? e.values.cwiseAbs().maxCoeff() : 0.0;
  RealMatrix p = RealMatrix::Zero(a.rows(), a.cols());
  for (Eigen::Index k = 0; k < e.values.size(); ++k) {
    if (e.values(k) > rel_tol * top) p += e.vectors.col(k) * e.vectors.col(k).transpose();
  }
  return p;
}

RealMatrix matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i,
                       Eigen::Index j) {
  RealMatrix e = RealMatrix::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

RealMatrix partial_trace(const RealMatrix& m, Eigen::Index n, Eigen::Index k,
                         Factor traced) {
  require_square(m, "partial_trace");
  if (n < 1 || k < 1 || m.rows() != n * k) {
    throw ShapeError("partial_trace: matrix size " + std::to_string(m.rows()) +
                     " is not " + std::to_string(n) + "*" + std::to_string(k));
  }
  if (traced == Factor::first) {
    RealMatrix out = RealMatrix::Zero(k, k);
    for (Eigen::Index i = 0; i < n; ++i) out += m.block(i * k, i * k, k, k);
    return out;
  }
  RealMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m.block(i * k, j * k, k, k).trace();
  }
  return out;
}

RealMatrix realify(const RealMatrix& x, const RealMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ShapeError("realify: parts differ in shape");
  }
  RealMatrix out(2 * x.rows(), 2 * x.cols());
  out << x, -y, y, x;
  return out;
}

RealMatrix realify(const ComplexMatrix& z) { return realify(z.re, z.im); }

std::vector<std::size_t> canonical_shuffle(std::size_t n, std::size_t m) {
  std::vector<std::size_t> perm(2 * n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t p = 0; p < m; ++p) {
        perm[i * 2 * m + s * m + p] = s * n * m + i * m + p;
      }
    }
  }
  return perm;
}

RealMatrix permute(const RealMatrix& a, const std::vector<std::size_t>& perm) {
  require_square(a, "permute");
  if (static_cast<std::size_t>(a.rows()) != perm.size()) {
    throw ShapeError("permute: permutation length does not match matrix size");
  }
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = 0; j < perm.size(); ++j) {
      out(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j])) =
          a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

bool all_finite(const RealMatrix& a) { return a.allFinite(); }

}  // namespace rdec::mat
