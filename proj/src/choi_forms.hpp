#pragma once

// Affine expressions for the images of an ambient extension whose Choi matrix
// is a program variable. The Choi matrix of Phi: M_n -> M_M is indexed
// J[i*M + p, j*M + q] = Phi(E_ij)(p, q).

#include "rdec/mat.hpp"
#include "rdec/program.hpp"

namespace rdec::detail {

using mat::RealMatrix;
using sdp::AffineMatrix;
using sdp::LinearForm;
using sdp::SymmetricVariable;

inline constexpr double kSparseCut = 1e-15;

// Phi(x)(p, q).
inline LinearForm image_entry(const SymmetricVariable& j, Eigen::Index out, const RealMatrix& x,
                              Eigen::Index p, Eigen::Index q) {
  LinearForm f;
  for (Eigen::Index a = 0; a < x.rows(); ++a) {
    for (Eigen::Index b = 0; b < x.cols(); ++b) {
      const double c = x(a, b);
      if (std::abs(c) > kSparseCut) f.add(j.at(a * out + p, b * out + q), c);
    }
  }
  return f;
}

// <w, Phi(x)[off.., off..]> over a size x size diagonal corner.
inline LinearForm corner_pairing(const SymmetricVariable& j, Eigen::Index out, const RealMatrix& x,
                                 Eigen::Index off, const RealMatrix& w) {
  LinearForm f;
  for (Eigen::Index p = 0; p < w.rows(); ++p) {
    for (Eigen::Index q = 0; q < w.cols(); ++q) {
      if (std::abs(w(p, q)) > kSparseCut) f.add(image_entry(j, out, x, off + p, off + q), w(p, q));
    }
  }
  return f;
}

// Adds to m (at offset moff) the scale * diagonal corner of Phi(I_n)
// starting at row off with the given size.
inline void add_identity_image(AffineMatrix& m, Eigen::Index moff, const SymmetricVariable& j, Eigen::Index n,
                               Eigen::Index out, Eigen::Index off, Eigen::Index size, double scale) {
  for (Eigen::Index p = 0; p < size; ++p) {
    for (Eigen::Index q = p; q < size; ++q) {
      for (Eigen::Index i = 0; i < n; ++i) m.add(moff + p, moff + q, j.at(i * out + off + p, i * out + off + q), scale);
    }
  }
}

// Phi(x) for a numeric Choi matrix.
inline RealMatrix apply_choi(const RealMatrix& choi, Eigen::Index n, Eigen::Index out, const RealMatrix& x) {
  RealMatrix y = RealMatrix::Zero(out, out);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      if (x(a, b) != 0.0) y += x(a, b) * choi.block(a * out, b * out, out, out);
    }
  }
  return y;
}

}  // namespace rdec::detail
