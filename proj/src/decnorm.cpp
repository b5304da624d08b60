#include "rdec/decnorm.hpp"

#include <algorithm>
#include <cmath>

#include "choi_forms.hpp"
#include "rdec/error.hpp"
#include "rdec/program.hpp"

namespace rdec::decnorm {

namespace {

using sdp::AffineMatrix;
using sdp::LinearForm;
using sdp::Program;
using sdp::SymmetricVariable;

constexpr double kStructureTol = 1e-10;

Certificate certify(const sdp::ProgramSolution& sol, const Program& prog) {
  Certificate c;
  c.status = sol.status;
  c.gap = sol.gap;
  c.min_block_eig = sol.min_block_eig;
  c.equality_residual = sol.equality_residual;
  c.iterations = sol.iterations;
  c.variables = prog.variable_count();
  c.equalities = prog.equality_count();
  c.note = sol.note;
  return c;
}

RealMatrix project(const SystemPtr& w, const RealMatrix& x) {
  if (w->is_full()) return x;
  RealMatrix out = RealMatrix::Zero(x.rows(), x.cols());
  for (const auto& q : w->orthonormal()) out += mat::inner(q, x) * q;
  return out;
}

// Diagonal corner (offset off, size m) of Phi restricted to the domain basis.
LinearMap corner_map(const RealMatrix& choi, const LinearMap& u, Eigen::Index out, Eigen::Index off) {
  const Eigen::Index n = u.domain()->ambient();
  const Eigen::Index m = u.codomain()->ambient();
  return LinearMap::from_function(u.domain(), u.codomain(), [&](const RealMatrix& b) {
    const RealMatrix img = detail::apply_choi(choi, n, out, b);
    return project(u.codomain(), img.block(off, off, m, m));
  });
}

// Corner membership of Phi(q_a) in the codomain span.
void add_membership(Program& prog, const SymmetricVariable& j, const LinearMap& u, Eigen::Index out,
                    Eigen::Index off) {
  const auto& w = u.codomain();
  if (w->is_full()) return;
  for (const auto& q : u.domain()->orthonormal()) {
    for (const auto& c : w->complement()) prog.add_equality(detail::corner_pairing(j, out, q, off, c), 0.0);
  }
}

// Off-diagonal corner (rows from row_off, cols from col_off) of Phi(q_a)
// equal to the given images.
void add_corner_equalities(Program& prog, const SymmetricVariable& j, const LinearMap& u, Eigen::Index out,
                           Eigen::Index row_off, Eigen::Index col_off, const std::vector<RealMatrix>& imgs) {
  const auto& q = u.domain()->orthonormal();
  const Eigen::Index m = u.codomain()->ambient();
  for (std::size_t a = 0; a < q.size(); ++a) {
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index r = 0; r < m; ++r) {
        prog.add_equality(detail::image_entry(j, out, q[a], row_off + p, col_off + r), imgs[a](p, r));
      }
    }
  }
}

// t I - (diagonal corner of Phi(I)) >= 0.
void add_unit_bound(Program& prog, const SymmetricVariable& j, sdp::Var t, Eigen::Index n, Eigen::Index out,
                    Eigen::Index off, Eigen::Index m) {
  AffineMatrix bound(m);
  bound.add_identity(t, 1.0);
  detail::add_identity_image(bound, 0, j, n, out, off, m, -1.0);
  prog.add_lmi(std::move(bound));
}

}  // namespace

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::decomposable:
      return "decomposable";
    case Outcome::not_decomposable:
      return "not_decomposable";
    case Outcome::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

DecResult dec_norm(const LinearMap& u, double tol) {
  const Eigen::Index n = u.domain()->ambient();
  const Eigen::Index m = u.codomain()->ambient();
  const Eigen::Index out = 2 * m;

  Program prog;
  const auto j = prog.add_symmetric(n * out);
  const auto t = prog.add_scalar();
  add_corner_equalities(prog, j, u, out, 0, m, u.orthonormal_images());
  add_membership(prog, j, u, out, 0);
  add_membership(prog, j, u, out, m);
  add_unit_bound(prog, j, t, n, out, 0, m);
  add_unit_bound(prog, j, t, n, out, m, m);
  prog.minimize(LinearForm().add(t, 1.0));
  const auto sol = prog.solve(tol);

  DecResult r;
  r.certificate = certify(sol, prog);
  if (sol.status == sdp::SdpStatus::infeasible) {
    r.outcome = Outcome::not_decomposable;
    return r;
  }
  if (sol.status != sdp::SdpStatus::optimal) {
    r.outcome = Outcome::indeterminate;
    return r;
  }
  r.outcome = Outcome::decomposable;
  r.value = std::max(0.0, sol.value(t));
  const RealMatrix choi = sol.value(j);
  r.s1 = corner_map(choi, u, out, 0);
  r.s2 = corner_map(choi, u, out, m);
  r.extension = cpmap::ChoiMatrix{n, out, choi};
  return r;
}

CbResult cb_norm(const LinearMap& u, double tol) {
  const Eigen::Index n = u.domain()->ambient();
  const Eigen::Index m = u.codomain()->ambient();
  const Eigen::Index h = n * m;

  // Choi of the Paulsen extension with its forced-zero rows removed:
  // [[A, B], [B^T, C]] with A, C in M_n (x) M_m.
  Program prog;
  const auto big = prog.add_symmetric(2 * h);
  const auto t = prog.add_scalar();
  for (Eigen::Index off : {Eigen::Index{0}, h}) {
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p; q < m; ++q) {
        LinearForm f;
        for (Eigen::Index i = 0; i < n; ++i) f.add(big.at(off + i * m + p, off + i * m + q), 1.0);
        if (p == q) f.add(t, -1.0);
        prog.add_equality(f, 0.0);
      }
    }
  }
  const auto& basis = u.domain()->orthonormal();
  const auto imgs = u.orthonormal_images();
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const RealMatrix& x = basis[a];
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index r = 0; r < m; ++r) {
        LinearForm f;
        for (Eigen::Index i = 0; i < n; ++i) {
          for (Eigen::Index k = 0; k < n; ++k) {
            if (std::abs(x(i, k)) > detail::kSparseCut) f.add(big.at(i * m + p, h + k * m + r), x(i, k));
          }
        }
        prog.add_equality(f, imgs[a](p, r));
      }
    }
  }
  prog.minimize(LinearForm().add(t, 1.0));
  const auto sol = prog.solve(tol);
  CbResult r;
  r.certificate = certify(sol, prog);
  if (sol.status != sdp::SdpStatus::optimal) {
    throw IndeterminateError("cb_norm: solver status " + sdp::to_string(sol.status) +
                             (sol.note.empty() ? std::string() : " (" + sol.note + ")"));
  }
  r.value = std::max(0.0, sol.value(t));
  return r;
}

JordanParts jordan_split(const LinearMap& u) {
  const auto ustar = cpmap::involute(u);
  return JordanParts{(u + ustar) * 0.5, (u - ustar) * 0.5};
}

SaDifference sa_difference_norm(const LinearMap& u, double tol) {
  if (cpmap::selfadjoint_residual(u) > kStructureTol) {
    throw PreconditionError("sa_difference_norm: map is not selfadjoint");
  }
  const auto usa = jordan_split(u).sa;
  const Eigen::Index n = u.domain()->ambient();
  const Eigen::Index m = u.codomain()->ambient();

  Program prog;
  const auto j1 = prog.add_symmetric(n * m);
  const auto j2 = prog.add_symmetric(n * m);
  const auto t = prog.add_scalar();
  const auto& q = u.domain()->orthonormal();
  const auto imgs = usa.orthonormal_images();
  for (std::size_t a = 0; a < q.size(); ++a) {
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index r = 0; r < m; ++r) {
        LinearForm f = detail::image_entry(j1, m, q[a], p, r);
        f.add(detail::image_entry(j2, m, q[a], p, r), -1.0);
        prog.add_equality(f, imgs[a](p, r));
      }
    }
  }
  add_membership(prog, j1, u, m, 0);
  AffineMatrix bound(m);
  bound.add_identity(t, 1.0);
  detail::add_identity_image(bound, 0, j1, n, m, 0, m, -1.0);
  detail::add_identity_image(bound, 0, j2, n, m, 0, m, -1.0);
  prog.add_lmi(std::move(bound));
  prog.minimize(LinearForm().add(t, 1.0));
  const auto sol = prog.solve(tol);
  if (sol.status != sdp::SdpStatus::optimal) {
    throw IndeterminateError("sa_difference_norm: solver status " + sdp::to_string(sol.status));
  }
  const RealMatrix c1 = sol.value(j1);
  const RealMatrix c2 = sol.value(j2);
  auto u1 = corner_map(c1, u, m, 0);
  auto u2 = corner_map(c2, u, m, 0);
  return SaDifference{std::max(0.0, sol.value(t)), std::move(u1), std::move(u2), certify(sol, prog)};
}

SkewWitness skew_witness(const LinearMap& u, double tol) {
  if (cpmap::skew_residual(u) > kStructureTol) throw PreconditionError("skew_witness: map is not skew");
  const auto uas = jordan_split(u).as;
  const Eigen::Index n = u.domain()->ambient();
  const Eigen::Index m = u.codomain()->ambient();
  const Eigen::Index out = 2 * m;

  Program prog;
  const auto j = prog.add_symmetric(n * out);
  const auto t = prog.add_scalar();
  add_corner_equalities(prog, j, u, out, 0, m, uas.orthonormal_images());
  for (const auto& q : u.domain()->orthonormal()) {
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index r = p; r < m; ++r) {
        LinearForm f = detail::image_entry(j, out, q, p, r);
        f.add(detail::image_entry(j, out, q, m + p, m + r), -1.0);
        prog.add_equality(f, 0.0);
        if (r != p) {
          LinearForm g = detail::image_entry(j, out, q, r, p);
          g.add(detail::image_entry(j, out, q, m + r, m + p), -1.0);
          prog.add_equality(g, 0.0);
        }
      }
    }
  }
  add_membership(prog, j, u, out, 0);
  add_unit_bound(prog, j, t, n, out, 0, m);
  prog.minimize(LinearForm().add(t, 1.0));
  const auto sol = prog.solve(tol);
  if (sol.status != sdp::SdpStatus::optimal) {
    throw IndeterminateError("skew_witness: solver status " + sdp::to_string(sol.status));
  }
  const RealMatrix choi = sol.value(j);
  auto s = corner_map(choi, u, out, 0);
  return SkewWitness{std::max(0.0, sol.value(t)), std::move(s), cpmap::ChoiMatrix{n, out, choi}, certify(sol, prog)};
}

LinearMap average_witness(const DecResult& r) {
  if (!r.s1 || !r.s2) throw PreconditionError("average_witness: result carries no witnesses");
  return (*r.s1 + *r.s2) * 0.5;
}

IcpParts icp_extract(const LinearMap& phi) {
  const auto& v = phi.domain();
  const auto& w = phi.codomain();
  if (!v->real_form() || !w->real_form() || !v->is_complex() || !w->is_complex()) {
    throw DomainError("icp_extract: map must act between complexified systems");
  }
  const RealMatrix& jv = *v->complex_structure();
  const RealMatrix& jw = *w->complex_structure();
  double res = 0.0;
  for (std::size_t a = 0; a < v->basis().size(); ++a) {
    res = std::max(res, (phi.apply(jv * v->basis()[a]) - jw * phi.images()[a]).norm());
  }
  res /= std::max(1.0, phi.coefficient_norm());
  if (res > 1e-9) {
    throw DomainError("icp_extract: map does not commute with the complex structures (residual " +
                      std::to_string(res) + ")");
  }
  const auto kappa = opsys::canonical_map(opsys::Canonical::kappa, v->real_form());
  const auto inner = opsys::compose(phi, kappa);
  auto psi = opsys::compose(opsys::canonical_map(opsys::Canonical::rho, w), inner);
  auto sigma = opsys::compose(opsys::canonical_map(opsys::Canonical::sigma, w), inner);
  return IcpParts{std::move(psi), std::move(sigma), res};
}

ScpCompletion scp_complete(const LinearMap& u, double tol) {
  if (cpmap::skew_residual(u) > kStructureTol) throw PreconditionError("scp_complete: map is not skew");
  const auto sw = skew_witness(u, tol);
  const Eigen::Index n = u.domain()->ambient();
  const Eigen::Index m = u.codomain()->ambient();
  const RealMatrix id_n = RealMatrix::Identity(n, n);
  const RealMatrix id_m = RealMatrix::Identity(m, m);
  const auto state = cpmap::normalized_trace(n);
  const auto uas = jordan_split(u).as;
  const RealMatrix u_unit = uas.apply(id_n);

  ScpCompletion out{LinearMap::zero(u.domain(), u.codomain()), sw.value, mat::op_norm(u_unit), 0.0,
                    std::nullopt, sw.extension};
  const RealMatrix s_unit = sw.s.apply(id_n);
  const RealMatrix rest = project(u.codomain(), sw.value * id_m - s_unit);
  out.s = LinearMap::from_function(u.domain(), u.codomain(),
                                   [&](const RealMatrix& b) { return RealMatrix(sw.s.apply(b) + state(b) * rest); });
  out.block_norm = mat::op_norm(mat::realify(out.s.apply(id_n), u_unit));

  // Extension Choi of c(s, u): pad both diagonal corners by I_n (x) rest / n,
  // then conjugate by I_n (x) diag(I, -I) to pass from [[S, u], [-u, S]] to
  // [[S, -u], [u, S]].
  RealMatrix& choi = out.extension.matrix;
  const Eigen::Index w = 2 * m;
  for (Eigen::Index i = 0; i < n; ++i) {
    choi.block(i * w, i * w, m, m) += rest / static_cast<double>(n);
    choi.block(i * w + m, i * w + m, m, m) += rest / static_cast<double>(n);
  }
  mat::RealVector d = mat::RealVector::Ones(n * w);
  for (Eigen::Index i = 0; i < n; ++i) d.segment(i * w + m, m).setConstant(-1.0);
  choi = d.asDiagonal() * choi * d.asDiagonal();

  // nc-state completion: u(I) = 0 and dec <= 1 admit a unital witness.
  const double scale = std::max(1.0, u.coefficient_norm());
  if (out.unit_norm <= 1e-9 * scale && sw.value <= 1.0 + 1e-7) {
    const double shrink = std::max(1.0, sw.value);
    const RealMatrix pad = project(u.codomain(), id_m - s_unit / shrink);
    out.unital_s = LinearMap::from_function(u.domain(), u.codomain(), [&](const RealMatrix& b) {
      return RealMatrix(sw.s.apply(b) / shrink + state(b) * pad);
    });
  }
  return out;
}

ScpStinespring stinespring_scp(const LinearMap& u, double tol) {
  auto comp = scp_complete(u, tol);
  auto data = cpmap::kraus_from_choi(comp.extension);
  const Eigen::Index n = u.domain()->ambient();
  const Eigen::Index w = comp.extension.m;
  const Eigen::Index m = u.codomain()->ambient();
  RealMatrix t = RealMatrix::Zero(std::max<Eigen::Index>(1, data.dilation_dim) * n, w);
  for (Eigen::Index k = 0; k < data.dilation_dim; ++k) t.block(k * n, 0, n, w) = data.kraus[static_cast<std::size_t>(k)];
  const auto cm = cpmap::c_map(comp.s, jordan_split(u).as);
  double res = cpmap::kraus_residual(cm, data.kraus);
  for (std::size_t a = 0; a < u.images().size(); ++a) {
    const auto& b = u.domain()->basis()[a];
    RealMatrix rec = RealMatrix::Zero(w, w);
    for (const auto& kr : data.kraus) rec += kr.transpose() * b * kr;
    res = std::max(res, (rec.block(m, 0, m, m) - u.images()[a]).norm());
  }
  data.residual = res;
  data.t_norm_sq = mat::op_norm(t.transpose() * t);
  return ScpStinespring{std::move(data), std::move(t), std::move(comp)};
}

double delta_value(const Factorization& f) {
  if (f.pairs.empty()) throw ValidationError("delta_value: factorization is empty");
  const Eigen::Index m = f.pairs.front().first.rows();
  const Eigen::Index inner = f.pairs.front().first.cols();
  RealMatrix aa = RealMatrix::Zero(m, m);
  RealMatrix bb = RealMatrix::Zero(m, m);
  for (std::size_t k = 0; k < f.pairs.size(); ++k) {
    const auto& [a, b] = f.pairs[k];
    if (a.rows() != m || a.cols() != inner || b.rows() != inner || b.cols() != m) {
      throw ValidationError("delta_value: pair " + std::to_string(k) + " has inconsistent shape");
    }
    aa += a * a.transpose();
    bb += b.transpose() * b;
  }
  return std::sqrt(mat::op_norm(aa)) * std::sqrt(mat::op_norm(bb));
}

double delta_value(const Factorization& f, const LinearMap& u) {
  if (u.domain()->kind() != opsys::SystemKind::ell_inf || u.domain()->dim() != f.pairs.size()) {
    throw ValidationError("delta_value: map domain is not ell_inf of matching size");
  }
  const double value = delta_value(f);
  for (std::size_t k = 0; k < f.pairs.size(); ++k) {
    const RealMatrix prod = f.pairs[k].first * f.pairs[k].second;
    const RealMatrix& target = u.images()[k];
    if (prod.rows() != target.rows() || prod.cols() != target.cols() ||
        (prod - target).norm() > 1e-9 * std::max(1.0, target.norm())) {
      throw ValidationError("delta_value: a_k b_k differs from u(e_k) at k = " + std::to_string(k));
    }
  }
  return value;
}

double complex_linearity_residual(const LinearMap& u) {
  const auto& v = u.domain();
  const auto& w = u.codomain();
  if (!v->is_complex() || !w->is_complex()) throw DomainError("complex_linearity_residual: systems are not complex");
  double res = 0.0;
  for (std::size_t a = 0; a < v->basis().size(); ++a) {
    res = std::max(res, (u.apply(*v->complex_structure() * v->basis()[a]) - *w->complex_structure() * u.images()[a]).norm());
  }
  return res / std::max(1.0, u.coefficient_norm());
}

namespace {

// Y(p, q) += coef * v and Y(q, p) -= coef * v inside realify(X, Y), p < q.
void add_imag(AffineMatrix& m, Eigen::Index half, Eigen::Index p, Eigen::Index q, sdp::Var v, double coef) {
  m.add(p, half + q, v, -coef);
  m.add(q, half + p, v, coef);
}

}  // namespace

double complex_dec_norm(const LinearMap& u, double tol) {
  const auto& v = u.domain();
  const auto& w = u.codomain();
  if (v->kind() != opsys::SystemKind::complex_full || w->kind() != opsys::SystemKind::complex_full) {
    throw DomainError("complex_dec_norm: domain and codomain must be complex_full");
  }
  if (complex_linearity_residual(u) > 1e-9) throw PreconditionError("complex_dec_norm: map is not complex-linear");
  const Eigen::Index n = v->order();
  const Eigen::Index m = w->order();
  const Eigen::Index out = 2 * m;
  const Eigen::Index size = n * out;

  // Hermitian Choi H = R + iA of the extension M_n(C) -> M_2m(C).
  Program prog;
  const auto re = prog.add_symmetric(size, false);
  std::vector<sdp::Var> im(static_cast<std::size_t>(size * size), 0);
  auto im_at = [&](Eigen::Index k, Eigen::Index l) { return im[static_cast<std::size_t>(k * size + l)]; };
  for (Eigen::Index k = 0; k < size; ++k) {
    for (Eigen::Index l = k + 1; l < size; ++l) im[static_cast<std::size_t>(k * size + l)] = prog.add_scalar();
  }
  const auto t = prog.add_scalar();

  AffineMatrix big(2 * size);
  for (Eigen::Index k = 0; k < size; ++k) {
    for (Eigen::Index l = k; l < size; ++l) {
      big.add(k, l, re.at(k, l), 1.0);
      big.add(size + k, size + l, re.at(k, l), 1.0);
      if (l > k) add_imag(big, size, k, l, im_at(k, l), 1.0);
    }
  }
  prog.add_lmi(std::move(big));

  // H[i*2m + p, j*2m + m + r] = u(E_ij)(p, r).
  auto entry = [&](Eigen::Index k, Eigen::Index l, double target_re, double target_im) {
    prog.add_equality(LinearForm().add(re.at(k, l), 1.0), target_re);
    if (k < l) {
      prog.add_equality(LinearForm().add(im_at(k, l), 1.0), target_im);
    } else if (k > l) {
      prog.add_equality(LinearForm().add(im_at(l, k), -1.0), target_im);
    }
  };
  const RealMatrix zero_n = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const RealMatrix img = u.apply(mat::realify(mat::matrix_unit(n, n, i, j), zero_n));
      const RealMatrix x = img.topLeftCorner(m, m);
      const RealMatrix y = img.bottomLeftCorner(m, m);
      for (Eigen::Index p = 0; p < m; ++p) {
        for (Eigen::Index r = 0; r < m; ++r) entry(i * out + p, j * out + m + r, x(p, r), y(p, r));
      }
    }
  }
  for (Eigen::Index off : {Eigen::Index{0}, m}) {
    AffineMatrix bound(2 * m);
    for (Eigen::Index p = 0; p < 2 * m; ++p) bound.add(p, p, t, 1.0);
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index q = p; q < m; ++q) {
        for (Eigen::Index i = 0; i < n; ++i) {
          const Eigen::Index k = i * out + off + p;
          const Eigen::Index l = i * out + off + q;
          bound.add(p, q, re.at(k, l), -1.0);
          bound.add(m + p, m + q, re.at(k, l), -1.0);
          if (q > p) add_imag(bound, m, p, q, im_at(k, l), -1.0);
        }
      }
    }
    prog.add_lmi(std::move(bound));
  }
  prog.minimize(LinearForm().add(t, 1.0));
  const auto sol = prog.solve(tol);
  if (sol.status != sdp::SdpStatus::optimal) {
    throw IndeterminateError("complex_dec_norm: solver status " + sdp::to_string(sol.status));
  }
  return std::max(0.0, sol.value(t));
}

}  // namespace rdec::decnorm
