#include "rdec/cpmap.hpp"

#include <algorithm>
#include <cmath>

#include "choi_forms.hpp"
#include "rdec/error.hpp"
#include "rdec/program.hpp"

namespace rdec::cpmap {

namespace {

double map_scale(const LinearMap& u) { return std::max(1.0, u.coefficient_norm()); }

void require_same_domain(const LinearMap& a, const LinearMap& b, const char* what) {
  if (!a.domain()->same_span(*b.domain())) throw DomainError(std::string(what) + ": maps have different domains");
  if (a.codomain()->ambient() != b.codomain()->ambient()) {
    throw ShapeError(std::string(what) + ": codomain sizes differ");
  }
}

CpCheck extension_check(const LinearMap& u, double tol) {
  CpCheck out;
  out.route = "extension";
  const Eigen::Index n = u.domain()->ambient();
  const Eigen::Index m = u.codomain()->ambient();
  const double scale = map_scale(u);

  sdp::Program prog;
  const auto j = prog.add_symmetric(n * m, false);
  const auto s = prog.add_scalar();
  auto lmi = j.as_affine();
  lmi.add_identity(s, 1.0);
  prog.add_lmi(std::move(lmi));
  sdp::AffineMatrix floor(1);
  floor.add(0, 0, s, 1.0);
  floor.add_constant(RealMatrix::Constant(1, 1, scale));
  prog.add_lmi(std::move(floor));

  const auto& q = u.domain()->orthonormal();
  const auto imgs = u.orthonormal_images();
  for (std::size_t a = 0; a < q.size(); ++a) {
    for (Eigen::Index p = 0; p < m; ++p) {
      for (Eigen::Index r = 0; r < m; ++r) prog.add_equality(detail::image_entry(j, m, q[a], p, r), imgs[a](p, r));
    }
  }
  prog.minimize(sdp::LinearForm().add(s, 1.0));
  const auto sol = prog.solve();
  out.note = sol.note;
  if (sol.status != sdp::SdpStatus::optimal) {
    out.verdict = Verdict::indeterminate;
    if (out.note.empty()) out.note = "extension program status " + sdp::to_string(sol.status);
    return out;
  }
  const double shift = sol.value(s);
  out.min_eig = -shift;
  out.witness = ChoiMatrix{n, m, sol.value(j)};
  const bool psd = shift <= 100.0 * tol * scale;
  out.verdict = psd ? Verdict::cp : Verdict::not_cp;
  return out;
}

}  // namespace

ChoiMatrix choi(const LinearMap& u) {
  const auto& dom = u.domain();
  if (!dom->is_full()) {
    throw DomainError("choi: domain '" + dom->label() + "' is not a full matrix algebra (use the extension program)");
  }
  const Eigen::Index n = dom->ambient();
  const Eigen::Index m = u.codomain()->ambient();
  ChoiMatrix c{n, m, RealMatrix::Zero(n * m, n * m)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) c.matrix.block(i * m, j * m, m, m) = u.apply(mat::matrix_unit(n, n, i, j));
  }
  return c;
}

LinearMap map_from_choi(const ChoiMatrix& c) {
  if (c.matrix.rows() != c.n * c.m || c.matrix.cols() != c.n * c.m) throw ShapeError("map_from_choi: size mismatch");
  return LinearMap::from_function(opsys::full_real(c.n), opsys::full_real(c.m),
                                  [&](const RealMatrix& x) { return apply_choi(c, x); });
}

RealMatrix apply_choi(const ChoiMatrix& c, const RealMatrix& x) {
  if (x.rows() != c.n || x.cols() != c.n) throw ShapeError("apply_choi: argument has the wrong size");
  return detail::apply_choi(c.matrix, c.n, c.m, x);
}

LinearMap involute(const LinearMap& u) {
  return LinearMap::from_function(u.domain(), u.codomain(), [&](const RealMatrix& b) {
    return RealMatrix(u.apply(b.transpose()).transpose());
  });
}

double selfadjoint_residual(const LinearMap& u) { return involute(u).distance(u) / map_scale(u); }

double skew_residual(const LinearMap& u) { return (involute(u) + u).distance(LinearMap::zero(u.domain(), u.codomain())) / map_scale(u); }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::cp:
      return "cp";
    case Verdict::not_cp:
      return "not_cp";
    case Verdict::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

CpCheck is_cp(const LinearMap& u, double tol) {
  if (!(tol > 0.0)) throw ValidationError("is_cp: tolerance must be positive");
  if (!u.domain()->is_full()) {
    CpCheck out;
    out.star_residual = selfadjoint_residual(u);
    out.star_preserving = out.star_residual <= std::max(tol, 1e-10);
    auto ext = extension_check(u, tol);
    ext.star_residual = out.star_residual;
    ext.star_preserving = out.star_preserving;
    if (ext.verdict == Verdict::cp && !ext.star_preserving) ext.verdict = Verdict::not_cp;
    return ext;
  }
  CpCheck out;
  out.route = "choi";
  auto c = choi(u);
  const double size = std::max(1.0, c.matrix.norm());
  out.star_residual = (c.matrix - c.matrix.transpose()).norm() / size;
  out.star_preserving = out.star_residual <= std::max(tol, 1e-10);
  const RealMatrix sym = mat::symmetrized(c.matrix);
  out.min_eig = mat::min_eig(sym);
  out.verdict = (out.star_preserving && mat::is_psd(sym, tol)) ? Verdict::cp : Verdict::not_cp;
  out.witness = std::move(c);
  return out;
}

StinespringData kraus_from_choi(const ChoiMatrix& c) {
  const RealMatrix sym = mat::symmetrized(c.matrix);
  const auto eig = mat::sym_eig(sym);
  StinespringData out;
  const Eigen::Index m = c.m;
  RealMatrix gram = RealMatrix::Zero(m, m);
  const double top = eig.values.size() > 0 ? eig.values(0) : 0.0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double lam = eig.values(k);
    if (!(lam > 1e-10 * top) || lam <= 0.0) break;
    RealMatrix kr(c.n, m);
    for (Eigen::Index i = 0; i < c.n; ++i) {
      for (Eigen::Index p = 0; p < m; ++p) kr(i, p) = std::sqrt(lam) * eig.vectors(i * m + p, k);
    }
    gram += kr.transpose() * kr;
    out.kraus.push_back(std::move(kr));
  }
  out.dilation_dim = static_cast<Eigen::Index>(out.kraus.size());
  out.t_norm_sq = mat::op_norm(gram);
  double res = 0.0;
  for (Eigen::Index i = 0; i < c.n; ++i) {
    for (Eigen::Index j = 0; j < c.n; ++j) {
      const RealMatrix e = mat::matrix_unit(c.n, c.n, i, j);
      RealMatrix rec = RealMatrix::Zero(m, m);
      for (const auto& kr : out.kraus) rec += kr.transpose() * e * kr;
      res = std::max(res, (rec - sym.block(i * m, j * m, m, m)).norm());
    }
  }
  out.residual = res;
  return out;
}

double kraus_residual(const LinearMap& u, const std::vector<RealMatrix>& kraus) {
  double res = 0.0;
  const Eigen::Index m = u.codomain()->ambient();
  for (std::size_t a = 0; a < u.images().size(); ++a) {
    const auto& b = u.domain()->basis()[a];
    RealMatrix rec = RealMatrix::Zero(m, m);
    for (const auto& kr : kraus) rec += kr.transpose() * b * kr;
    res = std::max(res, (rec - u.images()[a]).norm());
  }
  return res;
}

StinespringData kraus_stinespring(const LinearMap& u) {
  const auto check = is_cp(u);
  if (check.verdict != Verdict::cp) {
    throw PreconditionError("kraus_stinespring: map is not completely positive (" + to_string(check.verdict) + ")");
  }
  auto out = kraus_from_choi(*check.witness);
  out.residual = kraus_residual(u, out.kraus);
  return out;
}

State normalized_trace(Eigen::Index n) {
  return State{RealMatrix::Identity(n, n) / static_cast<double>(n)};
}

UcpNormalization normalize_ucp(const LinearMap& phi, const std::optional<State>& state) {
  const Eigen::Index n = phi.domain()->ambient();
  const Eigen::Index m = phi.codomain()->ambient();
  const State st = state ? *state : normalized_trace(n);
  const RealMatrix unit = mat::symmetrized(phi.apply(RealMatrix::Identity(n, n)));
  // Kernel of a from the spectrum of phi(I).
  const auto eig = mat::sym_eig(unit);
  const double top = eig.values.size() ? std::max(0.0, eig.values(0)) : 0.0;
  mat::RealVector root = mat::RealVector::Zero(eig.values.size());
  mat::RealVector inv_root = root;
  mat::RealVector keep = root;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > 1e-10 * top) {
      root(k) = std::sqrt(eig.values(k));
      inv_root(k) = 1.0 / root(k);
      keep(k) = 1.0;
    }
  }
  const RealMatrix& q = eig.vectors;
  const RealMatrix a = q * root.asDiagonal() * q.transpose();
  const RealMatrix ainv = q * inv_root.asDiagonal() * q.transpose();
  const RealMatrix e = q * keep.asDiagonal() * q.transpose();
  const RealMatrix pad = RealMatrix::Identity(m, m) - e;
  auto psi = LinearMap::from_function(phi.domain(), opsys::full_real(m), [&](const RealMatrix& x) {
    return RealMatrix(ainv * phi.apply(x) * ainv + st(x) * pad);
  });
  double res = 0.0;
  for (std::size_t k = 0; k < phi.images().size(); ++k) {
    res = std::max(res, (phi.images()[k] - a * psi.images()[k] * a).norm());
  }
  return UcpNormalization{a, std::move(psi), res};
}

std::pair<LinearMap, LinearMap> ucp_witnesses(const LinearMap& u, const LinearMap& s1, const LinearMap& s2,
                                              const std::optional<State>& state) {
  require_same_domain(u, s1, "ucp_witnesses");
  require_same_domain(u, s2, "ucp_witnesses");
  const Eigen::Index n = u.domain()->ambient();
  const Eigen::Index m = u.codomain()->ambient();
  const State st = state ? *state : normalized_trace(n);
  const RealMatrix id_n = RealMatrix::Identity(n, n);
  auto pad = [&](const LinearMap& s) {
    const RealMatrix unit = s.apply(id_n);
    if (mat::op_norm(unit) > 1.0 + 1e-9) {
      throw PreconditionError("ucp_witnesses: witness has ||s(I)|| > 1");
    }
    const RealMatrix rest = RealMatrix::Identity(m, m) - unit;
    return LinearMap::from_function(s.domain(), s.codomain(),
                                    [&](const RealMatrix& b) { return RealMatrix(s.apply(b) + st(b) * rest); });
  };
  return {pad(s1), pad(s2)};
}

LinearMap block_map(const LinearMap& s1, const LinearMap& u, const LinearMap& s2) {
  require_same_domain(u, s1, "block_map");
  require_same_domain(u, s2, "block_map");
  const Eigen::Index m = u.codomain()->ambient();
  const auto ustar = involute(u);
  return LinearMap::from_function(u.domain(), opsys::full_real(2 * m), [&](const RealMatrix& b) {
    RealMatrix out(2 * m, 2 * m);
    out << s1.apply(b), u.apply(b), ustar.apply(b), s2.apply(b);
    return out;
  });
}

LinearMap c_map(const LinearMap& s, const LinearMap& u) {
  require_same_domain(u, s, "c_map");
  const Eigen::Index m = u.codomain()->ambient();
  return LinearMap::from_function(u.domain(), opsys::full_real(2 * m),
                                  [&](const RealMatrix& b) { return mat::realify(s.apply(b), u.apply(b)); });
}

RealMatrix apply_amplified(const LinearMap& u, const RealMatrix& x, Eigen::Index k) {
  const Eigen::Index n = u.domain()->ambient();
  const Eigen::Index m = u.codomain()->ambient();
  if (k < 1 || x.rows() != k * n || x.cols() != k * n) throw ShapeError("apply_amplified: argument has the wrong size");
  RealMatrix out(k * m, k * m);
  for (Eigen::Index s = 0; s < k; ++s) {
    for (Eigen::Index t = 0; t < k; ++t) out.block(s * m, t * m, m, m) = u.apply(x.block(s * n, t * n, n, n));
  }
  return out;
}

}  // namespace rdec::cpmap
