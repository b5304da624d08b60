#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rdec/cpmap.hpp"
#include "rdec/error.hpp"
#include "rdec/opsys.hpp"

using namespace rdec;
using mat::RealMatrix;
using opsys::LinearMap;

namespace {

LinearMap random_map(std::mt19937_64& rng, const opsys::SystemPtr& v, const opsys::SystemPtr& w) {
  std::normal_distribution<double> g;
  return LinearMap::from_function(v, w, [&](const RealMatrix&) {
    RealMatrix y = RealMatrix::Zero(w->ambient(), w->ambient());
    for (const auto& b : w->orthonormal()) y += g(rng) * b;
    return y;
  });
}

void audit(const opsys::SystemPtr& v) {
  const RealMatrix id = RealMatrix::Identity(v->ambient(), v->ambient());
  CHECK(v->contains(id));
  for (const auto& b : v->basis()) CHECK(v->contains(b.transpose()));
  RealMatrix gram(v->dim(), v->dim());
  for (std::size_t a = 0; a < v->dim(); ++a)
    for (std::size_t b = 0; b < v->dim(); ++b) gram(a, b) = mat::inner(v->basis()[a], v->basis()[b]);
  CHECK(oracle::lambda_min(gram) > 1e-10);
}

}  // namespace

TEST_SUITE("opsys") {
  TEST_CASE("named systems") {
    const auto m2 = opsys::full_real(2);
    CHECK(m2->dim() == 4);
    CHECK(m2->contains(RealMatrix::Identity(2, 2)));
    CHECK(m2->is_full());

    const auto l3 = opsys::ell_inf(3);
    CHECK(l3->dim() == 3);
    CHECK(l3->ambient() == 3);
    CHECK_FALSE(l3->contains(mat::matrix_unit(3, 3, 0, 1)));

    const auto h = opsys::quaternion();
    CHECK(h->dim() == 4);
    CHECK(h->ambient() == 4);
    // i j = k and i^2 = -1 in the representation.
    const RealMatrix i = opsys::quaternion_matrix(0, 1, 0, 0);
    const RealMatrix j = opsys::quaternion_matrix(0, 0, 1, 0);
    const RealMatrix k = opsys::quaternion_matrix(0, 0, 0, 1);
    CHECK((i * j - k).norm() <= 1e-15);
    CHECK((i * i + RealMatrix::Identity(4, 4)).norm() <= 1e-15);
    CHECK((i.transpose() + i).norm() <= 1e-15);

    const auto c2 = opsys::complex_full(2);
    CHECK(c2->dim() == 8);
    CHECK(c2->is_complex());
    CHECK((*c2->complex_structure() - mat::realify(RealMatrix::Zero(2, 2), RealMatrix::Identity(2, 2))).norm() == 0.0);

    for (const auto& v : {m2, l3, h, c2, opsys::full_real(3)}) audit(v);
  }

  TEST_CASE("span validation names the failed invariant") {
    CHECK_THROWS_WITH_AS(opsys::span(2, {mat::matrix_unit(2, 2, 0, 0)}), doctest::Contains("identity"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(opsys::span(2, {RealMatrix::Identity(2, 2), mat::matrix_unit(2, 2, 0, 1)}),
                         doctest::Contains("transpose"), ValidationError);
    CHECK_THROWS_WITH_AS(opsys::span(2, {RealMatrix::Identity(2, 2), RealMatrix(2 * RealMatrix::Identity(2, 2))}),
                         doctest::Contains("dependent"), ValidationError);
    CHECK_THROWS_AS(opsys::span(2, {RealMatrix::Identity(3, 3)}), ShapeError);
  }

  TEST_CASE("complexify_system") {
    const auto c = opsys::complexify_system(opsys::full_real(2));
    CHECK(c->dim() == 8);
    CHECK(c->ambient() == 4);
    CHECK(c->is_complex());

    const auto r = opsys::complexify_system(opsys::ell_inf(1));
    CHECK(r->dim() == 2);
    RealMatrix rot(2, 2);
    rot << 0, -1, 1, 0;
    CHECK(r->contains(rot));
    CHECK(r->contains(RealMatrix::Identity(2, 2)));

    const auto hq = opsys::complexify_system(opsys::quaternion());
    CHECK(hq->dim() == 8);
    CHECK(hq->ambient() == 8);
    CHECK_THROWS_AS(opsys::complexify_system(c), DomainError);
    audit(c);
    audit(hq);
  }

  TEST_CASE("complexify_map") {
    const auto m2 = opsys::full_real(2);
    const auto idc = opsys::complexify_map(LinearMap::identity(m2));
    CHECK(idc.distance(LinearMap::identity(idc.domain())) <= 1e-14);

    std::mt19937_64 rng(2);
    const auto tc = opsys::complexify_map(opsys::transpose_map(m2));
    for (int t = 0; t < 5; ++t) {
      const RealMatrix x = oracle::random_matrix(rng, 2, 2);
      const RealMatrix y = oracle::random_matrix(rng, 2, 2);
      CHECK((tc.apply(mat::realify(x, y)) - mat::realify(x.transpose(), y.transpose())).norm() <= 1e-12);
    }

    const auto u = random_map(rng, m2, m2);
    const auto v = random_map(rng, m2, m2);
    const auto lhs = opsys::complexify_map(opsys::compose(u, v));
    const auto rhs = opsys::compose(opsys::complexify_map(u), opsys::complexify_map(v));
    CHECK(lhs.distance(rhs) <= 1e-10);

    const auto kappa = opsys::canonical_map(opsys::Canonical::kappa, m2);
    const auto rho = opsys::canonical_map(opsys::Canonical::rho, kappa.codomain());
    CHECK(opsys::compose(rho, opsys::compose(opsys::complexify_map(u), kappa)).distance(u) <= 1e-12);
    CHECK_THROWS_AS(opsys::complexify_map(idc), DomainError);

    // CP maps stay CP.
    const RealMatrix a = oracle::random_matrix(rng, 2, 2);
    const auto cp = opsys::conjugation_map(a, a);
    CHECK(cpmap::is_cp(opsys::complexify_map(cp)).verdict == cpmap::Verdict::cp);
  }

  TEST_CASE("canonical maps") {
    const auto m2 = opsys::full_real(2);
    const auto kappa = opsys::canonical_map(opsys::Canonical::kappa, m2);
    const auto mc = kappa.codomain();
    const auto rho = opsys::canonical_map(opsys::Canonical::rho, mc);
    const auto sigma = opsys::canonical_map(opsys::Canonical::sigma, mc);
    const auto theta = opsys::canonical_map(opsys::Canonical::theta, mc);
    CHECK(opsys::compose(rho, kappa).distance(LinearMap::identity(m2)) <= 1e-14);
    CHECK(opsys::compose(sigma, kappa).coefficient_norm() <= 1e-14);
    CHECK(opsys::compose(theta, theta).distance(LinearMap::identity(theta.domain())) <= 1e-12);
    CHECK(cpmap::is_cp(rho).verdict == cpmap::Verdict::cp);
    CHECK(cpmap::skew_residual(sigma) <= 1e-12);
    CHECK_THROWS_AS(opsys::canonical_map(opsys::Canonical::kappa, mc), DomainError);
    CHECK_THROWS_AS(opsys::canonical_map(opsys::Canonical::rho, m2), DomainError);
  }

  TEST_CASE("theta preserves positivity at level k") {
    const auto theta = opsys::canonical_map(opsys::Canonical::theta, opsys::complexify_system(opsys::full_real(2)));
    std::mt19937_64 rng(12);
    for (int t = 0; t < 20; ++t) {
      const Eigen::Index k = 1 + t % 3;
      // PSD element of M_k(R_V): realification of a Hermitian PSD matrix.
      const RealMatrix gr = oracle::random_matrix(rng, 2 * k, 2 * k);
      const RealMatrix gi = oracle::random_matrix(rng, 2 * k, 2 * k);
      const Eigen::MatrixXcd z = gr.cast<std::complex<double>>() + std::complex<double>(0, 1) * gi.cast<std::complex<double>>();
      const Eigen::MatrixXcd h = z * z.adjoint();
      RealMatrix x(4 * k, 4 * k);
      for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
          x.block(4 * i, 4 * j, 4, 4) = mat::realify(RealMatrix(h.block(2 * i, 2 * j, 2, 2).real()),
                                                     RealMatrix(h.block(2 * i, 2 * j, 2, 2).imag()));
      CHECK(oracle::lambda_min(x) >= -1e-9 * x.norm());
      const RealMatrix y = cpmap::apply_amplified(theta, x, k);
      CHECK(oracle::lambda_min(mat::symmetrized(y)) >= -1e-9 * y.norm());
    }
  }

  TEST_CASE("paulsen_system") {
    std::vector<RealMatrix> row = {mat::matrix_unit(1, 2, 0, 0), mat::matrix_unit(1, 2, 0, 1)};
    const auto s = opsys::paulsen_system(row, 1, 2, opsys::PaulsenDiagonal::scalar);
    CHECK(s->dim() == 6);
    CHECK(s->ambient() == 3);
    audit(s);
    const auto d = opsys::paulsen_system({}, 2, 2, opsys::PaulsenDiagonal::scalar);
    CHECK(d->dim() == 2);
    std::vector<RealMatrix> full;
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) full.push_back(mat::matrix_unit(2, 2, i, j));
    const auto f = opsys::paulsen_system(full, 2, 2, opsys::PaulsenDiagonal::full);
    CHECK(f->dim() == 16);
    CHECK(f->is_full());
    CHECK_THROWS_AS(opsys::paulsen_system({row[0], row[0]}, 1, 2, opsys::PaulsenDiagonal::scalar), ValidationError);
  }

  TEST_CASE("direct_sum") {
    const auto l = opsys::direct_sum(opsys::ell_inf(1), opsys::ell_inf(1));
    CHECK(l->same_span(*opsys::ell_inf(2)));
    const auto m = opsys::direct_sum(opsys::full_real(2), opsys::full_real(3));
    CHECK(m->dim() == 13);
    CHECK(m->ambient() == 5);
    audit(m);
    const auto p0 = opsys::direct_sum_projection(opsys::full_real(2), opsys::full_real(3), 0);
    const auto p1 = opsys::direct_sum_projection(opsys::full_real(2), opsys::full_real(3), 1);
    CHECK(cpmap::is_cp(p0).verdict == cpmap::Verdict::cp);
    CHECK(cpmap::is_cp(p1).verdict == cpmap::Verdict::cp);
    const RealMatrix id = RealMatrix::Identity(5, 5);
    CHECK((p0.apply(id) - RealMatrix::Identity(2, 2)).norm() <= 1e-14);
    CHECK((p1.apply(id) - RealMatrix::Identity(3, 3)).norm() <= 1e-14);
  }

  TEST_CASE("linear maps are well defined on the span") {
    std::mt19937_64 rng(7);
    const auto v = opsys::quaternion();
    const auto w = opsys::full_real(3);
    const auto u = random_map(rng, v, w);
    for (int t = 0; t < 5; ++t) {
      std::normal_distribution<double> g;
      std::vector<double> c(4);
      RealMatrix x = RealMatrix::Zero(4, 4), y = RealMatrix::Zero(3, 3);
      for (int a = 0; a < 4; ++a) {
        c[a] = g(rng);
        x += c[a] * v->basis()[a];
        y += c[a] * u.images()[a];
      }
      CHECK((u.apply(x) - y).norm() <= 1e-10 * (1 + y.norm()));
    }
    CHECK_THROWS_AS(u.apply(RealMatrix::Identity(3, 3)), ShapeError);
    CHECK_THROWS_AS(u.apply(mat::matrix_unit(4, 4, 0, 3) + mat::matrix_unit(4, 4, 1, 2)), ValidationError);
    CHECK_THROWS_AS(LinearMap(v, opsys::ell_inf(3), std::vector<RealMatrix>(4, mat::matrix_unit(3, 3, 0, 1))),
                    ValidationError);
    CHECK_THROWS_AS(LinearMap(v, w, std::vector<RealMatrix>(3, RealMatrix::Zero(3, 3))), ShapeError);
  }

  TEST_CASE("map helpers") {
    std::mt19937_64 rng(8);
    const auto m2 = opsys::full_real(2);
    const RealMatrix x = oracle::random_matrix(rng, 2, 2);
    CHECK((opsys::transpose_map(m2).apply(x) - x.transpose()).norm() == 0.0);
    const RealMatrix a = oracle::random_matrix(rng, 2, 3);
    const RealMatrix b = oracle::random_matrix(rng, 2, 3);
    CHECK((opsys::conjugation_map(a, b).apply(x) - a.transpose() * x * b).norm() <= 1e-12);
    const auto im = opsys::imaginary_part_map(2);
    const auto re = opsys::real_part_map(2);
    const RealMatrix z = mat::realify(x, RealMatrix(x.transpose()));
    CHECK((im.apply(z) - mat::realify(RealMatrix(x.transpose()), RealMatrix::Zero(2, 2))).norm() <= 1e-12);
    CHECK((re.apply(z) - mat::realify(x, RealMatrix::Zero(2, 2))).norm() <= 1e-12);
    const auto hom = opsys::complex_multiplication_map(2);
    CHECK(cpmap::is_cp(hom).verdict == cpmap::Verdict::cp);
    const auto sub = opsys::span(2, {RealMatrix::Identity(2, 2), mat::matrix_unit(2, 2, 0, 1) + mat::matrix_unit(2, 2, 1, 0)});
    const auto r = opsys::restrict_to(opsys::transpose_map(m2), sub);
    for (const auto& b : sub->basis()) CHECK((r.apply(b) - b).norm() <= 1e-12);
    const auto wide = opsys::with_codomain(LinearMap::identity(sub), m2);
    CHECK(wide.codomain()->dim() == 4);
    const auto ds = opsys::direct_sum_map(LinearMap::identity(m2), opsys::transpose_map(m2));
    CHECK((ds.apply(x).topLeftCorner(2, 2) - x).norm() == 0.0);
    CHECK((ds.apply(x).bottomRightCorner(2, 2) - x.transpose()).norm() == 0.0);
    const auto amp = opsys::amplify(opsys::ell_inf(2), 2);
    CHECK(amp->dim() == 8);
    CHECK(amp->ambient() == 4);
  }
}
