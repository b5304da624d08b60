#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rdec/error.hpp"
#include "rdec/mat.hpp"

using namespace rdec;
using mat::RealMatrix;

TEST_SUITE("mat") {
  TEST_CASE("sym_eig on small fixed matrices") {
    RealMatrix d(2, 2);
    d << 1, 0, 0, 2;
    auto e = mat::sym_eig(d);
    CHECK(e.values(0) == doctest::Approx(2.0));
    CHECK(e.values(1) == doctest::Approx(1.0));

    RealMatrix s(2, 2);
    s << 0, 1, 1, 0;
    e = mat::sym_eig(s);
    CHECK(e.values(0) == doctest::Approx(1.0));
    CHECK(e.values(1) == doctest::Approx(-1.0));
  }

  TEST_CASE("sym_eig reconstructs random symmetric matrices") {
    std::mt19937_64 rng(11);
    for (int n : {1, 3, 8, 20}) {
      const RealMatrix a = oracle::random_symmetric(rng, n);
      const auto e = mat::sym_eig(a);
      const RealMatrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
      CHECK((back - a).norm() <= 1e-9 * a.norm());
      CHECK((e.vectors.transpose() * e.vectors - RealMatrix::Identity(n, n)).norm() <= 1e-10);
      for (int k = 1; k < n; ++k) CHECK(e.values(k - 1) >= e.values(k));
      const auto ref = oracle::eigenvalues(a);
      for (int k = 0; k < n; ++k) CHECK(std::abs(e.values(k) - ref(n - 1 - k)) <= 1e-10 * (1 + a.norm()));
    }
  }

  TEST_CASE("sym_eig rejects bad input") {
    CHECK_THROWS_AS(mat::sym_eig(RealMatrix::Zero(2, 3)), ShapeError);
    RealMatrix a(2, 2);
    a << 1, 2, 0, 1;
    CHECK_THROWS_AS(mat::sym_eig(a), ValidationError);
  }

  TEST_CASE("op_norm") {
    RealMatrix d(2, 2);
    d << 3, 0, 0, -4;
    CHECK(mat::op_norm(d) == doctest::Approx(4.0));
    RealMatrix n(2, 2);
    n << 0, 2, 0, 0;
    CHECK(mat::op_norm(n) == doctest::Approx(2.0));
    RealMatrix x(2, 2);
    x << 0, 1, -1, 0;
    CHECK(mat::op_norm(mat::realify(RealMatrix::Identity(2, 2), x)) == doctest::Approx(2.0).epsilon(1e-12));

    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
      const RealMatrix a = oracle::random_matrix(rng, 4, 6);
      const RealMatrix b = oracle::random_matrix(rng, 6, 3);
      CHECK(std::abs(mat::op_norm(a) - oracle::spectral_norm(a)) <= 1e-9 * oracle::spectral_norm(a));
      CHECK(mat::op_norm(a * b) <= mat::op_norm(a) * mat::op_norm(b) * (1 + 1e-9));
      const RealMatrix q = Eigen::HouseholderQR<RealMatrix>(oracle::random_matrix(rng, 4, 4)).householderQ();
      CHECK(std::abs(mat::op_norm(q * a) - mat::op_norm(a)) <= 1e-9 * mat::op_norm(a));
    }
  }

  TEST_CASE("is_psd uses a relative tolerance") {
    RealMatrix a = RealMatrix::Identity(3, 3) * 1e6;
    a(2, 2) = -1e-4;
    CHECK(mat::is_psd(a));
    a(2, 2) = -1e-2;
    CHECK_FALSE(mat::is_psd(a));
    CHECK_FALSE(mat::is_psd(-RealMatrix::Identity(2, 2)));
  }

  TEST_CASE("partial_trace") {
    std::mt19937_64 rng(5);
    const RealMatrix b = oracle::random_symmetric(rng, 3);
    const RealMatrix c = oracle::random_symmetric(rng, 3);
    const RealMatrix m = mat::kron(mat::matrix_unit(2, 2, 0, 0), b) + mat::kron(mat::matrix_unit(2, 2, 1, 1), c);
    CHECK((mat::partial_trace(m, 2, 3, mat::Factor::first) - (b + c)).norm() <= 1e-14);

    const RealMatrix a = oracle::random_matrix(rng, 2, 2);
    CHECK((mat::partial_trace(mat::kron(a, b), 2, 3, mat::Factor::second) - a * b.trace()).norm() <= 1e-12);

    const RealMatrix id_choi = oracle::choi(2, 2, [](const RealMatrix& x) { return x; });
    CHECK((mat::partial_trace(id_choi, 2, 2, mat::Factor::first) - RealMatrix::Identity(2, 2)).norm() <= 1e-14);

    // Partial trace of a Choi matrix over the domain factor is u(I).
    const RealMatrix k = oracle::random_matrix(rng, 3, 2);
    auto f = [&](const RealMatrix& x) { return RealMatrix(k.transpose() * x * k); };
    CHECK((mat::partial_trace(oracle::choi(3, 2, f), 3, 2, mat::Factor::first) - f(RealMatrix::Identity(3, 3))).norm() <=
          1e-9);
    CHECK_THROWS_AS(mat::partial_trace(RealMatrix::Zero(5, 5), 2, 3, mat::Factor::first), ShapeError);
  }

  TEST_CASE("realify") {
    CHECK((mat::realify(mat::ComplexMatrix(RealMatrix::Identity(2, 2), RealMatrix::Zero(2, 2))) -
           RealMatrix::Identity(4, 4))
              .norm() == 0.0);
    RealMatrix expect(4, 4);
    expect << 0, 0, -1, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0, 0;
    CHECK((mat::realify(RealMatrix::Zero(2, 2), RealMatrix::Identity(2, 2)) - expect).norm() == 0.0);

    // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
    RealMatrix re(2, 2), im(2, 2);
    re << 1, 0, 0, 1;
    im << 0, 1, -1, 0;
    const auto ev = oracle::eigenvalues(mat::realify(re, im));
    CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ev(3) == doctest::Approx(2.0));
    CHECK_THROWS_AS(mat::ComplexMatrix(RealMatrix::Zero(2, 2), RealMatrix::Zero(3, 3)), ShapeError);
  }

  TEST_CASE("realify preserves Hermitian positivity and norms") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
      Eigen::MatrixXcd z(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) z(i, j) = {oracle::random_matrix(rng, 1, 1)(0), oracle::random_matrix(rng, 1, 1)(0)};
      Eigen::MatrixXcd h = (z + z.adjoint()) / 2.0;
      if (t % 2 == 0) h = z * z.adjoint();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
      const double lo = es.eigenvalues().minCoeff();
      const double nrm = es.eigenvalues().cwiseAbs().maxCoeff();
      const RealMatrix r = mat::realify(RealMatrix(h.real()), RealMatrix(h.imag()));
      const bool complex_psd = lo >= -1e-9 * std::max(1.0, nrm);
      CHECK(complex_psd == mat::is_psd(r));
      CHECK(std::abs(mat::op_norm(r) - nrm) <= 1e-9 * nrm);
    }
  }

  TEST_CASE("canonical_shuffle reorders tensor factors") {
    CHECK(mat::canonical_shuffle(1, 1) == std::vector<std::size_t>{0, 1});
    CHECK(mat::canonical_shuffle(2, 1) == std::vector<std::size_t>{0, 2, 1, 3});
    std::mt19937_64 rng(4);
    const RealMatrix a = oracle::random_matrix(rng, 3, 3);
    const RealMatrix s = oracle::random_matrix(rng, 2, 2);
    const RealMatrix b = oracle::random_matrix(rng, 2, 2);
    const auto perm = mat::canonical_shuffle(3, 2);
    const RealMatrix moved = mat::permute(mat::kron(a, mat::kron(s, b)), perm);
    CHECK((moved - mat::kron(s, mat::kron(a, b))).norm() <= 1e-12);

    const RealMatrix g = oracle::random_matrix(rng, 12, 12);
    const RealMatrix p = g * g.transpose();
    const auto e1 = oracle::eigenvalues(p);
    const auto e2 = oracle::eigenvalues(mat::permute(p, perm));
    CHECK((e1 - e2).norm() <= 1e-9 * e1.norm());
  }

  TEST_CASE("psd helpers") {
    std::mt19937_64 rng(8);
    const RealMatrix g = oracle::random_matrix(rng, 4, 2);
    const RealMatrix p = g * g.transpose();
    const RealMatrix r = mat::psd_sqrt(p);
    CHECK((r * r - p).norm() <= 1e-9 * p.norm());
    const RealMatrix e = mat::range_projection(p);
    CHECK(e.trace() == doctest::Approx(2.0));
    CHECK((e * p - p).norm() <= 1e-9 * p.norm());
    const RealMatrix pinv = mat::sym_pinv(p);
    CHECK((p * pinv * p - p).norm() <= 1e-9 * p.norm());
  }
}
