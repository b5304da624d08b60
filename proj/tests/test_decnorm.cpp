#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rdec/decnorm.hpp"
#include "rdec/error.hpp"

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

LinearMap random_skew(std::mt19937_64& rng, const opsys::SystemPtr& v) {
  const auto u = random_map(rng, v, v);
  return (u - cpmap::involute(u)) * 0.5;
}

bool cp(const LinearMap& u) { return cpmap::is_cp(u).verdict == cpmap::Verdict::cp; }

double unit_norm(const LinearMap& u) {
  const Eigen::Index n = u.domain()->ambient();
  return oracle::spectral_norm(u.apply(RealMatrix::Identity(n, n)));
}

// Lower bound for cb: ||u^(k)(x)|| / ||x|| over sampled contractions.
double sampled_cb_lower(std::mt19937_64& rng, const LinearMap& u, int samples) {
  const Eigen::Index n = u.domain()->ambient();
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index k = 1 + s % 3;
    const RealMatrix x = oracle::random_matrix(rng, k * n, k * n);
    best = std::max(best, oracle::spectral_norm(cpmap::apply_amplified(u, x, k)) / oracle::spectral_norm(x));
  }
  return best;
}

}  // namespace

TEST_SUITE("decnorm") {
  TEST_CASE("dec_norm examples") {
    const auto m2 = opsys::full_real(2);
    const auto id = decnorm::dec_norm(LinearMap::identity(m2));
    REQUIRE(id.decomposable());
    CHECK(std::abs(id.value - 1.0) <= 1e-6);
    REQUIRE(id.s1.has_value());
    REQUIRE(id.extension.has_value());
    CHECK(oracle::lambda_min(id.extension->matrix) >= -1e-7);
    CHECK(unit_norm(*id.s1) <= id.value + 1e-6);
    CHECK(unit_norm(*id.s2) <= id.value + 1e-6);
    CHECK(id.certificate.status == sdp::SdpStatus::optimal);

    std::mt19937_64 rng(1);
    for (int t = 0; t < 3; ++t) {
      RealMatrix a = oracle::random_matrix(rng, 2, 2);
      RealMatrix b = oracle::random_matrix(rng, 2, 2);
      a /= oracle::spectral_norm(a);
      b /= oracle::spectral_norm(b);
      CHECK(decnorm::dec_norm(opsys::conjugation_map(a, b)).value <= 1.0 + 1e-6);
    }

    const auto im = decnorm::dec_norm(opsys::imaginary_part_map(2));
    CHECK(std::abs(im.value - 1.0) <= 1e-6);
  }

  TEST_CASE("dec witnesses assemble into a CP block map") {
    std::mt19937_64 rng(2);
    const auto u = random_map(rng, opsys::full_real(2), opsys::full_real(2));
    const auto r = decnorm::dec_norm(u);
    REQUIRE(r.decomposable());
    const auto blk = cpmap::block_map(*r.s1, u, *r.s2);
    CHECK(oracle::lambda_min(cpmap::choi(blk).matrix) >= -1e-6 * r.value);
    CHECK(std::max(unit_norm(*r.s1), unit_norm(*r.s2)) <= r.value + 1e-6);
    CHECK(sampled_cb_lower(rng, u, 30) <= r.value + 1e-7);
  }

  TEST_CASE("subsystem domain and codomain") {
    std::mt19937_64 rng(3);
    const RealMatrix s = oracle::random_symmetric(rng, 3);
    const RealMatrix g = oracle::random_matrix(rng, 3, 3);
    const RealMatrix a = g - g.transpose();
    const auto w = opsys::span(3, {RealMatrix::Identity(3, 3), s, a});
    const auto u = random_map(rng, opsys::quaternion(), w);
    const auto r = decnorm::dec_norm(u);
    REQUIRE(r.decomposable());
    CHECK(w->contains(r.s1->apply(RealMatrix::Identity(4, 4)), 1e-6));
    const double cb = decnorm::cb_norm(u).value;
    CHECK(cb <= r.value + 1e-7);
    // Enlarging the codomain can only lower dec.
    const auto wide = decnorm::dec_norm(opsys::with_codomain(u, opsys::full_real(3)));
    CHECK(wide.value <= r.value + 1e-7);

    // Restriction to a subsystem cannot increase dec.
    const auto m2 = opsys::full_real(2);
    const auto big = random_map(rng, m2, m2);
    const RealMatrix x = oracle::random_matrix(rng, 2, 2);
    const auto sub = opsys::span(2, {RealMatrix::Identity(2, 2), RealMatrix(x + x.transpose()), RealMatrix(x - x.transpose())});
    CHECK(decnorm::dec_norm(opsys::restrict_to(big, sub)).value <= decnorm::dec_norm(big).value + 1e-6);
  }

  TEST_CASE("cb_norm examples") {
    const auto m2 = opsys::full_real(2);
    CHECK(std::abs(decnorm::cb_norm(LinearMap::identity(m2)).value - 1.0) <= 1e-6);
    const auto t = decnorm::cb_norm(opsys::transpose_map(m2));
    CHECK(std::abs(t.value - 2.0) <= 1e-6);
    // Lower bound 2: transpose applied blockwise to the flip sum E_ij (x) E_ji.
    RealMatrix flip = RealMatrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) flip.block(2 * i, 2 * j, 2, 2) = mat::matrix_unit(2, 2, j, i);
    const RealMatrix image = cpmap::apply_amplified(opsys::transpose_map(m2), flip, 2);
    CHECK(oracle::spectral_norm(flip) == doctest::Approx(1.0));
    CHECK(oracle::spectral_norm(image) == doctest::Approx(2.0));
    CHECK(std::abs(decnorm::dec_norm(opsys::transpose_map(m2)).value - t.value) <= 1e-5);
  }

  TEST_CASE("jordan_split") {
    const auto m2 = opsys::full_real(2);
    const auto idp = decnorm::jordan_split(LinearMap::identity(m2));
    CHECK(idp.sa.distance(LinearMap::identity(m2)) == 0.0);
    CHECK(idp.as.coefficient_norm() == 0.0);
    const auto im = opsys::imaginary_part_map(2);
    const auto imp = decnorm::jordan_split(im);
    CHECK(imp.sa.coefficient_norm() <= 1e-14);
    CHECK(imp.as.distance(im) <= 1e-14);

    std::mt19937_64 rng(4);
    const auto u = random_map(rng, opsys::quaternion(), opsys::full_real(3));
    const auto p = decnorm::jordan_split(u);
    CHECK((p.sa + p.as).distance(u) <= 1e-14 * std::max(1.0, u.coefficient_norm()));
    CHECK(cpmap::selfadjoint_residual(p.sa) <= 1e-12);
    CHECK(cpmap::skew_residual(p.as) <= 1e-12);
  }

  TEST_CASE("sa_difference_norm") {
    const auto m2 = opsys::full_real(2);
    std::mt19937_64 rng(5);
    const RealMatrix k = oracle::random_matrix(rng, 2, 2);
    const auto cpm = opsys::conjugation_map(k, k);
    const auto r = decnorm::sa_difference_norm(cpm);
    CHECK(std::abs(r.value - unit_norm(cpm)) <= 1e-6);

    const auto diff = LinearMap::identity(m2) - opsys::transpose_map(m2);
    const auto rd = decnorm::sa_difference_norm(diff);
    CHECK(std::abs(rd.value - decnorm::dec_norm(diff).value) <= 1e-5);
    CHECK(cp(rd.u1));
    CHECK(cp(rd.u2));
    CHECK((rd.u1 - rd.u2).distance(diff) <= 1e-6);

    CHECK(decnorm::sa_difference_norm(LinearMap::zero(m2, m2)).value <= 1e-6);
    CHECK_THROWS_AS(decnorm::sa_difference_norm(opsys::imaginary_part_map(2)), PreconditionError);
  }

  TEST_CASE("skew_witness") {
    const auto m2 = opsys::full_real(2);
    const auto z = decnorm::skew_witness(LinearMap::zero(m2, m2));
    CHECK(z.value <= 1e-6);

    const auto im = opsys::imaginary_part_map(2);
    const auto w = decnorm::skew_witness(im);
    CHECK(std::abs(w.value - 1.0) <= 1e-6);
    CHECK(cp(cpmap::c_map(opsys::real_part_map(2), im)));

    std::mt19937_64 rng(6);
    const auto u = random_skew(rng, m2);
    const double base = decnorm::skew_witness(u).value;
    CHECK(std::abs(decnorm::skew_witness(u * 2.5).value - 2.5 * base) <= 1e-5);
    CHECK(std::abs(base - decnorm::dec_norm(u).value) <= 1e-5);
    CHECK_THROWS_AS(decnorm::skew_witness(LinearMap::identity(m2)), PreconditionError);

    // Averaging a witness pair gives a single witness.
    const auto r = decnorm::dec_norm(u);
    const auto avg = decnorm::average_witness(r);
    CHECK(oracle::lambda_min(cpmap::choi(cpmap::c_map(avg, u)).matrix) >= -1e-6);
  }

  TEST_CASE("icp_extract") {
    const auto m2 = opsys::full_real(2);
    std::mt19937_64 rng(7);
    const RealMatrix k = oracle::random_matrix(rng, 2, 2);
    const auto psi = opsys::conjugation_map(k, k);
    const auto parts = decnorm::icp_extract(opsys::complexify_map(psi));
    CHECK(parts.sigma.coefficient_norm() <= 1e-12);
    CHECK(parts.psi.distance(psi) <= 1e-12);

    const auto hom = opsys::complex_multiplication_map(2);
    const auto hp = decnorm::icp_extract(hom);
    CHECK(cpmap::skew_residual(hp.sigma) <= 1e-10);
    // sigma(c(x, y)) = y: the imaginary part as a real matrix.
    for (const auto& b : hp.sigma.domain()->basis())
      CHECK((hp.sigma.apply(b) - b.bottomLeftCorner(2, 2)).norm() <= 1e-12);

    // Random CP map commuting with J: conjugation by a complex matrix.
    for (int t = 0; t < 2; ++t) {
      const RealMatrix re = oracle::random_matrix(rng, 2, 2), imz = oracle::random_matrix(rng, 2, 2);
      const RealMatrix c = mat::realify(re, imz);
      const auto c2 = opsys::complexify_system(m2);
      const auto phi = LinearMap::from_function(c2, c2, [&](const RealMatrix& x) { return RealMatrix(c.transpose() * x * c); });
      const auto ph = decnorm::icp_extract(phi);
      CHECK(cpmap::skew_residual(ph.sigma) <= 1e-10);
      CHECK(decnorm::dec_norm(ph.sigma).value <= unit_norm(phi) + 1e-6);
    }
    CHECK_THROWS_AS(decnorm::icp_extract(LinearMap::identity(m2)), DomainError);
  }

  TEST_CASE("scp_complete") {
    const auto m2 = opsys::full_real(2);
    const auto z = decnorm::scp_complete(LinearMap::zero(m2, m2));
    CHECK(z.dec <= 1e-6);
    CHECK(z.unit_norm == 0.0);

    const auto im = opsys::imaginary_part_map(2);
    const auto c = decnorm::scp_complete(im);
    REQUIRE(c.unital_s.has_value());
    const auto cm = cpmap::c_map(*c.unital_s, im);
    CHECK(cp(cm));
    CHECK((cm.apply(RealMatrix::Identity(4, 4)) - RealMatrix::Identity(8, 8)).norm() <= 1e-6);

    std::mt19937_64 rng(8);
    for (int t = 0; t < 3; ++t) {
      const auto u = random_skew(rng, m2);
      const auto r = decnorm::scp_complete(u);
      CHECK(std::abs(r.block_norm - (r.dec + r.unit_norm)) <= 1e-5);
      CHECK(oracle::lambda_min(cpmap::choi(cpmap::c_map(r.s, u)).matrix) >= -1e-6);
      const RealMatrix si = r.s.apply(RealMatrix::Identity(2, 2));
      CHECK((si - r.dec * RealMatrix::Identity(2, 2)).norm() <= 1e-6);
      const RealMatrix ui = u.apply(RealMatrix::Identity(2, 2));
      CHECK(std::abs(oracle::spectral_norm(mat::realify(si, ui)) - r.block_norm) <= 1e-9);
    }
    CHECK_THROWS_AS(decnorm::scp_complete(LinearMap::identity(m2)), PreconditionError);
  }

  TEST_CASE("stinespring_scp") {
    const auto m2 = opsys::full_real(2);
    const auto z = decnorm::stinespring_scp(LinearMap::zero(m2, m2));
    CHECK(z.t.norm() <= 1e-4);

    const auto im = decnorm::stinespring_scp(opsys::imaginary_part_map(2));
    CHECK(std::abs(im.data.t_norm_sq - 1.0) <= 1e-5);
    CHECK(im.data.residual <= 1e-6);

    std::mt19937_64 rng(9);
    const auto u = random_skew(rng, m2);
    const auto st = decnorm::stinespring_scp(u);
    CHECK(st.data.residual <= 1e-6);
    const double cb = decnorm::cb_norm(u).value;
    CHECK(std::abs(st.data.t_norm_sq - (cb + st.completion.unit_norm)) <= 1e-5);
    // Independent reconstruction from T.
    const Eigen::Index r = st.data.dilation_dim;
    for (const auto& b : m2->basis()) {
      const RealMatrix big = mat::kron(RealMatrix::Identity(r, r), b);
      const RealMatrix y = st.t.transpose() * big * st.t;
      CHECK((y.bottomLeftCorner(2, 2) - u.apply(b)).norm() <= 1e-6);
    }
  }

  TEST_CASE("delta_value") {
    const auto l2 = opsys::ell_inf(2);
    const auto diag = LinearMap::from_function(l2, opsys::full_real(2), [](const RealMatrix& x) { return x; });
    decnorm::Factorization f;
    for (int k = 0; k < 2; ++k) f.pairs.emplace_back(mat::matrix_unit(2, 2, k, k), mat::matrix_unit(2, 2, k, k));
    CHECK(decnorm::delta_value(f, diag) == doctest::Approx(1.0));
    CHECK(std::abs(decnorm::dec_norm(diag).value - 1.0) <= 1e-6);

    std::mt19937_64 rng(10);
    const auto l3 = opsys::ell_inf(3);
    std::vector<RealMatrix> us;
    decnorm::Factorization g;
    for (int k = 0; k < 3; ++k) {
      const RealMatrix q = Eigen::HouseholderQR<RealMatrix>(oracle::random_matrix(rng, 2, 2)).householderQ();
      us.push_back(q);
      g.pairs.emplace_back(q, RealMatrix::Identity(2, 2));
    }
    const auto u = LinearMap(l3, opsys::full_real(2), us);
    CHECK(decnorm::delta_value(g, u) == doctest::Approx(3.0));
    CHECK(decnorm::dec_norm(u).value <= 3.0 + 1e-7);

    for (int t = 0; t < 3; ++t) {
      const auto v = random_map(rng, l3, opsys::full_real(2));
      decnorm::Factorization h;
      for (std::size_t k = 0; k < 3; ++k) {
        const RealMatrix a = oracle::random_matrix(rng, 2, 3);
        h.pairs.emplace_back(a, a.completeOrthogonalDecomposition().pseudoInverse() * v.images()[k]);
      }
      CHECK(decnorm::delta_value(h, v) >= decnorm::dec_norm(v).value - 1e-7);
    }
    decnorm::Factorization bad = f;
    bad.pairs[0].second *= 2.0;
    CHECK_THROWS_AS(decnorm::delta_value(bad, diag), ValidationError);
  }

  TEST_CASE("complex_dec_norm agrees with the realified program") {
    const auto c2 = opsys::complex_full(2);
    CHECK(std::abs(decnorm::complex_dec_norm(LinearMap::identity(c2)) - 1.0) <= 1e-6);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 2; ++t) {
      const RealMatrix a = mat::realify(oracle::random_matrix(rng, 2, 2), oracle::random_matrix(rng, 2, 2));
      const RealMatrix b = mat::realify(oracle::random_matrix(rng, 2, 2), oracle::random_matrix(rng, 2, 2));
      const auto u = LinearMap::from_function(c2, c2, [&](const RealMatrix& x) { return RealMatrix(a.transpose() * x * b); });
      CHECK(decnorm::complex_linearity_residual(u) <= 1e-12);
      CHECK(std::abs(decnorm::complex_dec_norm(u) - decnorm::dec_norm(u).value) <= 1e-5);
    }
    CHECK_THROWS_AS(decnorm::complex_dec_norm(opsys::real_part_map(2)), PreconditionError);
  }
}
