#pragma once

// Decomposable and completely bounded norms, Jordan and skew structure,
// SCP/ICP conversions, Stinespring data for skew maps and delta bounds.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdec/cpmap.hpp"
#include "rdec/sdp.hpp"

namespace rdec::decnorm {

using mat::ComplexMatrix;
using mat::RealMatrix;
using opsys::LinearMap;
using opsys::SystemPtr;

enum class Outcome { decomposable, not_decomposable, indeterminate };
std::string to_string(Outcome o);

// Solver certificate of one norm program.
struct Certificate {
  sdp::SdpStatus status = sdp::SdpStatus::indeterminate;
  double gap = 0.0;
  double min_block_eig = 0.0;
  double equality_residual = 0.0;
  int iterations = 0;
  std::size_t variables = 0;
  std::size_t equalities = 0;
  std::string note;
};

struct DecResult {
  Outcome outcome = Outcome::indeterminate;
  double value = 0.0;  // meaningful when decomposable
  std::optional<LinearMap> s1;
  std::optional<LinearMap> s2;
  // Choi matrix of the optimal extension M_n -> M_2m in the block layout
  // [[S1, u], [u*, S2]].
  std::optional<cpmap::ChoiMatrix> extension;
  Certificate certificate;

  bool decomposable() const { return outcome == Outcome::decomposable; }
};

DecResult dec_norm(const LinearMap& u, double tol = sdp::kDefaultTol);

struct CbResult {
  double value = 0.0;
  Certificate certificate;
};

// Throws IndeterminateError when the solver cannot certify the optimum.
CbResult cb_norm(const LinearMap& u, double tol = sdp::kDefaultTol);

struct JordanParts {
  LinearMap sa;
  LinearMap as;
};
JordanParts jordan_split(const LinearMap& u);

struct SaDifference {
  double value = 0.0;
  LinearMap u1;
  LinearMap u2;
  Certificate certificate;
};
// inf ||u1 + u2|| over CP u1, u2 with u = u1 - u2. Requires u* = u.
SaDifference sa_difference_norm(const LinearMap& u, double tol = sdp::kDefaultTol);

struct SkewWitness {
  double value = 0.0;
  LinearMap s;
  cpmap::ChoiMatrix extension;  // layout [[S, u], [-u, S]]
  Certificate certificate;
};
// Single-witness program for a skew map: minimize ||s(I)|| with c(s, u) CP.
SkewWitness skew_witness(const LinearMap& u, double tol = sdp::kDefaultTol);
// (s1 + s2) / 2 for a witness pair of a skew map.
LinearMap average_witness(const DecResult& r);

struct IcpParts {
  LinearMap psi;    // rho o phi o kappa
  LinearMap sigma;  // sigma o phi o kappa
  double compatibility_residual = 0.0;
};
// Requires phi between complexified systems and commuting with the complex
// structures within 1e-9.
IcpParts icp_extract(const LinearMap& phi);

struct ScpCompletion {
  LinearMap s;  // dec * (unital CP map) with c(s, u) CP
  double dec = 0.0;
  double unit_norm = 0.0;   // ||u(I)||
  double block_norm = 0.0;  // ||c(s(I), u(I))||
  // Unital s with c(s, u) unital CP, present when u(I) = 0 and dec <= 1.
  std::optional<LinearMap> unital_s;
  // Choi of the ambient extension of c(s, u).
  cpmap::ChoiMatrix extension;
};
ScpCompletion scp_complete(const LinearMap& u, double tol = sdp::kDefaultTol);

struct ScpStinespring {
  cpmap::StinespringData data;
  RealMatrix t;  // stacked Kraus operators, c(s, u)(x) = T^T (I_r (x) x) T
  ScpCompletion completion;
};
// u(x) is the lower-left block of T^T (I_r (x) x) T.
ScpStinespring stinespring_scp(const LinearMap& u, double tol = sdp::kDefaultTol);

// u(e_k) = a_k b_k on ell_inf(n).
struct Factorization {
  std::vector<std::pair<RealMatrix, RealMatrix>> pairs;
};
double delta_value(const Factorization& f);
// Also checks a_k b_k = u(e_k) within 1e-9.
double delta_value(const Factorization& f, const LinearMap& u);

// Decomposable norm of a complex-linear map on complex_full(n) computed by the
// complex Hermitian-Choi program, realified only at the LMI level.
double complex_dec_norm(const LinearMap& u, double tol = sdp::kDefaultTol);
// Largest residual of u(J x) - J u(x) over the basis.
double complex_linearity_residual(const LinearMap& u);

}  // namespace rdec::decnorm
