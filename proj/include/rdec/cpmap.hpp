#pragma once

// Choi-matrix machinery: complete positivity, Kraus data, unital
// normalization and witness padding.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdec/opsys.hpp"
#include "rdec/sdp.hpp"

namespace rdec::cpmap {

using mat::RealMatrix;
using opsys::LinearMap;
using opsys::SystemPtr;

// sum_ij E_ij (x) u(E_ij), indexed matrix(i*m + p, j*m + q) = u(E_ij)(p, q).
struct ChoiMatrix {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  RealMatrix matrix;
};

// Requires a domain spanning its whole ambient algebra; throws DomainError
// otherwise (subsystem domains go through the extension program of is_cp).
ChoiMatrix choi(const LinearMap& u);
// Map M_n -> M_m with the given Choi matrix.
LinearMap map_from_choi(const ChoiMatrix& c);
RealMatrix apply_choi(const ChoiMatrix& c, const RealMatrix& x);

// u*(x) = u(x^T)^T
LinearMap involute(const LinearMap& u);
// Largest basis residual of u* - u (resp. u* + u), relative to max(1, |u|).
double selfadjoint_residual(const LinearMap& u);
double skew_residual(const LinearMap& u);

enum class Verdict { cp, not_cp, indeterminate };
std::string to_string(Verdict v);

struct CpCheck {
  Verdict verdict = Verdict::indeterminate;
  std::string route;  // "choi" or "extension"
  bool star_preserving = false;
  double star_residual = 0.0;
  // Smallest eigenvalue of the (extension) Choi matrix, or the optimal shift
  // -s of the extension program.
  double min_eig = 0.0;
  // Choi matrix of u (full domain) or of a CP ambient extension.
  std::optional<ChoiMatrix> witness;
  std::string note;
};

CpCheck is_cp(const LinearMap& u, double tol = mat::kPsdTol);

struct StinespringData {
  std::vector<RealMatrix> kraus;  // u(x) = sum_k K_k^T x K_k
  Eigen::Index dilation_dim = 0;
  double t_norm_sq = 0.0;  // || sum_k K_k^T K_k ||
  double residual = 0.0;
};

// Spectral factorization of a PSD Choi matrix; eigenvalues at or below
// 1e-10 * lambda_max are dropped.
StinespringData kraus_from_choi(const ChoiMatrix& c);
// Throws PreconditionError when u is not CP.
StinespringData kraus_stinespring(const LinearMap& u);
// Largest basis residual of u(b) - sum_k K_k^T b K_k.
double kraus_residual(const LinearMap& u, const std::vector<RealMatrix>& kraus);

// psi(x) = <density, x>.
struct State {
  RealMatrix density;
  double operator()(const RealMatrix& x) const { return mat::inner(density, x); }
};
State normalized_trace(Eigen::Index n);

struct UcpNormalization {
  RealMatrix a;
  LinearMap psi;
  double residual = 0.0;  // largest basis residual of phi - a psi(.) a
};

// phi = a psi(.) a with a = phi(I)^{1/2} and psi unital CP. On the kernel
// projection e of a, psi carries state(.) (I - e).
UcpNormalization normalize_ucp(const LinearMap& phi, const std::optional<State>& state = std::nullopt);

// s_i + state(.) (I - s_i(I)). Throws PreconditionError when ||s_i(I)|| > 1.
std::pair<LinearMap, LinearMap> ucp_witnesses(const LinearMap& u, const LinearMap& s1, const LinearMap& s2,
                                              const std::optional<State>& state = std::nullopt);

// x -> [[s1(x), u(x)], [u*(x), s2(x)]] into full_real(2m).
LinearMap block_map(const LinearMap& s1, const LinearMap& u, const LinearMap& s2);
// x -> c(s(x), u(x)) = [[s(x), -u(x)], [u(x), s(x)]] into full_real(2m).
LinearMap c_map(const LinearMap& s, const LinearMap& u);

// u^(k) applied to a k x k block matrix over the domain ambient.
RealMatrix apply_amplified(const LinearMap& u, const RealMatrix& x, Eigen::Index k);

}  // namespace rdec::cpmap
