#include "rdec/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rdec/error.hpp"

namespace rdec::sdp {

namespace {

using ConstMap = Eigen::Map<const RealMatrix>;

constexpr double kInfeasibleGuard = 1e-6;
constexpr int kMaxIterations = 120;

RealMatrix as_matrix(const RealVector& v, Eigen::Index size) {
  return ConstMap(v.data(), size, size);
}

RealVector as_vector(const RealMatrix& m) {
  return Eigen::Map<const RealVector>(m.data(), m.size());
}

// Largest alpha with m + alpha * d still PSD (infinity when unbounded).
double max_step(const RealMatrix& m, const RealMatrix& d) {
  Eigen::LLT<RealMatrix> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  const RealMatrix a = llt.matrixL().solve(d);
  const RealMatrix b = llt.matrixL().solve(RealMatrix(a.transpose()));
  const double lam = mat::min_eig(mat::symmetrized(b));
  if (lam >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lam;
}

struct Iterate {
  RealVector y;
  std::vector<RealMatrix> x;
  std::vector<RealMatrix> z;
};

struct IpmResult {
  Iterate it;
  bool converged = false;
  int iterations = 0;
  double pinf = 0.0;
  double dinf = 0.0;
  double gap = 0.0;
  std::string note;
};

class InteriorPoint {
 public:
  InteriorPoint(const SdpProblem& p, double tol) : p_(p), tol_(tol) {
    k_ = p.variables();
    n_total_ = 0;
    f0_norm_ = 0.0;
    for (const auto& b : p.blocks) {
      n_total_ += b.size();
      f0_norm_ += b.constant.squaredNorm();
    }
    f0_norm_ = std::sqrt(f0_norm_);
    c_norm_ = p.objective.norm();
    guard_ = 1e6 * std::max(1.0, p.scale());
  }

  IpmResult run() {
    IpmResult res;
    Iterate& it = res.it;
    initial_point(it);
    const double ftol = tol_;

    for (int iter = 0; iter < kMaxIterations; ++iter) {
      res.iterations = iter;
      // Residuals.
      std::vector<RealMatrix> rp(p_.blocks.size());
      RealVector rd = p_.objective;
      double rp_sq = 0.0;
      double xz = 0.0;
      double dobj = 0.0;
      for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
        const auto& blk = p_.blocks[b];
        rp[b] = blk.evaluate(it.y) - it.z[b];
        rp_sq += rp[b].squaredNorm();
        rd -= blk.stack.transpose() * as_vector(it.x[b]);
        xz += mat::inner(it.x[b], it.z[b]);
        dobj -= mat::inner(blk.constant, it.x[b]);
      }
      const double pobj = p_.objective.dot(it.y);
      const double mu = xz / static_cast<double>(n_total_);
      res.pinf = std::sqrt(rp_sq) / (1.0 + f0_norm_);
      res.dinf = rd.norm() / (1.0 + c_norm_);
      const double denom = 1.0 + std::abs(pobj) + std::abs(dobj);
      res.gap = std::max(xz, std::abs(pobj - dobj));
      const double relgap = res.gap / denom;
      if (res.pinf <= ftol && res.dinf <= ftol && relgap <= tol_) {
        res.converged = true;
        return res;
      }
      if (it.y.size() > 0 && it.y.cwiseAbs().maxCoeff() > guard_) {
        res.note = "iterates exceeded the divergence guard";
        return res;
      }

      // Schur complement M_ij = <F_i, X F_j Z^-1>.
      std::vector<RealMatrix> zinv(p_.blocks.size());
      RealMatrix schur = RealMatrix::Zero(k_, k_);
      for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
        const auto& blk = p_.blocks[b];
        const Eigen::Index s = blk.size();
        Eigen::LLT<RealMatrix> llt(it.z[b]);
        if (llt.info() != Eigen::Success) {
          res.note = "slack matrix lost definiteness";
          return res;
        }
        zinv[b] = llt.solve(RealMatrix::Identity(s, s));
        zinv[b] = mat::symmetrized(zinv[b]);
        RealMatrix g(s * s, k_);
        for (Eigen::Index i = 0; i < k_; ++i) {
          const ConstMap fi(blk.stack.col(i).data(), s, s);
          RealMatrix prod = it.x[b] * fi * zinv[b];
          g.col(i) = as_vector(prod);
        }
        schur.noalias() += blk.stack.transpose() * g;
      }
      schur = 0.5 * (schur + schur.transpose());
      Eigen::LLT<RealMatrix> schur_llt(schur);
      if (schur_llt.info() != Eigen::Success) {
        const double reg = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
        schur.diagonal().array() += reg;
        schur_llt.compute(schur);
        if (schur_llt.info() != Eigen::Success) {
          res.note = "Schur complement is singular";
          return res;
        }
      }

      // Predictor.
      std::vector<RealMatrix> none;
      Direction pred = direction(it, rp, zinv, schur_llt, 0.0, none);
      double ax = 1.0;
      double az = 1.0;
      for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
        ax = std::min(ax, max_step(it.x[b], pred.dx[b]));
        az = std::min(az, max_step(it.z[b], pred.dz[b]));
      }
      double xz_aff = 0.0;
      for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
        xz_aff += mat::inner(it.x[b] + ax * pred.dx[b], it.z[b] + az * pred.dz[b]);
      }
      const double mu_aff = xz_aff / static_cast<double>(n_total_);
      const double expon = std::max(1.0, 3.0 * std::min(ax, az) * std::min(ax, az));
      double sigma = mu > 0 ? std::pow(std::max(0.0, mu_aff / mu), expon) : 0.0;
      sigma = std::clamp(sigma, 0.0, 1.0);

      // Corrector.
      std::vector<RealMatrix> corr(p_.blocks.size());
      for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
        corr[b] = pred.dx[b] * pred.dz[b] * zinv[b];
      }
      Direction dir = direction(it, rp, zinv, schur_llt, sigma * mu, corr);
      const double gamma = 0.9 + 0.09 * std::min(ax, az);
      double sx = std::numeric_limits<double>::infinity();
      double sz = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
        sx = std::min(sx, max_step(it.x[b], dir.dx[b]));
        sz = std::min(sz, max_step(it.z[b], dir.dz[b]));
      }
      const double step_x = std::min(1.0, gamma * sx);
      const double step_z = std::min(1.0, gamma * sz);
      if (step_x < 1e-10 && step_z < 1e-10) {
        res.note = "step length collapsed";
        return res;
      }
      it.y += step_z * dir.dy;
      for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
        it.x[b] = mat::symmetrized(RealMatrix(it.x[b] + step_x * dir.dx[b]));
        it.z[b] = mat::symmetrized(RealMatrix(it.z[b] + step_z * dir.dz[b]));
      }
    }
    res.iterations = kMaxIterations;
    res.note = "iteration budget exhausted";
    return res;
  }

 private:
  struct Direction {
    RealVector dy;
    std::vector<RealMatrix> dx;
    std::vector<RealMatrix> dz;
  };

  void initial_point(Iterate& it) const {
    it.y = RealVector::Zero(k_);
    it.x.clear();
    it.z.clear();
    for (const auto& blk : p_.blocks) {
      const Eigen::Index s = blk.size();
      const double sd = static_cast<double>(s);
      double xi = std::max(10.0, std::sqrt(sd));
      double eta = std::max({10.0, std::sqrt(sd), blk.constant.norm()});
      for (Eigen::Index i = 0; i < k_; ++i) {
        const double fn = blk.stack.col(i).norm();
        xi = std::max(xi, sd * (1.0 + std::abs(p_.objective(i))) / (1.0 + fn));
        eta = std::max(eta, fn);
      }
      it.x.push_back(xi * RealMatrix::Identity(s, s));
      it.z.push_back(eta * RealMatrix::Identity(s, s));
    }
  }

  Direction direction(const Iterate& it, const std::vector<RealMatrix>& rp,
                      const std::vector<RealMatrix>& zinv,
                      const Eigen::LLT<RealMatrix>& schur_llt, double target_mu,
                      const std::vector<RealMatrix>& corr) const {
    // M dy = <F_i, target_mu Z^-1 - X rp Z^-1 - corr> - c_i
    std::vector<RealMatrix> base(p_.blocks.size());
    RealVector rhs = -p_.objective;
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      base[b] = target_mu * zinv[b] - it.x[b] * rp[b] * zinv[b];
      if (!corr.empty()) base[b] -= corr[b];
      rhs += p_.blocks[b].stack.transpose() * as_vector(base[b]);
    }
    Direction d;
    d.dy = schur_llt.solve(rhs);
    d.dx.resize(p_.blocks.size());
    d.dz.resize(p_.blocks.size());
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      const auto& blk = p_.blocks[b];
      d.dz[b] = as_matrix(blk.stack * d.dy, blk.size()) + rp[b];
      RealMatrix dx = target_mu * zinv[b] - it.x[b] - it.x[b] * d.dz[b] * zinv[b];
      if (!corr.empty()) dx -= corr[b];
      d.dx[b] = mat::symmetrized(dx);
    }
    return d;
  }

  const SdpProblem& p_;
  double tol_;
  Eigen::Index k_ = 0;
  Eigen::Index n_total_ = 0;
  double f0_norm_ = 0.0;
  double c_norm_ = 0.0;
  double guard_ = 0.0;
};

double block_min_eig(const SdpProblem& p, const RealVector& y) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& blk : p.blocks) {
    if (blk.size() == 0) continue;
    lo = std::min(lo, mat::min_eig(mat::symmetrized(blk.evaluate(y))));
  }
  return std::isfinite(lo) ? lo : 0.0;
}

// minimize s subject to F(y) + s I >= 0 and s >= -1.
SdpProblem phase_one(const SdpProblem& p) {
  const Eigen::Index k = p.variables();
  SdpProblem q;
  q.objective = RealVector::Zero(k + 1);
  q.objective(k) = 1.0;
  for (const auto& blk : p.blocks) {
    const Eigen::Index s = blk.size();
    LmiBlock nb;
    nb.constant = blk.constant;
    nb.stack.resize(s * s, k + 1);
    nb.stack.leftCols(k) = blk.stack;
    nb.stack.col(k) = as_vector(RealMatrix::Identity(s, s));
    q.blocks.push_back(std::move(nb));
  }
  LmiBlock floor;
  floor.constant = RealMatrix::Ones(1, 1);
  floor.stack = RealMatrix::Zero(1, k + 1);
  floor.stack(0, k) = 1.0;
  q.blocks.push_back(std::move(floor));
  return q;
}

}  // namespace

LmiBlock::LmiBlock(RealMatrix f0, const std::vector<RealMatrix>& coefficients)
    : constant(std::move(f0)) {
  const Eigen::Index s = constant.rows();
  stack.resize(s * s, static_cast<Eigen::Index>(coefficients.size()));
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (coefficients[i].rows() != s || coefficients[i].cols() != s) {
      throw ShapeError("LMI coefficient " + std::to_string(i) + " has the wrong size");
    }
    stack.col(static_cast<Eigen::Index>(i)) = as_vector(coefficients[i]);
  }
}

RealMatrix LmiBlock::coefficient(Eigen::Index i) const {
  return as_matrix(stack.col(i), size());
}

RealMatrix LmiBlock::evaluate(const RealVector& y) const {
  if (y.size() == 0) return constant;
  return constant + as_matrix(stack * y, size());
}

void SdpProblem::validate() const {
  const Eigen::Index k = variables();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& blk = blocks[b];
    const Eigen::Index s = blk.constant.rows();
    if (blk.constant.cols() != s) throw ShapeError("LMI block constant is not square");
    if (blk.stack.rows() != s * s || blk.stack.cols() != k) {
      throw ShapeError("LMI block " + std::to_string(b) + " has a malformed coefficient stack");
    }
    const double scale = std::max(1.0, blk.constant.norm());
    if ((blk.constant - blk.constant.transpose()).norm() > 1e-12 * scale) {
      throw ValidationError("LMI block " + std::to_string(b) + ": constant is not symmetric");
    }
    for (Eigen::Index i = 0; i < k; ++i) {
      const RealMatrix f = blk.coefficient(i);
      if ((f - f.transpose()).norm() > 1e-12 * std::max(1.0, f.norm())) {
        throw ValidationError("LMI block " + std::to_string(b) + ": coefficient " +
                              std::to_string(i) + " is not symmetric");
      }
    }
    if (!blk.constant.allFinite() || !blk.stack.allFinite()) {
      throw ValidationError("LMI block " + std::to_string(b) + " has non-finite entries");
    }
  }
  if (!objective.allFinite()) throw ValidationError("objective has non-finite entries");
}

double SdpProblem::scale() const {
  double s = objective.size() ? objective.cwiseAbs().maxCoeff() : 0.0;
  for (const auto& blk : blocks) {
    s = std::max(s, blk.constant.norm());
    for (Eigen::Index i = 0; i < blk.stack.cols(); ++i) s = std::max(s, blk.stack.col(i).norm());
  }
  return s;
}

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::optimal:
      return "optimal";
    case SdpStatus::infeasible:
      return "infeasible";
    case SdpStatus::indeterminate:
      return "indeterminate";
  }
  return "indeterminate";
}

SdpSolution solve(const SdpProblem& problem, double tol) {
  if (!(tol >= 1e-10 && tol <= 1e-4)) {
    throw PreconditionError("solve: tolerance must lie in [1e-10, 1e-4]");
  }
  problem.validate();
  SdpSolution sol;
  const double scale = std::max(1.0, problem.scale());

  if (problem.variables() == 0) {
    sol.y = RealVector::Zero(0);
    sol.min_block_eig = block_min_eig(problem, sol.y);
    sol.status = sol.min_block_eig >= -1e-8 * scale ? SdpStatus::optimal : SdpStatus::infeasible;
    return sol;
  }

  InteriorPoint ipm(problem, tol);
  IpmResult res = ipm.run();
  sol.y = res.it.y;
  sol.iterations = res.iterations;
  sol.objective_value = problem.objective.dot(sol.y);
  sol.gap = res.gap;
  sol.primal_infeasibility = res.pinf;
  sol.dual_infeasibility = res.dinf;
  sol.dual = res.it.x;
  sol.min_block_eig = block_min_eig(problem, sol.y);
  sol.note = res.note;
  if (res.converged) {
    sol.status = SdpStatus::optimal;
    return sol;
  }

  // Classify the failure: a strictly positive phase-one optimum means no
  // feasible point exists within the guard.
  const SdpProblem p1 = phase_one(problem);
  InteriorPoint probe(p1, std::max(tol, 1e-8));
  IpmResult r1 = probe.run();
  const double s_star = r1.it.y(r1.it.y.size() - 1);
  if (r1.converged && s_star > kInfeasibleGuard * scale) {
    sol.status = SdpStatus::infeasible;
    sol.note = "phase one optimum " + std::to_string(s_star) + " > 0";
  } else {
    sol.status = SdpStatus::indeterminate;
    if (sol.note.empty()) sol.note = "no convergence";
  }
  return sol;
}

}  // namespace rdec::sdp
