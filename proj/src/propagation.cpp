#include "lmpcc/propagation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lmpcc {

Eigen::Matrix2d LateralCovariance::matrix() const {
  Eigen::Matrix2d m;
  m << s_vyvy, s_vyr, s_vyr, s_rr;
  return m;
}

LateralCovariance LateralCovariance::from_matrix(const Eigen::Matrix2d& m) {
  return {m(0, 0), m(1, 1), 0.5 * (m(0, 1) + m(1, 0))};
}

LateralCovariance propagate_step(const LateralCovariance& cov, const Eigen::Matrix2d& A,
                                 const Eigen::Matrix2d& B, const StageDisturbance& dist,
                                 double v_x, double dt, PropagationDiagnostics* diag) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate_step: dt must be positive");
  const Eigen::Matrix2d Ad = Eigen::Matrix2d::Identity() + A * dt;
  Eigen::Matrix2d S = Ad * cov.matrix() * Ad.transpose();
  const Eigen::Vector2d force_var(dist.var_FyF, dist.var_FyR);
  S += dt * dt * B * force_var.asDiagonal() * B.transpose();
  S(0, 0) += dt * dt * v_x * v_x * dist.var_r;
  S = 0.5 * (S + S.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(S);
  if (eig.eigenvalues().minCoeff() < 0.0) {
    if (diag) ++diag->psd_floor_count;
    const Eigen::Vector2d floored = eig.eigenvalues().cwiseMax(0.0);
    S = eig.eigenvectors() * floored.asDiagonal() * eig.eigenvectors().transpose();
    S = 0.5 * (S + S.transpose()).eval();
  }
  return LateralCovariance::from_matrix(S);
}

SigmaTrace propagate_horizon(const std::vector<StagePoint>& stages, const STPModel& model_fyf,
                             const STPModel& model_fyr, const STPModel& model_r, bool use_stp,
                             const VehicleParams& vp, const FialaParams& fp, int n_prob,
                             double dt) {
  const int n_stages = static_cast<int>(stages.size());
  if (n_prob < 1 || n_prob > n_stages)
    throw std::invalid_argument("propagate_horizon: n_prob out of range");

  SigmaTrace trace;
  trace.sigma_vy.assign(n_stages, 0.0);
  trace.sigma_r.assign(n_stages, 0.0);

  PropagationDiagnostics diag;
  LateralCovariance cov;  // zero: the current state is measured
  for (int k = 0; k + 1 < n_prob; ++k) {
    const StagePoint& sp = stages[k];
    auto query = [&](const STPModel& m) {
      return moment_match_gaussian(use_stp ? m.stp_posterior(sp.features)
                                           : m.gp_posterior(sp.features));
    };
    StageDisturbance dist;
    dist.var_FyF = query(model_fyf);
    dist.var_FyR = query(model_fyr);
    dist.var_r = query(model_r);

    const LateralJacobians jac = dynamics_jacobians(sp.state, sp.input, sp.corr, vp, fp);
    cov = propagate_step(cov, jac.A, jac.B, dist, sp.state.v_x, dt, &diag);
    trace.sigma_vy[k + 1] = std::sqrt(std::max(0.0, cov.s_vyvy));
    trace.sigma_r[k + 1] = std::sqrt(std::max(0.0, cov.s_rr));
  }
  trace.psd_floor_count = diag.psd_floor_count;
  return trace;
}

}  // namespace lmpcc
