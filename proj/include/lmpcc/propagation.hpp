#pragma once

#include <Eigen/Core>
#include <vector>

#include "lmpcc/dynamics.hpp"
#include "lmpcc/stp_model.hpp"
#include "lmpcc/vehicle.hpp"

namespace lmpcc {

// Symmetric 2x2 covariance of (v_y, r) in packed form.
struct LateralCovariance {
  double s_vyvy = 0.0;
  double s_rr = 0.0;
  double s_vyr = 0.0;

  Eigen::Matrix2d matrix() const;
  static LateralCovariance from_matrix(const Eigen::Matrix2d& m);
};

// Moment-matched variances of the three mismatch channels at one stage.
struct StageDisturbance {
  double var_FyF = 0.0;
  double var_FyR = 0.0;
  double var_r = 0.0;
};

struct PropagationDiagnostics {
  int psd_floor_count = 0;
};

// One EKF-style covariance step with discrete transition A_d = I + A dt:
//   S+ = A_d S A_d' + dt^2 B diag(var_FyF, var_FyR) B'
//        + (dt v_x)^2 var_r e_vy e_vy'
// The yaw-rate mismatch multiplies v_x in the lateral acceleration and never
// enters the yaw moment, so its variance injects only into the v_y row (the
// v_y in the longitudinal equation does not feed this 2x2 block). The result
// is symmetrized and floored at zero eigenvalues, counting floor events.
LateralCovariance propagate_step(const LateralCovariance& cov, const Eigen::Matrix2d& A,
                                 const Eigen::Matrix2d& B, const StageDisturbance& dist,
                                 double v_x, double dt,
                                 PropagationDiagnostics* diag = nullptr);

// A stage of the predicted trajectory with everything the uncertainty pass
// needs: the operating point for Jacobians and the feature vector for the
// mismatch-model queries.
struct StagePoint {
  VehicleState state;
  ControlInput input;
  MismatchCorrection corr;
  Eigen::VectorXd features;
};

struct SigmaTrace {
  std::vector<double> sigma_vy;  // standard deviations per stage, size = stages.size()
  std::vector<double> sigma_r;
  int psd_floor_count = 0;
};

// Propagates the lateral covariance over the reduced horizon: stage 0 starts
// at zero (measured state), stages n_prob and beyond stay zero. use_stp picks
// the Student-t posterior (moment matched) over the plain GP one.
SigmaTrace propagate_horizon(const std::vector<StagePoint>& stages, const STPModel& model_fyf,
                             const STPModel& model_fyr, const STPModel& model_r, bool use_stp,
                             const VehicleParams& vp, const FialaParams& fp, int n_prob,
                             double dt);

}  // namespace lmpcc
