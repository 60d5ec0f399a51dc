#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "lmpcc/runlog.hpp"
#include "lmpcc/vehicle.hpp"

namespace lmpcc {

// Per-sample regression data for the three mismatch channels, rows aligned.
// Features are z = [v_x, delta, F_x, r, F_yF_model, F_yR_model], where the
// force entries are the nominal tyre forces plus the correction in effect.
struct MismatchDataset {
  static constexpr int kFeatureDim = 6;

  Eigen::MatrixXd Z;     // n x 6
  Eigen::VectorXd dFyF;  // measured minus nominal front lateral force [N]
  Eigen::VectorXd dFyR;  // rear [N]
  Eigen::VectorXd dr;    // measured minus one-step-predicted yaw rate [rad/s]
  std::vector<std::string> source;  // originating run per row

  Eigen::Index n() const { return Z.rows(); }
  const Eigen::VectorXd& targets(const std::string& channel) const;
};

// Extracts features and mismatch targets from closed-loop logs. Rows without
// a one-step prediction (first tick of each run) are dropped; empty input or
// zero usable rows are rejected.
MismatchDataset build_training_set(const std::vector<RunLog>& logs);

// Greedy farthest-point decimation in z-scored feature space down to at most
// m_max rows; starts from the point farthest from the feature centroid so
// the result is deterministic. Returns the dataset unchanged when already
// small enough.
MismatchDataset decimate(const MismatchDataset& data, Eigen::Index m_max);

// Feature vector for posterior queries at a predicted stage. Model-derived
// values stand in for the measurements used at training time: the corrected
// tyre forces substitute the force measurements and the predicted yaw rate
// the gyro reading. v_x is floored at v_eps so slip angles stay defined.
Eigen::VectorXd stage_features(const VehicleState& state, const ControlInput& input,
                               const MismatchCorrection& corr, const VehicleParams& vp,
                               const FialaParams& fp);

}  // namespace lmpcc
