#pragma once

#include <limits>
#include <string>

#include "lmpcc/runlog.hpp"
#include "lmpcc/scenario.hpp"

namespace lmpcc {

// Per-run summary. Mismatch RMS values are residuals of the controller's
// effective model: measurement minus nominal prediction minus the correction
// that was in effect, so the baseline's numbers are the raw model error and a
// learning variant is credited for what its corrections explain.
struct Metrics {
  bool success = false;
  std::string termination = "unknown";
  double peak_beta = 0.0;      // max |atan(v_y / v_x)| [rad], plant truth
  double peak_vy = 0.0;        // max |v_y| [m/s]
  double rms_dFyF = 0.0;       // residual front-force mismatch [N]
  double rms_dFyR = 0.0;       // residual rear-force mismatch [N]
  double rms_dr = 0.0;         // residual yaw-rate mismatch [rad/s]
  double min_clearance = std::numeric_limits<double>::infinity();  // [m]
  double mean_vx = 0.0;        // [m/s]
  double max_speed_kmh = std::numeric_limits<double>::quiet_NaN();  // sweep-level
};

Metrics compute_metrics(const RunLog& log, const Scenario& sc);

}  // namespace lmpcc
