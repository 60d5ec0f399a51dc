#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace lmpcc {

// Stages at which propagated sigma traces are logged.
inline constexpr std::array<int, 5> kSigmaLogStages = {0, 5, 10, 15, 19};

// One control tick of a closed-loop run. State fields are plant truth (the
// simulator provides full-state feedback); force/yaw-rate measurements carry
// the configured sensor noise.
struct LogRow {
  double t = 0.0;
  double X = 0.0, Y = 0.0, psi = 0.0, v_x = 0.0, v_y = 0.0, r = 0.0;
  double s_proj = 0.0;
  double delta_cmd = 0.0;  // controller's integrated steering target, applied to the plant
  double Fx_cmd = 0.0;     // total longitudinal force target
  double delta_act = 0.0;  // plant steering state after actuator lag
  double meas_FyF = 0.0, meas_FyR = 0.0, meas_r = 0.0;
  double true_FyF = 0.0, true_FyR = 0.0;
  // Nominal tyre forces at this row's state with the steering actually in
  // effect (delta_act), so they face the same conditions as the measurement.
  double nom_FyF = 0.0, nom_FyR = 0.0;
  // One-step yaw-rate predictions integrated from the previous tick's
  // measured state: nom uses the bare model, corr adds the cycle's learned
  // corrections. NaN on the first tick (no previous state).
  double nom_r_pred = std::numeric_limits<double>::quiet_NaN();
  double corr_r_pred = std::numeric_limits<double>::quiet_NaN();
  double corr_dFyF = 0.0, corr_dFyR = 0.0, corr_dr = 0.0;  // stage-0 corrections
  std::array<double, 5> sigma_vy{};  // propagated sigmas at kSigmaLogStages
  std::array<double, 5> sigma_r{};
  double cost_total = 0.0;
  double cost_con = 0.0, cost_lag = 0.0, cost_vel = 0.0;
  double cost_obs = 0.0, cost_edge = 0.0, cost_rate = 0.0, cost_sigma = 0.0;
  double sigma_cost_ceiling = 0.0;  // prioritized obstacle-cost bound the sigma terms must stay under
  double clearance = 0.0;           // min signed obstacle clearance at the current position
  double e_con = 0.0, e_lag = 0.0;
  int priority_mode = 0;
  int solver_status = 0;  // 0 converged, 1 degraded, 2 failed
  int solver_iterations = 0;
  double solver_kkt = 0.0;
  double solve_ms = 0.0;
};

struct RunLog {
  static constexpr int kSchemaVersion = 1;

  std::string scenario_id = "unknown";
  std::string variant = "mpcc";
  std::uint64_t seed = 0;
  double dt = 0.05;
  std::string termination = "unknown";  // finished | collision | off_road | divergence | timeout
  bool success = false;
  std::vector<LogRow> rows;

  void save_csv(const std::string& path) const;
  static RunLog load_csv(const std::string& path);

  // The column contract; tests pin this string.
  static std::string csv_header();
};

}  // namespace lmpcc
