#include "lmpcc/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "lmpcc/track_errors.hpp"

namespace lmpcc {

Metrics compute_metrics(const RunLog& log, const Scenario& sc) {
  if (log.rows.empty()) throw std::invalid_argument("metrics: empty log");

  Metrics m;
  m.success = log.success;
  m.termination = log.termination;

  double sum_vx = 0.0;
  double sq_f = 0.0, sq_r = 0.0, sq_dr = 0.0;
  std::size_t n_res = 0;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    const LogRow& row = log.rows[i];
    m.peak_beta = std::max(m.peak_beta, std::abs(std::atan(row.v_y / row.v_x)));
    m.peak_vy = std::max(m.peak_vy, std::abs(row.v_y));
    sum_vx += row.v_x;

    const Eigen::Vector2d pos(row.X, row.Y);
    for (const auto& obs : sc.obstacles)
      m.min_clearance = std::min(m.min_clearance, obstacle_clearance(pos, obs));

    // Residuals pair this row's realized mismatch with the correction decided
    // one interval earlier, which is the one that was acting on it. They are
    // judged against the plant's true forces and yaw rate, not the noisy
    // measurements, so the sensor noise floor does not mask model quality.
    if (i == 0 || !std::isfinite(row.corr_r_pred)) continue;
    const LogRow& prev = log.rows[i - 1];
    const double res_f = row.true_FyF - row.nom_FyF - prev.corr_dFyF;
    const double res_r = row.true_FyR - row.nom_FyR - prev.corr_dFyR;
    const double res_dr = row.r - row.corr_r_pred;
    sq_f += res_f * res_f;
    sq_r += res_r * res_r;
    sq_dr += res_dr * res_dr;
    ++n_res;
  }
  m.mean_vx = sum_vx / static_cast<double>(log.rows.size());
  if (n_res > 0) {
    m.rms_dFyF = std::sqrt(sq_f / static_cast<double>(n_res));
    m.rms_dFyR = std::sqrt(sq_r / static_cast<double>(n_res));
    m.rms_dr = std::sqrt(sq_dr / static_cast<double>(n_res));
  }
  return m;
}

}  // namespace lmpcc
