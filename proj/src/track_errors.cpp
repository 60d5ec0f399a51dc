#include "lmpcc/track_errors.hpp"

#include <algorithm>
#include <cmath>

namespace lmpcc {

TrackErrors contouring_lag_errors(const Eigen::Vector2d& position, double s,
                                  const PathSpline& path) {
  const auto ref = path.evaluate(s);
  const Eigen::Vector2d d = position - ref.position;
  const double c = std::cos(ref.heading), sn = std::sin(ref.heading);
  return {-sn * d.x() + c * d.y(), c * d.x() + sn * d.y()};
}

namespace {

double norm_distance(const Eigen::Vector2d& position, const Obstacle& obs, double a, double b,
                     Eigen::Vector2d* grad) {
  const double c = std::cos(obs.heading), sn = std::sin(obs.heading);
  const Eigen::Vector2d diff = position - obs.center;
  const double dx = c * diff.x() + sn * diff.y();
  const double dy = -sn * diff.x() + c * diff.y();
  const double qa = dx / a, qb = dy / b;
  const double d = std::sqrt(qa * qa + qb * qb);
  if (grad) {
    if (d < 1e-9) {
      grad->setZero();
    } else {
      const double gx = dx / (a * a), gy = dy / (b * b);
      (*grad)(0) = (gx * c - gy * sn) / d;
      (*grad)(1) = (gx * sn + gy * c) / d;
    }
  }
  return d;
}

}  // namespace

double obstacle_norm_distance(const Eigen::Vector2d& position, const Obstacle& obs,
                              Eigen::Vector2d* grad) {
  return norm_distance(position, obs, obs.a + obs.margin, obs.b + obs.margin, grad);
}

double obstacle_error(const Eigen::Vector2d& position, const Obstacle& obs) {
  return std::max(0.0, 1.0 - obstacle_norm_distance(position, obs));
}

double obstacle_clearance(const Eigen::Vector2d& position, const Obstacle& obs) {
  const double d = norm_distance(position, obs, obs.a, obs.b, nullptr);
  return (d - 1.0) * std::min(obs.a, obs.b);
}

double obstacle_lateral_extent(const Obstacle& obs) {
  // For a rotated ellipse the lateral half-extent is sqrt((a sin h)^2 + (b cos h)^2)
  // against an x-aligned road; fall back to the larger axis for steep headings.
  const double c = std::cos(obs.heading), sn = std::sin(obs.heading);
  return std::sqrt(obs.a * obs.a * sn * sn + obs.b * obs.b * c * c);
}

double edge_error(const Eigen::Vector2d& position, double s, const RoadEdges& edges,
                  const PathSpline& path, double vehicle_width) {
  const double e_con = contouring_lag_errors(position, s, path).e_con;
  const double hw = 0.5 * vehicle_width;
  return std::max(0.0, e_con - (edges.left_at(s) - hw)) +
         std::max(0.0, (edges.right_at(s) + hw) - e_con);
}

}  // namespace lmpcc
