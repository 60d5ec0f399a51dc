#pragma once

#include <Eigen/Core>

#include "lmpcc/scenario.hpp"
#include "lmpcc/spline.hpp"

namespace lmpcc {

struct TrackErrors {
  double e_con = 0.0;  // lateral offset, positive left of the path
  double e_lag = 0.0;  // tangential offset, positive ahead of P(s)
};

TrackErrors contouring_lag_errors(const Eigen::Vector2d& position, double s,
                                  const PathSpline& path);

// Normalized elliptical distance in the obstacle frame using margin-inflated
// semi-axes: 0 at the center, 1 on the inflated boundary. If grad is non-null
// it receives d(dist)/d(position); the gradient is zeroed at the center where
// the distance is not differentiable.
double obstacle_norm_distance(const Eigen::Vector2d& position, const Obstacle& obs,
                              Eigen::Vector2d* grad = nullptr);

// Hinge penetration of the inflated ellipse: max(0, 1 - d).
double obstacle_error(const Eigen::Vector2d& position, const Obstacle& obs);

// Signed metric clearance against the raw (margin-free) ellipse, roughly the
// gap in metres along the short axis: negative means the point is inside.
double obstacle_clearance(const Eigen::Vector2d& position, const Obstacle& obs);

// Lateral reach of the raw ellipse from its center as seen by the corridor
// check; conservative (uses the larger semi-axis unless the heading is small).
double obstacle_lateral_extent(const Obstacle& obs);

// Corridor violation beyond the edges minus half the vehicle width:
// max(0, e_con - (left - w/2)) + max(0, (right + w/2) - e_con).
double edge_error(const Eigen::Vector2d& position, double s, const RoadEdges& edges,
                  const PathSpline& path, double vehicle_width);

}  // namespace lmpcc
