#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lmpcc {

// Arc-length-parameterized reference path. Built from waypoints as a natural
// cubic spline in chord parameter, then queried through a numerically
// inverted arc-length map, so |d position / d s| stays within 1e-3 of one.
class PathSpline {
 public:
  struct Sample {
    Eigen::Vector2d position;
    double heading = 0.0;    // tangent angle [rad]
    double curvature = 0.0;  // signed, left turn positive [1/m]
  };

  // An unbuilt spline only supports length() == 0; queries throw.
  PathSpline() = default;

  // Requires >= 4 waypoints; consecutive duplicates are rejected.
  static PathSpline build(const std::vector<Eigen::Vector2d>& waypoints);

  double length() const { return total_length_; }

  // Evaluation clamped to [0, length].
  Sample evaluate(double s) const;

  // Tangent-line continuation outside [0, length]; used by the solver so the
  // path gradient never vanishes at the ends.
  Sample evaluate_extended(double s) const;

  // Arc length of the locally closest point to p, refined from s_hint.
  double project(const Eigen::Vector2d& p, double s_hint) const;

 private:
  Eigen::Vector2d point_at(double t) const;
  Eigen::Vector2d deriv_at(double t) const;
  Eigen::Vector2d deriv2_at(double t) const;
  double speed_at(double t) const;
  double arc_between(double t0, double t1) const;  // Gauss-Legendre, 5 nodes
  double t_from_s(double s) const;
  Sample sample_at_t(double t) const;

  std::vector<double> knots_;                      // chord parameter at waypoints
  std::vector<double> ax_, bx_, cx_, dx_;          // x(t) segment coefficients
  std::vector<double> ay_, by_, cy_, dy_;          // y(t) segment coefficients
  std::vector<double> sub_t_, sub_s_;              // arc-length inversion table
  double total_length_ = 0.0;
};

}  // namespace lmpcc
