#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "lmpcc/spline.hpp"

namespace lmpcc {

// Elliptical obstacle in world coordinates. `a` is the semi-axis along the
// heading direction, `b` across it. `margin` inflates both axes for the
// controller penalty but is excluded from collision checks.
struct Obstacle {
  Eigen::Vector2d center{0.0, 0.0};
  double a = 1.0;
  double b = 1.0;
  double heading = 0.0;
  double margin = 0.0;

  void validate() const;
};

// Lateral corridor bounds as offsets from the path centerline, piecewise
// constant in arc length. Offsets are signed with left positive, so a 7 m
// road centered 1.75 m left of the path has left = 5.25, right = -1.75.
struct RoadEdges {
  std::vector<double> breaks;  // segment start s values, ascending, first is 0
  std::vector<double> left;
  std::vector<double> right;

  double left_at(double s) const;
  double right_at(double s) const;
  void validate() const;
};

struct Scenario {
  std::string name = "scenario";
  std::vector<Eigen::Vector2d> waypoints;
  PathSpline path;
  RoadEdges edges;
  std::vector<Obstacle> obstacles;
  double v_ref = 15.0;  // m/s
  bool collision_priority = false;

  // Checks corridor non-emptiness and that every obstacle (at its raw
  // extent, margin excluded) overlaps the corridor. Blockages may poke past
  // an edge; an obstacle entirely off the road is rejected.
  void validate() const;

  static Scenario load(const std::string& file);
  void save(const std::string& file) const;
  void export_centerline_csv(const std::string& file, double ds = 1.0) const;
};

// Double-lane-change layout: a straight road of two 3.5 m lanes where an
// obstacle blocks the starting lane, a second obstacle blocks the offset
// lane further on, and the corridor spans the full road width.
struct DlcGeometry {
  double length = 200.0;
  double waypoint_spacing = 10.0;
  double lane_width = 3.5;
  double lateral_offset = 3.5;
  double first_blockage_start = 60.0;
  double first_blockage_end = 75.0;
  double second_blockage_start = 90.0;
  double second_blockage_end = 115.0;
  double obstacle_half_width = 2.3;
  double obstacle_margin = 0.5;
  // Blocking vehicles sit slightly toward the outside of their lane, away
  // from the gap the swerve threads; an exactly lane-centered obstacle would
  // face an approaching car with a laterally gradient-free cost.
  double blockage_bias = 0.2;
};

// entry_speed_kmh must lie in [30, 120]; it becomes v_ref in m/s.
Scenario dlc_scenario(double entry_speed_kmh, bool collision_priority,
                      const DlcGeometry& geom = {});

}  // namespace lmpcc
