#include "lmpcc/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lmpcc/ini.hpp"
#include "lmpcc/track_errors.hpp"

namespace lmpcc {

void Obstacle::validate() const {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("obstacle semi-axes must be positive");
  if (margin < 0.0) throw std::invalid_argument("obstacle margin must be non-negative");
}

double RoadEdges::left_at(double s) const {
  auto it = std::upper_bound(breaks.begin(), breaks.end(), s);
  const auto i = it == breaks.begin() ? 0 : static_cast<size_t>(it - breaks.begin()) - 1;
  return left[i];
}

double RoadEdges::right_at(double s) const {
  auto it = std::upper_bound(breaks.begin(), breaks.end(), s);
  const auto i = it == breaks.begin() ? 0 : static_cast<size_t>(it - breaks.begin()) - 1;
  return right[i];
}

void RoadEdges::validate() const {
  if (breaks.empty() || breaks.size() != left.size() || breaks.size() != right.size())
    throw std::invalid_argument("road edges: breaks/left/right sizes must match and be non-empty");
  if (breaks.front() != 0.0) throw std::invalid_argument("road edges: first break must be 0");
  for (size_t i = 1; i < breaks.size(); ++i)
    if (breaks[i] <= breaks[i - 1])
      throw std::invalid_argument("road edges: breaks must be strictly increasing");
  for (size_t i = 0; i < breaks.size(); ++i)
    if (left[i] <= right[i]) throw std::invalid_argument("road edges: empty corridor segment");
}

void Scenario::validate() const {
  edges.validate();
  if (!(v_ref > 0.0)) throw std::invalid_argument("scenario: v_ref must be positive");
  for (const auto& obs : obstacles) {
    obs.validate();
    // Project the center onto the path and require the ellipse to overlap the
    // corridor there. Blockages may poke past a road edge (that is what closes
    // a lane), but an obstacle entirely off the road would never constrain
    // anything and almost certainly indicates a misconfigured scenario.
    const double s = path.project(obs.center, path.length() * 0.5);
    const auto err = contouring_lag_errors(obs.center, s, path);
    const double reach = obstacle_lateral_extent(obs);
    if (err.e_con - reach >= edges.left_at(s) || err.e_con + reach <= edges.right_at(s))
      throw std::invalid_argument("scenario: obstacle lies outside the corridor");
  }
}

Scenario Scenario::load(const std::string& file) {
  const IniFile ini = IniFile::load(file);
  Scenario sc;
  sc.name = ini.get_string("reference", "name", "scenario");
  for (const auto& w : ini.get_all("path", "waypoint")) {
    const auto xy = IniFile::parse_doubles(w);
    if (xy.size() != 2) throw std::runtime_error("scenario: waypoint needs two values");
    sc.waypoints.emplace_back(xy[0], xy[1]);
  }
  sc.path = PathSpline::build(sc.waypoints);
  for (const auto& seg : ini.get_all("edges", "segment")) {
    const auto v = IniFile::parse_doubles(seg);
    if (v.size() != 3) throw std::runtime_error("scenario: edge segment needs s,left,right");
    sc.edges.breaks.push_back(v[0]);
    sc.edges.left.push_back(v[1]);
    sc.edges.right.push_back(v[2]);
  }
  for (int i = 1;; ++i) {
    const std::string sect = "obstacle." + std::to_string(i);
    if (!ini.has_section(sect)) break;
    Obstacle obs;
    const auto c = IniFile::parse_doubles(ini.get_string(sect, "center", "0,0"));
    const auto ab = IniFile::parse_doubles(ini.get_string(sect, "semi_axes", "1,1"));
    if (c.size() != 2 || ab.size() != 2)
      throw std::runtime_error("scenario: obstacle center/semi_axes need two values");
    obs.center = {c[0], c[1]};
    obs.a = ab[0];
    obs.b = ab[1];
    obs.heading = ini.get_double(sect, "heading", 0.0);
    obs.margin = ini.get_double(sect, "margin", 0.0);
    sc.obstacles.push_back(obs);
  }
  sc.v_ref = ini.get_double("reference", "v_ref", 15.0);
  sc.collision_priority = ini.get_bool("reference", "collision_priority", false);
  sc.validate();
  return sc;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void Scenario::save(const std::string& file) const {
  IniFile ini;
  for (const auto& w : waypoints) ini.append("path", "waypoint", fmt(w.x()) + "," + fmt(w.y()));
  for (size_t i = 0; i < edges.breaks.size(); ++i)
    ini.append("edges", "segment",
               fmt(edges.breaks[i]) + "," + fmt(edges.left[i]) + "," + fmt(edges.right[i]));
  for (size_t i = 0; i < obstacles.size(); ++i) {
    const std::string sect = "obstacle." + std::to_string(i + 1);
    const auto& obs = obstacles[i];
    ini.append(sect, "center", fmt(obs.center.x()) + "," + fmt(obs.center.y()));
    ini.append(sect, "semi_axes", fmt(obs.a) + "," + fmt(obs.b));
    ini.append(sect, "heading", fmt(obs.heading));
    ini.append(sect, "margin", fmt(obs.margin));
  }
  ini.append("reference", "name", name);
  ini.append("reference", "v_ref", fmt(v_ref));
  ini.append("reference", "collision_priority", collision_priority ? "true" : "false");
  ini.save(file);
}

void Scenario::export_centerline_csv(const std::string& file, double ds) const {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("scenario: cannot write " + file);
  out << "s,x,y,heading,curvature,left,right\n";
  char buf[256];
  const double L = path.length();
  for (double s = 0.0; s <= L + 0.5 * ds; s += ds) {
    const double sc = std::min(s, L);
    const auto p = path.evaluate(sc);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", sc,
                  p.position.x(), p.position.y(), p.heading, p.curvature, edges.left_at(sc),
                  edges.right_at(sc));
    out << buf;
  }
}

Scenario dlc_scenario(double entry_speed_kmh, bool collision_priority, const DlcGeometry& geom) {
  if (entry_speed_kmh < 30.0 || entry_speed_kmh > 120.0)
    throw std::invalid_argument("dlc_scenario: entry speed must lie in [30, 120] km/h");

  Scenario sc;
  sc.name = "dlc" + std::to_string(static_cast<int>(entry_speed_kmh + 0.5)) +
            (collision_priority ? "p" : "");
  const int n = static_cast<int>(geom.length / geom.waypoint_spacing + 0.5);
  for (int i = 0; i <= n; ++i) sc.waypoints.emplace_back(i * geom.waypoint_spacing, 0.0);
  sc.path = PathSpline::build(sc.waypoints);

  // The path follows the starting lane center; the road spans that lane plus
  // the offset lane, so the corridor is asymmetric about the path.
  sc.edges.breaks = {0.0};
  sc.edges.left = {geom.lateral_offset + 0.5 * geom.lane_width};
  sc.edges.right = {-0.5 * geom.lane_width};

  Obstacle first;
  first.center = {0.5 * (geom.first_blockage_start + geom.first_blockage_end),
                  -geom.blockage_bias};
  first.a = 0.5 * (geom.first_blockage_end - geom.first_blockage_start);
  first.b = geom.obstacle_half_width;
  first.margin = geom.obstacle_margin;
  sc.obstacles.push_back(first);

  Obstacle second;
  second.center = {0.5 * (geom.second_blockage_start + geom.second_blockage_end),
                   geom.lateral_offset + geom.blockage_bias};
  second.a = 0.5 * (geom.second_blockage_end - geom.second_blockage_start);
  second.b = geom.obstacle_half_width;
  second.margin = geom.obstacle_margin;
  sc.obstacles.push_back(second);

  sc.v_ref = entry_speed_kmh / 3.6;
  sc.collision_priority = collision_priority;
  sc.validate();
  return sc;
}

}  // namespace lmpcc
