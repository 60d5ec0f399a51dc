#include "lmpcc/run_config.hpp"

#include <cstdio>
#include <set>
#include <stdexcept>
#include <string>

#include "lmpcc/controller.hpp"
#include "lmpcc/ini.hpp"

namespace lmpcc {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const std::set<std::pair<std::string, std::string>>& known_keys() {
  static const std::set<std::pair<std::string, std::string>> keys = {
      {"vehicle", "m"},
      {"vehicle", "I_zz"},
      {"vehicle", "l_f"},
      {"vehicle", "l_r"},
      {"vehicle", "drag_coeff"},
      {"vehicle", "fx_front_ratio"},
      {"vehicle", "mu"},
      {"vehicle", "v_eps"},
      {"vehicle", "width"},
      {"tyres", "C_alpha_f"},
      {"tyres", "C_alpha_r"},
      {"tyres", "F_z_f"},
      {"tyres", "F_z_r"},
      {"plant", "tyre"},
      {"plant", "substeps"},
      {"plant", "relax_length"},
      {"plant", "steer_tau"},
      {"plant", "front_B"},
      {"plant", "front_C"},
      {"plant", "front_D"},
      {"plant", "front_E"},
      {"plant", "rear_B"},
      {"plant", "rear_C"},
      {"plant", "rear_D"},
      {"plant", "rear_E"},
      {"noise", "enabled"},
      {"noise", "std_fy"},
      {"noise", "std_r"},
      {"noise", "outlier_prob"},
      {"noise", "outlier_factor"},
      {"scenario", "kind"},
      {"scenario", "file"},
      {"scenario", "entry_kmh"},
      {"scenario", "priority"},
      {"controller", "N"},
      {"controller", "N_prob"},
      {"controller", "dt"},
      {"controller", "hinge_eps"},
      {"controller", "sigma_vy_cap"},
      {"controller", "sigma_r_cap"},
      {"weights", "q_con"},
      {"weights", "q_lag"},
      {"weights", "q_vel"},
      {"weights", "q_ddelta"},
      {"weights", "q_dfx"},
      {"weights", "q_obs"},
      {"weights", "q_edge"},
      {"weights", "q_sigma_vy"},
      {"weights", "q_sigma_r"},
      {"bounds", "delta_max"},
      {"bounds", "ddelta_max"},
      {"bounds", "fx_min"},
      {"bounds", "fx_max"},
      {"bounds", "dfx_max"},
      {"bounds", "vx_min"},
      {"bounds", "vx_max"},
      {"bounds", "sdot_factor"},
      {"priority", "threshold"},
      {"priority", "hysteresis"},
      {"priority", "obstacle_gain"},
      {"priority", "tracking_gain"},
      {"run", "variant"},
      {"run", "seed"},
      {"run", "timeout_s"},
      {"run", "models_dir"},
  };
  return keys;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  const IniFile ini = IniFile::load(path);
  for (const auto& e : ini.entries()) {
    if (known_keys().count({e.section, e.key}) == 0)
      throw std::invalid_argument("run config: unknown key [" + e.section + "] " + e.key);
  }

  RunConfig c;
  c.vehicle.m = ini.get_double("vehicle", "m", c.vehicle.m);
  c.vehicle.I_zz = ini.get_double("vehicle", "I_zz", c.vehicle.I_zz);
  c.vehicle.l_f = ini.get_double("vehicle", "l_f", c.vehicle.l_f);
  c.vehicle.l_r = ini.get_double("vehicle", "l_r", c.vehicle.l_r);
  c.vehicle.drag_coeff = ini.get_double("vehicle", "drag_coeff", c.vehicle.drag_coeff);
  c.vehicle.fx_front_ratio =
      ini.get_double("vehicle", "fx_front_ratio", c.vehicle.fx_front_ratio);
  c.vehicle.mu = ini.get_double("vehicle", "mu", c.vehicle.mu);
  c.vehicle.v_eps = ini.get_double("vehicle", "v_eps", c.vehicle.v_eps);
  c.vehicle.width = ini.get_double("vehicle", "width", c.vehicle.width);

  c.fiala.C_alpha_f = ini.get_double("tyres", "C_alpha_f", c.fiala.C_alpha_f);
  c.fiala.C_alpha_r = ini.get_double("tyres", "C_alpha_r", c.fiala.C_alpha_r);
  c.fiala.F_z_f = ini.get_double("tyres", "F_z_f", c.fiala.F_z_f);
  c.fiala.F_z_r = ini.get_double("tyres", "F_z_r", c.fiala.F_z_r);

  c.plant_tyre = ini.get_string("plant", "tyre", c.plant_tyre);
  c.plant_substeps = ini.get_int("plant", "substeps", c.plant_substeps);
  c.pacejka.relax_length = ini.get_double("plant", "relax_length", c.pacejka.relax_length);
  c.pacejka.steer_tau = ini.get_double("plant", "steer_tau", c.pacejka.steer_tau);
  c.pacejka.front.B = ini.get_double("plant", "front_B", c.pacejka.front.B);
  c.pacejka.front.C = ini.get_double("plant", "front_C", c.pacejka.front.C);
  c.pacejka.front.D = ini.get_double("plant", "front_D", c.pacejka.front.D);
  c.pacejka.front.E = ini.get_double("plant", "front_E", c.pacejka.front.E);
  c.pacejka.rear.B = ini.get_double("plant", "rear_B", c.pacejka.rear.B);
  c.pacejka.rear.C = ini.get_double("plant", "rear_C", c.pacejka.rear.C);
  c.pacejka.rear.D = ini.get_double("plant", "rear_D", c.pacejka.rear.D);
  c.pacejka.rear.E = ini.get_double("plant", "rear_E", c.pacejka.rear.E);

  c.noise.enabled = ini.get_bool("noise", "enabled", c.noise.enabled);
  c.noise.std_Fy = ini.get_double("noise", "std_fy", c.noise.std_Fy);
  c.noise.std_r = ini.get_double("noise", "std_r", c.noise.std_r);
  c.noise.outlier_prob = ini.get_double("noise", "outlier_prob", c.noise.outlier_prob);
  c.noise.outlier_factor = ini.get_double("noise", "outlier_factor", c.noise.outlier_factor);

  c.scenario_kind = ini.get_string("scenario", "kind", c.scenario_kind);
  c.scenario_file = ini.get_string("scenario", "file", c.scenario_file);
  c.entry_kmh = ini.get_double("scenario", "entry_kmh", c.entry_kmh);
  c.scenario_priority = ini.get_bool("scenario", "priority", c.scenario_priority);

  c.ocp.N = ini.get_int("controller", "N", c.ocp.N);
  c.ocp.N_prob = ini.get_int("controller", "N_prob", c.ocp.N_prob);
  c.ocp.dt = ini.get_double("controller", "dt", c.ocp.dt);
  c.ocp.hinge_eps = ini.get_double("controller", "hinge_eps", c.ocp.hinge_eps);
  c.ocp.sigma_vy_cap = ini.get_double("controller", "sigma_vy_cap", c.ocp.sigma_vy_cap);
  c.ocp.sigma_r_cap = ini.get_double("controller", "sigma_r_cap", c.ocp.sigma_r_cap);

  OCPWeights& w = c.ocp.weights;
  w.q_con = ini.get_double("weights", "q_con", w.q_con);
  w.q_lag = ini.get_double("weights", "q_lag", w.q_lag);
  w.q_vel = ini.get_double("weights", "q_vel", w.q_vel);
  w.q_ddelta = ini.get_double("weights", "q_ddelta", w.q_ddelta);
  w.q_dfx = ini.get_double("weights", "q_dfx", w.q_dfx);
  w.q_obs = ini.get_double("weights", "q_obs", w.q_obs);
  w.q_edge = ini.get_double("weights", "q_edge", w.q_edge);
  w.q_sigma_vy = ini.get_double("weights", "q_sigma_vy", w.q_sigma_vy);
  w.q_sigma_r = ini.get_double("weights", "q_sigma_r", w.q_sigma_r);

  OCPBounds& b = c.ocp.bounds;
  b.delta_max = ini.get_double("bounds", "delta_max", b.delta_max);
  b.ddelta_max = ini.get_double("bounds", "ddelta_max", b.ddelta_max);
  b.fx_min = ini.get_double("bounds", "fx_min", b.fx_min);
  b.fx_max = ini.get_double("bounds", "fx_max", b.fx_max);
  b.dfx_max = ini.get_double("bounds", "dfx_max", b.dfx_max);
  b.vx_min = ini.get_double("bounds", "vx_min", b.vx_min);
  b.vx_max = ini.get_double("bounds", "vx_max", b.vx_max);
  b.sdot_factor = ini.get_double("bounds", "sdot_factor", b.sdot_factor);

  PriorityConfig& p = c.ocp.priority;
  p.threshold = ini.get_double("priority", "threshold", p.threshold);
  p.hysteresis = ini.get_double("priority", "hysteresis", p.hysteresis);
  p.obstacle_gain = ini.get_double("priority", "obstacle_gain", p.obstacle_gain);
  p.tracking_gain = ini.get_double("priority", "tracking_gain", p.tracking_gain);

  c.variant = ini.get_string("run", "variant", c.variant);
  c.seed = static_cast<std::uint64_t>(
      std::stoull(ini.get_string("run", "seed", std::to_string(c.seed))));
  c.timeout_s = ini.get_double("run", "timeout_s", c.timeout_s);
  c.models_dir = ini.get_string("run", "models_dir", c.models_dir);

  c.validate();
  return c;
}

void RunConfig::save(const std::string& path) const {
  IniFile ini;
  ini.set("vehicle", "m", fmt(vehicle.m));
  ini.set("vehicle", "I_zz", fmt(vehicle.I_zz));
  ini.set("vehicle", "l_f", fmt(vehicle.l_f));
  ini.set("vehicle", "l_r", fmt(vehicle.l_r));
  ini.set("vehicle", "drag_coeff", fmt(vehicle.drag_coeff));
  ini.set("vehicle", "fx_front_ratio", fmt(vehicle.fx_front_ratio));
  ini.set("vehicle", "mu", fmt(vehicle.mu));
  ini.set("vehicle", "v_eps", fmt(vehicle.v_eps));
  ini.set("vehicle", "width", fmt(vehicle.width));

  ini.set("tyres", "C_alpha_f", fmt(fiala.C_alpha_f));
  ini.set("tyres", "C_alpha_r", fmt(fiala.C_alpha_r));
  ini.set("tyres", "F_z_f", fmt(fiala.F_z_f));
  ini.set("tyres", "F_z_r", fmt(fiala.F_z_r));

  ini.set("plant", "tyre", plant_tyre);
  ini.set("plant", "substeps", std::to_string(plant_substeps));
  ini.set("plant", "relax_length", fmt(pacejka.relax_length));
  ini.set("plant", "steer_tau", fmt(pacejka.steer_tau));
  ini.set("plant", "front_B", fmt(pacejka.front.B));
  ini.set("plant", "front_C", fmt(pacejka.front.C));
  ini.set("plant", "front_D", fmt(pacejka.front.D));
  ini.set("plant", "front_E", fmt(pacejka.front.E));
  ini.set("plant", "rear_B", fmt(pacejka.rear.B));
  ini.set("plant", "rear_C", fmt(pacejka.rear.C));
  ini.set("plant", "rear_D", fmt(pacejka.rear.D));
  ini.set("plant", "rear_E", fmt(pacejka.rear.E));

  ini.set("noise", "enabled", noise.enabled ? "true" : "false");
  ini.set("noise", "std_fy", fmt(noise.std_Fy));
  ini.set("noise", "std_r", fmt(noise.std_r));
  ini.set("noise", "outlier_prob", fmt(noise.outlier_prob));
  ini.set("noise", "outlier_factor", fmt(noise.outlier_factor));

  ini.set("scenario", "kind", scenario_kind);
  if (!scenario_file.empty()) ini.set("scenario", "file", scenario_file);
  ini.set("scenario", "entry_kmh", fmt(entry_kmh));
  ini.set("scenario", "priority", scenario_priority ? "true" : "false");

  ini.set("controller", "N", std::to_string(ocp.N));
  ini.set("controller", "N_prob", std::to_string(ocp.N_prob));
  ini.set("controller", "dt", fmt(ocp.dt));
  ini.set("controller", "hinge_eps", fmt(ocp.hinge_eps));
  ini.set("controller", "sigma_vy_cap", fmt(ocp.sigma_vy_cap));
  ini.set("controller", "sigma_r_cap", fmt(ocp.sigma_r_cap));

  ini.set("weights", "q_con", fmt(ocp.weights.q_con));
  ini.set("weights", "q_lag", fmt(ocp.weights.q_lag));
  ini.set("weights", "q_vel", fmt(ocp.weights.q_vel));
  ini.set("weights", "q_ddelta", fmt(ocp.weights.q_ddelta));
  ini.set("weights", "q_dfx", fmt(ocp.weights.q_dfx));
  ini.set("weights", "q_obs", fmt(ocp.weights.q_obs));
  ini.set("weights", "q_edge", fmt(ocp.weights.q_edge));
  ini.set("weights", "q_sigma_vy", fmt(ocp.weights.q_sigma_vy));
  ini.set("weights", "q_sigma_r", fmt(ocp.weights.q_sigma_r));

  ini.set("bounds", "delta_max", fmt(ocp.bounds.delta_max));
  ini.set("bounds", "ddelta_max", fmt(ocp.bounds.ddelta_max));
  ini.set("bounds", "fx_min", fmt(ocp.bounds.fx_min));
  ini.set("bounds", "fx_max", fmt(ocp.bounds.fx_max));
  ini.set("bounds", "dfx_max", fmt(ocp.bounds.dfx_max));
  ini.set("bounds", "vx_min", fmt(ocp.bounds.vx_min));
  ini.set("bounds", "vx_max", fmt(ocp.bounds.vx_max));
  ini.set("bounds", "sdot_factor", fmt(ocp.bounds.sdot_factor));

  ini.set("priority", "threshold", fmt(ocp.priority.threshold));
  ini.set("priority", "hysteresis", fmt(ocp.priority.hysteresis));
  ini.set("priority", "obstacle_gain", fmt(ocp.priority.obstacle_gain));
  ini.set("priority", "tracking_gain", fmt(ocp.priority.tracking_gain));

  ini.set("run", "variant", variant);
  ini.set("run", "seed", std::to_string(seed));
  ini.set("run", "timeout_s", fmt(timeout_s));
  if (!models_dir.empty()) ini.set("run", "models_dir", models_dir);

  ini.save(path);
}

PlantParams RunConfig::make_plant() const {
  PlantParams pp;
  pp.vehicle = vehicle;
  pp.fiala = fiala;
  pp.pacejka = pacejka;
  if (plant_tyre == "pacejka") {
    pp.tyre = PlantTyre::pacejka;
  } else if (plant_tyre == "fiala") {
    pp.tyre = PlantTyre::fiala;
  } else {
    throw std::invalid_argument("run config: plant tyre must be pacejka or fiala, got '" +
                                plant_tyre + "'");
  }
  pp.substeps = plant_substeps;
  pp.noise = noise;
  return pp;
}

Scenario RunConfig::make_scenario() const {
  if (scenario_kind == "dlc") return dlc_scenario(entry_kmh, scenario_priority);
  if (scenario_kind == "file") {
    if (scenario_file.empty())
      throw std::invalid_argument("run config: scenario kind 'file' needs [scenario] file");
    return Scenario::load(scenario_file);
  }
  throw std::invalid_argument("run config: scenario kind must be dlc or file, got '" +
                              scenario_kind + "'");
}

void RunConfig::validate() const {
  vehicle.validate();
  fiala.validate();
  pacejka.validate();
  ocp.validate();
  variant_from_string(variant);  // throws on unknown names
  if (plant_tyre != "pacejka" && plant_tyre != "fiala")
    throw std::invalid_argument("run config: plant tyre must be pacejka or fiala");
  if (plant_substeps < 1)
    throw std::invalid_argument("run config: plant substeps must be >= 1");
  if (!(timeout_s > 0.0))
    throw std::invalid_argument("run config: timeout_s must be positive");
  if (scenario_kind == "dlc" && !(entry_kmh >= 30.0 && entry_kmh <= 120.0))
    throw std::invalid_argument("run config: dlc entry speed must lie in [30, 120] km/h");
}

}  // namespace lmpcc
