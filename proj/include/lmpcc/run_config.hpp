#pragma once

#include <cstdint>
#include <string>

#include "lmpcc/ocp.hpp"
#include "lmpcc/plant.hpp"
#include "lmpcc/scenario.hpp"
#include "lmpcc/vehicle.hpp"

namespace lmpcc {

// Everything one closed-loop run needs, loadable from a sectioned key-value
// file. Unknown keys are rejected so typos fail loudly; every key written by
// save() is the documented set.
struct RunConfig {
  VehicleParams vehicle;
  FialaParams fiala;

  // Plant-only knobs; the chassis/tyre-load parameters above are shared.
  std::string plant_tyre = "pacejka";  // pacejka | fiala
  int plant_substeps = 5;
  PacejkaParams pacejka;
  MeasurementNoise noise;

  OCPConfig ocp;

  // Scenario source: built-in double lane change or an external file.
  std::string scenario_kind = "dlc";  // dlc | file
  std::string scenario_file;
  double entry_kmh = 55.0;
  bool scenario_priority = false;

  std::string variant = "mpcc";
  std::uint64_t seed = 1;
  double timeout_s = 30.0;
  std::string models_dir;

  static RunConfig load(const std::string& path);
  void save(const std::string& path) const;

  PlantParams make_plant() const;
  Scenario make_scenario() const;
  void validate() const;
};

}  // namespace lmpcc
