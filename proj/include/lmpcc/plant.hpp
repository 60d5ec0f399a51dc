#pragma once

#include <random>

#include "lmpcc/dynamics.hpp"
#include "lmpcc/vehicle.hpp"

namespace lmpcc {

// Surrogate high-fidelity plant: single-track chassis with magic-formula
// tyres, a first-order steering actuator and first-order tyre-force
// relaxation (time constant relax_length / v_x). The Fiala tyre option turns
// the plant into an exact copy of the prediction model for equivalence runs.
enum class PlantTyre { pacejka, fiala };

struct MeasurementNoise {
  bool enabled = true;
  double std_Fy = 50.0;        // axle lateral-force noise [N]
  double std_r = 0.005;        // yaw-rate noise [rad/s]
  double outlier_prob = 0.02;  // probability of an inflated-noise sample
  double outlier_factor = 100.0;
};

struct PlantParams {
  VehicleParams vehicle;
  FialaParams fiala;
  PacejkaParams pacejka;
  PlantTyre tyre = PlantTyre::pacejka;
  int substeps = 5;  // RK4 substeps per control interval
  MeasurementNoise noise;
};

struct PlantState {
  VehicleState vs;
  double delta_act = 0.0;  // actuator steering state [rad]
  double F_yF_lag = 0.0;   // relaxed front lateral force [N]
  double F_yR_lag = 0.0;   // relaxed rear lateral force [N]
};

// What the force-sensing bearings and the yaw-rate sensor report.
struct PlantMeasurement {
  double F_yF = 0.0;
  double F_yR = 0.0;
  double r = 0.0;
};

struct PlantStepResult {
  PlantState next;
  PlantMeasurement measured;  // with noise when enabled
  PlantMeasurement truth;     // noiseless
};

// Straight-driving state at speed v0 with relaxed tyres and centered actuator.
PlantState plant_equilibrium(double v0);

// Advances the plant by dt (internally substepped RK4) and returns the next
// state plus the force/yaw-rate readout. rng is only drawn from when noise is
// enabled; pass nullptr for a noiseless step.
PlantStepResult plant_step(const PlantParams& pp, const PlantState& state,
                           const ControlInput& cmd, double dt, std::mt19937_64* rng);

// Sensor readout of the state as it stands, without advancing it. The first
// control cycle uses this before any step has produced a measurement.
PlantMeasurement plant_measure(const PlantParams& pp, const PlantState& state,
                               std::mt19937_64* rng);

}  // namespace lmpcc
