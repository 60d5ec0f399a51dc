#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmpcc/ocp.hpp"
#include "lmpcc/plant.hpp"
#include "lmpcc/propagation.hpp"
#include "lmpcc/scenario.hpp"
#include "lmpcc/stp_model.hpp"

namespace lmpcc {

enum class Variant { mpcc, lmpcc_gp, lmpcc_stp };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

// The conditioned mismatch models a learning variant queries each cycle,
// stored as dfyf.json / dfyr.json / dr.json in a model directory.
struct MismatchModels {
  STPModel dfyf;
  STPModel dfyr;
  STPModel dr;

  static MismatchModels load(const std::string& dir);
  void save(const std::string& dir) const;
};

// Everything one control cycle reports back to the harness and the log.
struct CycleDiagnostics {
  ControlInput command;                   // applied over the coming interval
  double s0 = 0.0;                        // projected path progress of x0
  SqpStatus status = SqpStatus::failed;
  bool used_fallback = false;             // solver failed, previous plan reused
  int iterations = 0;
  double kkt = 0.0;
  double objective = 0.0;                 // solver objective at the returned plan
  double solve_ms = 0.0;
  StageCostTerms state_cost;              // per-term sums over the plan
  double rate_cost = 0.0;                 // steering/force rate penalty sum
  bool priority = false;                  // avoidance prioritization engaged
  double plan_clearance = 0.0;            // min predicted clearance that drove it
  std::vector<MismatchCorrection> corr;   // per shooting interval, size N
  std::vector<double> sigma_vy;           // per state stage, size N+1
  std::vector<double> sigma_r;
  int psd_floor_count = 0;
  std::vector<std::pair<double, double>> merit_steps;  // accepted-step merit pairs
};

// Receding-horizon contouring controller. Owns the warm start, the actuator
// bookkeeping (delta and F_x are model states integrated from rate controls)
// and the avoidance-priority latch between cycles.
class Controller {
 public:
  Controller(const Scenario& scenario, OCPConfig cfg, VehicleParams vp, FialaParams fp,
             Variant variant, std::optional<MismatchModels> models = std::nullopt);

  // Runs one full cycle from the chassis state and returns the input to hold
  // until the next call.
  CycleDiagnostics control_step(const VehicleState& state);

  const Scenario& scenario() const { return scenario_; }
  Variant variant() const { return variant_; }
  const OCPConfig& config() const { return cfg_; }

  // Current plan, mostly for tests; valid after the first control_step.
  const ContouringSolver::Trajectory& plan() const { return plan_; }

 private:
  ContouringSolver::Trajectory shifted_warm_start(const ContouringState& x0) const;
  std::vector<MismatchCorrection> query_corrections(
      const ContouringSolver::Trajectory& ref,
      const std::vector<MismatchCorrection>& base) const;
  std::vector<StagePoint> stage_points(const ContouringSolver::Trajectory& ref,
                                       const std::vector<MismatchCorrection>& corr) const;
  double plan_min_clearance(const ContouringSolver::Trajectory& ref) const;

  Scenario scenario_;
  OCPConfig cfg_;
  VehicleParams vp_;
  FialaParams fp_;
  Variant variant_;
  std::optional<MismatchModels> models_;
  ContouringSolver solver_;

  ContouringSolver::Trajectory plan_;
  bool has_plan_ = false;
  std::vector<MismatchCorrection> prev_corr_;
  bool priority_ = false;
  double delta_cmd_ = 0.0;
  double fx_cmd_ = 0.0;
  double s_hint_ = 0.0;
  bool first_cycle_ = true;
};

}  // namespace lmpcc
