#include "lmpcc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>

#include "lmpcc/controller.hpp"
#include "lmpcc/plant.hpp"
#include "lmpcc/track_errors.hpp"
#include "lmpcc/tyre.hpp"

namespace lmpcc {

namespace {

constexpr double kFinishMargin = 0.5;   // finish this far before the path end [m]
constexpr double kOffRoadTol = 0.25;    // tolerated body overhang past an edge [m]
constexpr double kDivergenceBound = 1e6;

bool state_diverged(const VehicleState& vs) {
  const double fields[] = {vs.X, vs.Y, vs.psi, vs.v_x, vs.v_y, vs.r};
  for (double f : fields)
    if (!std::isfinite(f) || std::abs(f) > kDivergenceBound) return true;
  return false;
}

double min_obstacle_clearance(const Eigen::Vector2d& pos, const Scenario& sc) {
  double clearance = std::numeric_limits<double>::infinity();
  for (const auto& obs : sc.obstacles)
    clearance = std::min(clearance, obstacle_clearance(pos, obs));
  return clearance;
}

}  // namespace

RunLog run_closed_loop(const RunConfig& cfg) {
  cfg.validate();
  const Scenario sc = cfg.make_scenario();
  const PlantParams pp = cfg.make_plant();
  const Variant var = variant_from_string(cfg.variant);
  std::optional<MismatchModels> models;
  if (var != Variant::mpcc) {
    if (cfg.models_dir.empty())
      throw std::invalid_argument("harness: variant " + cfg.variant +
                                  " needs [run] models_dir");
    models = MismatchModels::load(cfg.models_dir);
  }
  Controller ctrl(sc, cfg.ocp, cfg.vehicle, cfg.fiala, var, std::move(models));

  std::mt19937_64 rng(cfg.seed);
  PlantState ps = plant_equilibrium(sc.v_ref);
  const PathSpline::Sample start = sc.path.evaluate(0.0);
  ps.vs.X = start.position.x();
  ps.vs.Y = start.position.y();
  ps.vs.psi = start.heading;

  RunLog log;
  log.scenario_id = sc.name;
  log.variant = cfg.variant;
  log.seed = cfg.seed;
  log.dt = cfg.ocp.dt;
  log.termination = "timeout";

  const double dt = cfg.ocp.dt;
  const int max_ticks = static_cast<int>(std::ceil(cfg.timeout_s / dt));
  const double finish_s = sc.path.length() - kFinishMargin;
  const double sigma_ceiling = cfg.ocp.priority.obstacle_gain * cfg.ocp.weights.q_obs;

  PlantMeasurement truth = plant_measure(pp, ps, nullptr);
  PlantMeasurement meas = pp.noise.enabled ? plant_measure(pp, ps, &rng) : truth;
  double nom_r_pred = std::numeric_limits<double>::quiet_NaN();
  double corr_r_pred = std::numeric_limits<double>::quiet_NaN();
  double s_hint = 0.0;

  for (int tick = 0;; ++tick) {
    const VehicleState& vs = ps.vs;
    if (state_diverged(vs)) {
      log.termination = "divergence";
      break;
    }
    const Eigen::Vector2d pos(vs.X, vs.Y);
    const double s_proj = sc.path.project(pos, s_hint);
    s_hint = s_proj;
    const double clearance = min_obstacle_clearance(pos, sc);
    if (clearance < 0.0) {
      log.termination = "collision";
      break;
    }
    if (edge_error(pos, s_proj, sc.edges, sc.path, cfg.vehicle.width) > kOffRoadTol) {
      log.termination = "off_road";
      break;
    }
    if (s_proj >= finish_s) {
      log.termination = "finished";
      break;
    }
    if (tick >= max_ticks) {
      log.termination = "timeout";
      break;
    }

    const CycleDiagnostics d = ctrl.control_step(vs);

    LogRow row;
    row.t = tick * dt;
    row.X = vs.X;
    row.Y = vs.Y;
    row.psi = vs.psi;
    row.v_x = vs.v_x;
    row.v_y = vs.v_y;
    row.r = vs.r;
    row.s_proj = s_proj;
    row.delta_cmd = d.command.delta;
    row.Fx_cmd = d.command.F_x;
    row.delta_act = ps.delta_act;
    row.meas_FyF = meas.F_yF;
    row.meas_FyR = meas.F_yR;
    row.meas_r = meas.r;
    row.true_FyF = truth.F_yF;
    row.true_FyR = truth.F_yR;
    {
      const ControlInput in_effect{ps.delta_act, row.Fx_cmd};
      const SlipAngles slip = slip_angles(vs, in_effect, cfg.vehicle);
      row.nom_FyF =
          fiala_lateral_force(slip.alpha_f, cfg.fiala.C_alpha_f, cfg.fiala.F_z_f,
                              cfg.vehicle.mu);
      row.nom_FyR =
          fiala_lateral_force(slip.alpha_r, cfg.fiala.C_alpha_r, cfg.fiala.F_z_r,
                              cfg.vehicle.mu);
    }
    row.nom_r_pred = nom_r_pred;
    row.corr_r_pred = corr_r_pred;
    row.corr_dFyF = d.corr[0].dFyF;
    row.corr_dFyR = d.corr[0].dFyR;
    row.corr_dr = d.corr[0].dr;
    for (std::size_t i = 0; i < kSigmaLogStages.size(); ++i) {
      row.sigma_vy[i] = d.sigma_vy[kSigmaLogStages[i]];
      row.sigma_r[i] = d.sigma_r[kSigmaLogStages[i]];
    }
    row.cost_total = d.objective;
    row.cost_con = d.state_cost.con;
    row.cost_lag = d.state_cost.lag;
    row.cost_vel = d.state_cost.vel;
    row.cost_obs = d.state_cost.obs;
    row.cost_edge = d.state_cost.edge;
    row.cost_rate = d.rate_cost;
    row.cost_sigma = d.state_cost.sigma;
    row.sigma_cost_ceiling = sigma_ceiling;
    row.clearance = clearance;
    {
      const TrackErrors te = contouring_lag_errors(pos, s_proj, sc.path);
      row.e_con = te.e_con;
      row.e_lag = te.e_lag;
    }
    row.priority_mode = d.priority ? 1 : 0;
    row.solver_status = static_cast<int>(d.status);
    row.solver_iterations = d.iterations;
    row.solver_kkt = d.kkt;
    row.solve_ms = d.solve_ms;
    log.rows.push_back(row);

    // One-step yaw-rate predictions for the next row's mismatch bookkeeping:
    // bare model and model-plus-corrections, both from this tick's state.
    nom_r_pred = rk4_step(vs, d.command, MismatchCorrection{}, cfg.vehicle, cfg.fiala, dt).r;
    corr_r_pred = rk4_step(vs, d.command, d.corr[0], cfg.vehicle, cfg.fiala, dt).r;

    try {
      const PlantStepResult step = plant_step(pp, ps, d.command, dt, &rng);
      ps = step.next;
      truth = step.truth;
      meas = step.measured;
    } catch (const std::domain_error&) {
      log.termination = "divergence";  // dropped below the low-speed guard
      break;
    }
  }

  log.success = log.termination == "finished";
  return log;
}

SweepResult speed_sweep(const RunConfig& base, const std::string& variant,
                        const std::vector<double>& speeds_kmh) {
  if (speeds_kmh.empty()) throw std::invalid_argument("sweep: no speeds given");
  if (!std::is_sorted(speeds_kmh.begin(), speeds_kmh.end()))
    throw std::invalid_argument("sweep: speeds must be ascending");

  std::vector<std::future<SweepEntry>> jobs;
  jobs.reserve(speeds_kmh.size());
  for (double kmh : speeds_kmh) {
    RunConfig cfg = base;
    cfg.variant = variant;
    cfg.entry_kmh = kmh;
    jobs.push_back(std::async(std::launch::async, [cfg, kmh]() {
      SweepEntry e;
      e.log = run_closed_loop(cfg);
      e.speed_kmh = kmh;
      e.success = e.log.success;
      e.termination = e.log.termination;
      e.metrics = compute_metrics(e.log, cfg.make_scenario());
      return e;
    }));
  }

  SweepResult res;
  res.variant = variant;
  for (auto& job : jobs) res.entries.push_back(job.get());
  for (const auto& e : res.entries) {
    if (e.success) {
      res.any_success = true;
      res.max_speed_kmh = std::max(res.max_speed_kmh, e.speed_kmh);
    }
  }
  return res;
}

TrainingRuns generate_training_runs(const RunConfig& base, const std::string& out_dir) {
  struct Spec {
    double kmh;
    bool priority;
    bool train;
  };
  const Spec specs[] = {
      {55.0, false, true}, {80.0, false, true}, {55.0, true, true},
      {60.0, false, false}, {60.0, true, false},
  };

  std::filesystem::create_directories(out_dir + "/train");
  std::filesystem::create_directories(out_dir + "/test");

  std::vector<std::future<RunLog>> jobs;
  int idx = 0;
  for (const Spec& s : specs) {
    RunConfig cfg = base;
    cfg.variant = "mpcc";
    cfg.entry_kmh = s.kmh;
    cfg.scenario_priority = s.priority;
    cfg.scenario_kind = "dlc";
    cfg.seed = base.seed + static_cast<std::uint64_t>(idx++);  // distinct noise draws
    jobs.push_back(std::async(std::launch::async,
                              [cfg]() { return run_closed_loop(cfg); }));
  }

  TrainingRuns out;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    RunLog log = jobs[i].get();
    if (specs[i].train && log.termination == "divergence")
      throw std::runtime_error("training generation: run " + log.scenario_id + " diverged");
    const std::string sub = specs[i].train ? "/train/" : "/test/";
    log.save_csv(out_dir + sub + log.scenario_id + ".csv");
    (specs[i].train ? out.train : out.test).push_back(std::move(log));
  }
  return out;
}

}  // namespace lmpcc
