#include "lmpcc/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lmpcc/dataset.hpp"
#include "lmpcc/track_errors.hpp"

namespace lmpcc {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::mpcc: return "mpcc";
    case Variant::lmpcc_gp: return "lmpcc-gp";
    case Variant::lmpcc_stp: return "lmpcc-stp";
  }
  throw std::logic_error("controller: unknown variant value");
}

Variant variant_from_string(const std::string& name) {
  if (name == "mpcc") return Variant::mpcc;
  if (name == "lmpcc-gp") return Variant::lmpcc_gp;
  if (name == "lmpcc-stp") return Variant::lmpcc_stp;
  throw std::invalid_argument("controller: unknown variant '" + name +
                              "' (expected mpcc, lmpcc-gp or lmpcc-stp)");
}

MismatchModels MismatchModels::load(const std::string& dir) {
  MismatchModels m;
  m.dfyf = STPModel::load(dir + "/dfyf.json");
  m.dfyr = STPModel::load(dir + "/dfyr.json");
  m.dr = STPModel::load(dir + "/dr.json");
  if (m.dfyf.channel != "dfyf" || m.dfyr.channel != "dfyr" || m.dr.channel != "dr")
    throw std::runtime_error("controller: model files in '" + dir +
                             "' carry mismatched channel tags");
  return m;
}

void MismatchModels::save(const std::string& dir) const {
  dfyf.save(dir + "/dfyf.json");
  dfyr.save(dir + "/dfyr.json");
  dr.save(dir + "/dr.json");
}

namespace {

VehicleState chassis_of(const ContouringState& x) {
  VehicleState st;
  st.X = x[SX];
  st.Y = x[SY];
  st.psi = x[SPSI];
  st.v_x = x[SVX];
  st.v_y = x[SVY];
  st.r = x[SR];
  return st;
}

}  // namespace

Controller::Controller(const Scenario& scenario, OCPConfig cfg, VehicleParams vp,
                       FialaParams fp, Variant variant,
                       std::optional<MismatchModels> models)
    : scenario_(scenario),
      cfg_(cfg),
      vp_(vp),
      fp_(fp),
      variant_(variant),
      models_(std::move(models)) {
  scenario_.validate();
  cfg_.validate();
  vp_.validate();
  fp_.validate();
  if (variant_ != Variant::mpcc && !models_.has_value())
    throw std::invalid_argument("controller: variant " + to_string(variant_) +
                                " needs trained mismatch models");
}

ContouringSolver::Trajectory Controller::shifted_warm_start(const ContouringState& x0) const {
  const int N = cfg_.N;
  ContouringSolver::Trajectory t;
  t.x.assign(N + 1, x0);
  t.u.assign(N, ContouringInput::Zero());
  if (has_plan_) {
    for (int k = 1; k <= N; ++k) t.x[k] = plan_.x[std::min(k + 1, N)];
    for (int k = 0; k < N; ++k) t.u[k] = plan_.u[std::min(k + 1, N - 1)];
  }
  return t;
}

std::vector<MismatchCorrection> Controller::query_corrections(
    const ContouringSolver::Trajectory& ref,
    const std::vector<MismatchCorrection>& base) const {
  const int N = cfg_.N;
  const bool stp = variant_ == Variant::lmpcc_stp;
  std::vector<MismatchCorrection> corr(N);
  Eigen::VectorXd z(MismatchDataset::kFeatureDim);
  for (int k = 0; k < N; ++k) {
    const ControlInput in{ref.x[k][SDELTA], ref.x[k][SFX]};
    z = stage_features(chassis_of(ref.x[k]), in, base[k], vp_, fp_);
    corr[k].dFyF = (stp ? models_->dfyf.stp_posterior(z) : models_->dfyf.gp_posterior(z)).mean;
    corr[k].dFyR = (stp ? models_->dfyr.stp_posterior(z) : models_->dfyr.gp_posterior(z)).mean;
    corr[k].dr = (stp ? models_->dr.stp_posterior(z) : models_->dr.gp_posterior(z)).mean;
  }
  return corr;
}

std::vector<StagePoint> Controller::stage_points(
    const ContouringSolver::Trajectory& ref,
    const std::vector<MismatchCorrection>& corr) const {
  const int N = cfg_.N;
  std::vector<StagePoint> pts(N + 1);
  for (int k = 0; k <= N; ++k) {
    StagePoint& p = pts[k];
    p.state = chassis_of(ref.x[k]);
    p.input = ControlInput{ref.x[k][SDELTA], ref.x[k][SFX]};
    p.corr = corr[std::min(k, N - 1)];
    p.features = stage_features(p.state, p.input, p.corr, vp_, fp_);
  }
  return pts;
}

double Controller::plan_min_clearance(const ContouringSolver::Trajectory& ref) const {
  double clearance = std::numeric_limits<double>::infinity();
  for (const auto& x : ref.x) {
    const Eigen::Vector2d pos(x[SX], x[SY]);
    for (const auto& obs : scenario_.obstacles)
      clearance = std::min(clearance, obstacle_clearance(pos, obs));
  }
  return clearance;
}

CycleDiagnostics Controller::control_step(const VehicleState& state) {
  const auto t_start = std::chrono::steady_clock::now();
  const int N = cfg_.N;
  const double dt = cfg_.dt;

  if (first_cycle_) {
    // Start from the drag-balancing drive force so the held input keeps the
    // entry speed instead of coasting through the first interval.
    delta_cmd_ = 0.0;
    fx_cmd_ = std::clamp(vp_.drag_coeff * state.v_x * state.v_x, cfg_.bounds.fx_min,
                         cfg_.bounds.fx_max);
    s_hint_ = 0.0;
    first_cycle_ = false;
  }
  const double s0 = scenario_.path.project({state.X, state.Y}, s_hint_);

  ContouringState x0;
  x0 << state.X, state.Y, state.psi, state.v_x, state.v_y, state.r, s0, delta_cmd_, fx_cmd_;

  ContouringSolver::Trajectory ref = shifted_warm_start(x0);

  std::vector<MismatchCorrection> corr(N);
  std::vector<double> sigma_vy(N + 1, 0.0);
  std::vector<double> sigma_r(N + 1, 0.0);
  int psd_floor = 0;
  if (variant_ != Variant::mpcc) {
    std::vector<MismatchCorrection> base = prev_corr_;
    if (static_cast<int>(base.size()) == N) {
      // Shift the previous cycle's corrections alongside the plan.
      for (int k = 0; k + 1 < N; ++k) base[k] = base[k + 1];
    } else {
      base.assign(N, MismatchCorrection{});
    }
    // Two passes: the first predicts corrections from last cycle's values,
    // the second rebuilds the features around the fresh predictions.
    corr = query_corrections(ref, base);
    corr = query_corrections(ref, corr);

    const std::vector<StagePoint> pts = stage_points(ref, corr);
    const SigmaTrace trace =
        propagate_horizon(pts, models_->dfyf, models_->dfyr, models_->dr,
                          variant_ == Variant::lmpcc_stp, vp_, fp_, cfg_.N_prob, dt);
    sigma_vy = trace.sigma_vy;
    sigma_r = trace.sigma_r;
    psd_floor = trace.psd_floor_count;
  }

  const double clearance = plan_min_clearance(ref);
  priority_ = scenario_.collision_priority &&
              priority_active(cfg_.priority, clearance, priority_);
  const OCPWeights weights = apply_priority(cfg_.weights, cfg_.priority, priority_);

  const ContouringSolver::Problem problem =
      build_ocp(scenario_, cfg_, weights, vp_, fp_, x0, corr, sigma_vy, sigma_r);
  const ContouringSolver::Result res =
      solver_.solve(problem, has_plan_ ? &ref : nullptr);

  CycleDiagnostics d;
  d.status = res.status;
  d.iterations = res.iterations;
  d.kkt = res.kkt;
  d.merit_steps = res.merit_steps;
  if (res.status == SqpStatus::failed) {
    // Documented fallback: reuse the shifted previous plan (which on the very
    // first cycle degenerates to holding the current command).
    d.used_fallback = true;
    plan_ = ref;
  } else {
    plan_ = res.traj;
  }
  has_plan_ = true;
  prev_corr_ = corr;

  // Apply the first-interval rates on top of the committed command so the
  // magnitude and rate bounds hold exactly, not just up to the defect.
  const double dd = std::clamp(plan_.u[0][UDDELTA], -cfg_.bounds.ddelta_max,
                               cfg_.bounds.ddelta_max);
  const double df = std::clamp(plan_.u[0][UDFX], -cfg_.bounds.dfx_max, cfg_.bounds.dfx_max);
  delta_cmd_ = std::clamp(delta_cmd_ + dt * dd, -cfg_.bounds.delta_max, cfg_.bounds.delta_max);
  fx_cmd_ = std::clamp(fx_cmd_ + dt * df, cfg_.bounds.fx_min, cfg_.bounds.fx_max);
  s_hint_ = plan_.x[1][SS];

  d.command = ControlInput{delta_cmd_, fx_cmd_};
  d.s0 = s0;
  d.priority = priority_;
  d.plan_clearance = clearance;
  d.corr = corr;
  d.sigma_vy = sigma_vy;
  d.sigma_r = sigma_r;
  d.psd_floor_count = psd_floor;

  for (int k = 1; k <= N; ++k) {
    StageCostTerms t;
    double val = 0.0;
    state_cost_model(plan_.x[k], scenario_, weights, vp_, cfg_.hinge_eps, sigma_vy[k],
                     sigma_r[k], &val, nullptr, nullptr, &t);
    d.state_cost.con += t.con;
    d.state_cost.lag += t.lag;
    d.state_cost.vel += t.vel;
    d.state_cost.obs += t.obs;
    d.state_cost.edge += t.edge;
    d.state_cost.sigma += t.sigma;
  }
  for (int k = 0; k < N; ++k)
    d.rate_cost += weights.q_ddelta * plan_.u[k][UDDELTA] * plan_.u[k][UDDELTA] +
                   weights.q_dfx * plan_.u[k][UDFX] * plan_.u[k][UDFX];
  d.objective = res.status == SqpStatus::failed ? d.state_cost.total() + d.rate_cost
                                                : res.objective;

  d.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         t_start)
                   .count();
  return d;
}

}  // namespace lmpcc
