#include "lmpcc/ocp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lmpcc/dynamics.hpp"
#include "lmpcc/track_errors.hpp"

namespace lmpcc {

void OCPConfig::validate() const {
  if (N < N_prob || N_prob < 1) throw std::invalid_argument("ocp: need N >= N_prob >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("ocp: dt must be positive");
  const double* qs[] = {&weights.q_con,   &weights.q_lag,  &weights.q_vel,
                        &weights.q_ddelta, &weights.q_dfx,  &weights.q_obs,
                        &weights.q_edge,  &weights.q_sigma_vy, &weights.q_sigma_r};
  for (const double* q : qs)
    if (*q < 0.0) throw std::invalid_argument("ocp: weights must be non-negative");
  if (!(bounds.delta_max > 0.0) || !(bounds.ddelta_max > 0.0) || !(bounds.dfx_max > 0.0))
    throw std::invalid_argument("ocp: rate/steer bounds must be positive");
  if (bounds.fx_min >= bounds.fx_max || bounds.vx_min >= bounds.vx_max)
    throw std::invalid_argument("ocp: empty force or speed interval");
  if (!(bounds.sdot_factor > 0.0)) throw std::invalid_argument("ocp: sdot_factor must be positive");
  if (!(hinge_eps > 0.0)) throw std::invalid_argument("ocp: hinge_eps must be positive");
  // Tuning rule: the sigma cost at its design ceiling must stay below the
  // prioritized cost of one fully penetrating obstacle stage.
  const double sigma_cost = weights.q_sigma_vy * sigma_vy_cap * sigma_vy_cap +
                            weights.q_sigma_r * sigma_r_cap * sigma_r_cap;
  if (sigma_cost > priority.obstacle_gain * weights.q_obs)
    throw std::invalid_argument("ocp: sigma weights exceed the prioritized obstacle cost");
}

bool priority_active(const PriorityConfig& pc, double min_clearance, bool was_active) {
  return min_clearance < (was_active ? pc.threshold + pc.hysteresis : pc.threshold);
}

OCPWeights apply_priority(const OCPWeights& w, const PriorityConfig& pc, bool active) {
  if (!active) return w;
  OCPWeights out = w;
  out.q_obs *= pc.obstacle_gain;
  out.q_edge *= pc.obstacle_gain;
  out.q_con *= pc.tracking_gain;
  out.q_vel *= pc.tracking_gain;
  return out;
}

double hinge_smooth(double v, double eps) {
  if (v <= 0.0) return 0.0;
  if (v < eps) return v * v / (2.0 * eps);
  return v - 0.5 * eps;
}

double hinge_smooth_deriv(double v, double eps) {
  if (v <= 0.0) return 0.0;
  if (v < eps) return v / eps;
  return 1.0;
}

namespace {

// Continuous-time derivative of the augmented state with Jacobians. The
// actuator targets are states driven by the rate controls, so the control
// Jacobian is a constant selector.
ContouringState augmented_derivative(const ContouringState& x, const ContouringInput& u,
                                     const MismatchCorrection& corr, const VehicleParams& vp,
                                     const FialaParams& fp, Eigen::Matrix<double, 9, 9>* A) {
  VehicleState vs{x(SX), x(SY), x(SPSI), x(SVX), x(SVY), x(SR)};
  ControlInput in{x(SDELTA), x(SFX)};
  const StateDerivative sd = nominal_derivatives(vs, in, corr, vp, fp);

  ContouringState dx;
  dx << sd.X_dot, sd.Y_dot, sd.psi_dot, sd.v_x_dot, sd.v_y_dot, sd.r_dot, u(USDOT),
      u(UDDELTA), u(UDFX);
  if (A) {
    const FullJacobians fj = nominal_jacobians(vs, in, corr, vp, fp);
    A->setZero();
    A->topLeftCorner<6, 6>() = fj.A;
    A->block<6, 1>(0, SDELTA) = fj.B.col(0);
    A->block<6, 1>(0, SFX) = fj.B.col(1);
  }
  return dx;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

ContouringState ocp_dynamics(const ContouringState& x, const ContouringInput& u,
                             const MismatchCorrection& corr, const VehicleParams& vp,
                             const FialaParams& fp, double dt, Eigen::Matrix<double, 9, 9>* A,
                             Eigen::Matrix<double, 9, 3>* B) {
  using Mat9 = Eigen::Matrix<double, 9, 9>;
  using Mat93 = Eigen::Matrix<double, 9, 3>;

  Mat93 Bc = Mat93::Zero();
  Bc(SS, USDOT) = 1.0;
  Bc(SDELTA, UDDELTA) = 1.0;
  Bc(SFX, UDFX) = 1.0;

  try {
    if (!A && !B) {
      const ContouringState k1 = augmented_derivative(x, u, corr, vp, fp, nullptr);
      const ContouringState k2 =
          augmented_derivative(x + 0.5 * dt * k1, u, corr, vp, fp, nullptr);
      const ContouringState k3 =
          augmented_derivative(x + 0.5 * dt * k2, u, corr, vp, fp, nullptr);
      const ContouringState k4 = augmented_derivative(x + dt * k3, u, corr, vp, fp, nullptr);
      return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    Mat9 A1, A2, A3, A4;
    const ContouringState k1 = augmented_derivative(x, u, corr, vp, fp, &A1);
    const ContouringState k2 = augmented_derivative(x + 0.5 * dt * k1, u, corr, vp, fp, &A2);
    const ContouringState k3 = augmented_derivative(x + 0.5 * dt * k2, u, corr, vp, fp, &A3);
    const ContouringState k4 = augmented_derivative(x + dt * k3, u, corr, vp, fp, &A4);

    // Chain rule through the intermediate RK4 states.
    const Mat9 K1 = A1;
    const Mat9 K2 = A2 * (Mat9::Identity() + 0.5 * dt * K1);
    const Mat9 K3 = A3 * (Mat9::Identity() + 0.5 * dt * K2);
    const Mat9 K4 = A4 * (Mat9::Identity() + dt * K3);
    if (A) *A = Mat9::Identity() + dt / 6.0 * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
    if (B) {
      const Mat93 G1 = Bc;
      const Mat93 G2 = A2 * (0.5 * dt) * G1 + Bc;
      const Mat93 G3 = A3 * (0.5 * dt) * G2 + Bc;
      const Mat93 G4 = A4 * dt * G3 + Bc;
      *B = dt / 6.0 * (G1 + 2.0 * G2 + 2.0 * G3 + G4);
    }
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  } catch (const std::domain_error&) {
    // Speed fell below the slip-angle validity floor; poison the step so the
    // solver backs away instead of crashing.
    if (A) A->setConstant(kNaN);
    if (B) B->setConstant(kNaN);
    return ContouringState::Constant(kNaN);
  }
}

void state_cost_model(const ContouringState& x, const Scenario& sc, const OCPWeights& w,
                      const VehicleParams& vp, double hinge_eps, double sigma_vy,
                      double sigma_r, double* value, Eigen::Matrix<double, 9, 1>* gx,
                      Eigen::Matrix<double, 9, 9>* Qxx, StageCostTerms* terms) {
  using Vec9 = Eigen::Matrix<double, 9, 1>;
  double val = 0.0;
  if (gx) gx->setZero();
  if (Qxx) Qxx->setZero();
  StageCostTerms tm;

  auto add = [&](double q, double r, const Vec9& grad, double* bucket) {
    const double c = q * r * r;
    val += c;
    *bucket += c;
    if (gx) *gx += 2.0 * q * r * grad;
    if (Qxx) *Qxx += 2.0 * q * grad * grad.transpose();
  };

  const auto ref = sc.path.evaluate_extended(x(SS));
  const double ct = std::cos(ref.heading), st = std::sin(ref.heading);
  const double dX = x(SX) - ref.position.x();
  const double dY = x(SY) - ref.position.y();
  const double e_con = -st * dX + ct * dY;
  const double e_lag = ct * dX + st * dY;

  Vec9 g_con = Vec9::Zero();
  g_con(SX) = -st;
  g_con(SY) = ct;
  g_con(SS) = -ref.curvature * e_lag;
  add(w.q_con, e_con, g_con, &tm.con);

  Vec9 g_lag = Vec9::Zero();
  g_lag(SX) = ct;
  g_lag(SY) = st;
  g_lag(SS) = ref.curvature * e_con - 1.0;
  add(w.q_lag, e_lag, g_lag, &tm.lag);

  Vec9 g_vel = Vec9::Zero();
  g_vel(SVX) = 1.0;
  add(w.q_vel, x(SVX) - sc.v_ref, g_vel, &tm.vel);

  const Eigen::Vector2d pos(x(SX), x(SY));
  for (const auto& obs : sc.obstacles) {
    Eigen::Vector2d dgrad;
    const double d = obstacle_norm_distance(pos, obs, &dgrad);
    const double pen = 1.0 - d;
    if (pen <= 0.0) continue;
    const double h = hinge_smooth(pen, hinge_eps);
    const double hp = hinge_smooth_deriv(pen, hinge_eps);
    Vec9 g = Vec9::Zero();
    g(SX) = -hp * dgrad.x();
    g(SY) = -hp * dgrad.y();
    add(w.q_obs, h, g, &tm.obs);
  }

  const double s_edge = std::clamp(x(SS), 0.0, sc.path.length());
  const double half_w = 0.5 * vp.width;
  const double lv = e_con - (sc.edges.left_at(s_edge) - half_w);
  if (lv > 0.0) {
    Vec9 g = hinge_smooth_deriv(lv, hinge_eps) * g_con;
    add(w.q_edge, hinge_smooth(lv, hinge_eps), g, &tm.edge);
  }
  const double rv = (sc.edges.right_at(s_edge) + half_w) - e_con;
  if (rv > 0.0) {
    Vec9 g = -hinge_smooth_deriv(rv, hinge_eps) * g_con;
    add(w.q_edge, hinge_smooth(rv, hinge_eps), g, &tm.edge);
  }

  // Propagated uncertainty enters as a per-stage constant; the optimizer
  // feels it only through the trajectory-dependent re-evaluation next cycle.
  tm.sigma = w.q_sigma_vy * sigma_vy * sigma_vy + w.q_sigma_r * sigma_r * sigma_r;
  val += tm.sigma;

  if (value) *value = val;
  if (terms) *terms = tm;
}

ContouringSolver::Problem build_ocp(const Scenario& sc, const OCPConfig& cfg,
                                    const OCPWeights& weights, const VehicleParams& vp,
                                    const FialaParams& fp, const ContouringState& x0,
                                    const std::vector<MismatchCorrection>& corr,
                                    const std::vector<double>& sigma_vy,
                                    const std::vector<double>& sigma_r) {
  cfg.validate();
  if (static_cast<int>(corr.size()) != cfg.N)
    throw std::invalid_argument("ocp: need one correction per shooting interval");
  if (static_cast<int>(sigma_vy.size()) != cfg.N + 1 ||
      static_cast<int>(sigma_r.size()) != cfg.N + 1)
    throw std::invalid_argument("ocp: need one sigma pair per state stage");

  ContouringSolver::Problem pb;
  pb.N = cfg.N;
  pb.x0 = x0;

  const Scenario* scp = &sc;
  const double dt = cfg.dt;
  const double eps = cfg.hinge_eps;

  pb.dynamics = [corr, vp, fp, dt](int k, const ContouringState& x, const ContouringInput& u,
                                   Eigen::Matrix<double, 9, 9>* A,
                                   Eigen::Matrix<double, 9, 3>* B) {
    return ocp_dynamics(x, u, corr[static_cast<size_t>(k)], vp, fp, dt, A, B);
  };

  pb.stage_cost = [scp, weights, vp, eps, sigma_vy, sigma_r](
                      int k, const ContouringState& x, const ContouringInput& u) {
    ContouringSolver::StageCost c;
    c.value = weights.q_ddelta * u(UDDELTA) * u(UDDELTA) + weights.q_dfx * u(UDFX) * u(UDFX);
    c.gu(UDDELTA) = 2.0 * weights.q_ddelta * u(UDDELTA);
    c.gu(UDFX) = 2.0 * weights.q_dfx * u(UDFX);
    c.Quu(UDDELTA, UDDELTA) = 2.0 * weights.q_ddelta;
    c.Quu(UDFX, UDFX) = 2.0 * weights.q_dfx;
    if (k >= 1) {
      double sv = 0.0;
      const auto idx = static_cast<size_t>(k);
      state_cost_model(x, *scp, weights, vp, eps, sigma_vy[idx], sigma_r[idx], &sv, &c.gx,
                       &c.Qxx, nullptr);
      c.value += sv;
    }
    return c;
  };

  pb.terminal_cost = [scp, weights, vp, eps, sigma_vy, sigma_r,
                      N = cfg.N](const ContouringState& x) {
    ContouringSolver::TerminalCost c;
    state_cost_model(x, *scp, weights, vp, eps, sigma_vy[static_cast<size_t>(N)],
                     sigma_r[static_cast<size_t>(N)], &c.value, &c.gx, &c.Qxx, nullptr);
    return c;
  };

  constexpr double inf = std::numeric_limits<double>::infinity();
  pb.x_lo << -inf, -inf, -inf, cfg.bounds.vx_min, -inf, -inf, 0.0, -cfg.bounds.delta_max,
      cfg.bounds.fx_min;
  pb.x_hi << inf, inf, inf, cfg.bounds.vx_max, inf, inf, sc.path.length() + 30.0,
      cfg.bounds.delta_max, cfg.bounds.fx_max;
  pb.u_lo << -cfg.bounds.ddelta_max, -cfg.bounds.dfx_max, 0.0;
  pb.u_hi << cfg.bounds.ddelta_max, cfg.bounds.dfx_max, cfg.bounds.sdot_factor * sc.v_ref;
  return pb;
}

}  // namespace lmpcc
