#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lmpcc/dynamics.hpp"
#include "lmpcc/plant.hpp"
#include "lmpcc/tyre.hpp"
#include "lmpcc/vehicle.hpp"

using namespace lmpcc;

namespace {

// Scalar re-derivation of the brush cubic, kept deliberately independent of
// the library code path.
double fiala_oracle(double alpha, double C, double Fz, double mu) {
  const double alpha_sl = std::atan(3.0 * mu * Fz / C);
  if (std::abs(alpha) >= alpha_sl) return -(alpha > 0 ? 1.0 : -1.0) * mu * Fz;
  const double ta = std::tan(alpha);
  const double a = std::abs(ta);
  return -C * ta + C * C / (3.0 * mu * Fz) * a * ta - C * C * C / (27.0 * mu * mu * Fz * Fz) * ta * ta * ta;
}

double pacejka_oracle(double alpha, double B, double C, double D, double E) {
  const double Ba = B * alpha;
  return -D * std::sin(C * std::atan(Ba - E * (Ba - std::atan(Ba))));
}

VehicleState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VehicleState s;
  s.X = 20.0 * u(rng);
  s.Y = 20.0 * u(rng);
  s.psi = 1.5 * u(rng);
  s.v_x = 12.0 + 8.0 * u(rng);
  s.v_y = 1.5 * u(rng);
  s.r = 0.8 * u(rng);
  return s;
}

ControlInput random_input(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {0.3 * u(rng), 4000.0 * u(rng)};
}

Eigen::Matrix<double, 6, 1> deriv_vec(const VehicleState& s, const ControlInput& in,
                                      const MismatchCorrection& c, const VehicleParams& vp,
                                      const FialaParams& fp) {
  const StateDerivative d = nominal_derivatives(s, in, c, vp, fp);
  Eigen::Matrix<double, 6, 1> v;
  v << d.X_dot, d.Y_dot, d.psi_dot, d.v_x_dot, d.v_y_dot, d.r_dot;
  return v;
}

}  // namespace

TEST_CASE("slip angles follow the kinematic atan relations") {
  VehicleParams vp;
  VehicleState s;
  s.v_x = 15.0;

  ControlInput in{0.0, 0.0};
  SlipAngles sa = slip_angles(s, in, vp);
  CHECK(sa.alpha_f == doctest::Approx(0.0));
  CHECK(sa.alpha_r == doctest::Approx(0.0));

  in.delta = 0.05;
  sa = slip_angles(s, in, vp);
  CHECK(sa.alpha_f == doctest::Approx(-0.05));
  CHECK(sa.alpha_r == doctest::Approx(0.0));

  s.v_y = 0.5;
  s.r = 0.2;
  in.delta = 0.0;
  sa = slip_angles(s, in, vp);
  CHECK(sa.alpha_f == doctest::Approx(std::atan(0.72 / 15.0)).epsilon(1e-12));
  CHECK(sa.alpha_r == doctest::Approx(std::atan(0.18 / 15.0)).epsilon(1e-12));

  s.v_x = 0.1;
  CHECK_THROWS_AS(slip_angles(s, in, vp), std::domain_error);
}

TEST_CASE("fiala force matches a scalar oracle and saturates at mu Fz") {
  const double C = 80000.0, Fz = 4000.0, mu = 1.0;
  CHECK(fiala_lateral_force(0.0, C, Fz, mu) == 0.0);

  // Frozen oracle value for the cubic region probe.
  const double f = fiala_lateral_force(0.05, C, Fz, mu);
  CHECK(f == doctest::Approx(fiala_oracle(0.05, C, Fz, mu)).epsilon(1e-12));
  CHECK(f == doctest::Approx(-2816.2971608440207).epsilon(1e-10));

  const double alpha_sl = std::atan(3.0 * mu * Fz / C);
  CHECK(fiala_lateral_force(alpha_sl + 0.01, C, Fz, mu) == doctest::Approx(-mu * Fz));
  CHECK(fiala_lateral_force(-alpha_sl - 0.3, C, Fz, mu) == doctest::Approx(mu * Fz));

  for (double a = -1.5; a <= 1.5; a += 0.003) {
    const double v = fiala_lateral_force(a, C, Fz, mu);
    CHECK(std::abs(v) <= mu * Fz + 1e-9);
    CHECK(v == doctest::Approx(-fiala_lateral_force(-a, C, Fz, mu)).epsilon(1e-12));
  }
}

TEST_CASE("fiala gradient matches finite differences and vanishes when sliding") {
  const double C = 60000.0, Fz = 5000.0, mu = 0.9;
  const double h = 1e-6;
  for (double a = -0.3; a <= 0.3; a += 0.01) {
    const double g = fiala_cornering_gradient(a, C, Fz, mu);
    const double fd =
        (fiala_lateral_force(a + h, C, Fz, mu) - fiala_lateral_force(a - h, C, Fz, mu)) / (2 * h);
    CHECK(g == doctest::Approx(fd).epsilon(1e-5));
  }
  CHECK(fiala_cornering_gradient(0.0, C, Fz, mu) == doctest::Approx(-C).epsilon(1e-12));
  const double alpha_sl = std::atan(3.0 * mu * Fz / C);
  CHECK(fiala_cornering_gradient(alpha_sl + 0.05, C, Fz, mu) == 0.0);
}

TEST_CASE("pacejka force matches a scalar oracle and is odd") {
  PacejkaAxle p{10.0, 1.5, 4000.0, -1.0};
  CHECK(pacejka_lateral_force(0.0, p) == 0.0);
  CHECK(pacejka_lateral_force(0.08, p) ==
        doctest::Approx(pacejka_oracle(0.08, 10.0, 1.5, 4000.0, -1.0)).epsilon(1e-12));
  CHECK(pacejka_lateral_force(0.08, p) == doctest::Approx(-3600.2180885831895).epsilon(1e-10));
  for (double a = -0.5; a <= 0.5; a += 0.017)
    CHECK(pacejka_lateral_force(-a, p) == doctest::Approx(-pacejka_lateral_force(a, p)));

  // Small-angle slope equals -B*C*D, the quantity matched to the brush
  // model's cornering stiffness when configuring an equivalent plant.
  const double h = 1e-7;
  const double slope = (pacejka_lateral_force(h, p) - pacejka_lateral_force(-h, p)) / (2 * h);
  CHECK(slope == doctest::Approx(-p.B * p.C * p.D).epsilon(1e-6));
  CHECK(pacejka_cornering_gradient(0.0, p) == doctest::Approx(-p.B * p.C * p.D).epsilon(1e-9));
  for (double a = -0.4; a <= 0.4; a += 0.03) {
    const double fd = (pacejka_lateral_force(a + h, p) - pacejka_lateral_force(a - h, p)) / (2 * h);
    CHECK(pacejka_cornering_gradient(a, p) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("nominal derivatives reproduce an independent assembly of the model") {
  VehicleParams vp;
  FialaParams fp;
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const VehicleState s = random_state(rng);
    const ControlInput in = random_input(rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const MismatchCorrection c{400.0 * u(rng), 400.0 * u(rng), 0.05 * u(rng)};

    const double alpha_f = std::atan((s.v_y + vp.l_f * s.r) / s.v_x) - in.delta;
    const double alpha_r = std::atan((s.v_y - vp.l_r * s.r) / s.v_x);
    const double FyF = fiala_oracle(alpha_f, fp.C_alpha_f, fp.F_z_f, vp.mu) + c.dFyF;
    const double FyR = fiala_oracle(alpha_r, fp.C_alpha_r, fp.F_z_r, vp.mu) + c.dFyR;
    const double FxF = vp.fx_front_ratio * in.F_x;
    const double FxR = (1.0 - vp.fx_front_ratio) * in.F_x;
    const double drag = vp.drag_coeff * s.v_x * s.v_x;
    const double cd = std::cos(in.delta), sd = std::sin(in.delta);

    const StateDerivative d = nominal_derivatives(s, in, c, vp, fp);
    CHECK(d.X_dot == doctest::Approx(s.v_x * std::cos(s.psi) - s.v_y * std::sin(s.psi)).epsilon(1e-12));
    CHECK(d.Y_dot == doctest::Approx(s.v_x * std::sin(s.psi) + s.v_y * std::cos(s.psi)).epsilon(1e-12));
    CHECK(d.psi_dot == doctest::Approx(s.r).epsilon(1e-12));
    CHECK(d.v_x_dot ==
          doctest::Approx((FxF * cd - FyF * sd + FxR - drag) / vp.m + (s.r + c.dr) * s.v_y)
              .epsilon(1e-10));
    CHECK(d.v_y_dot ==
          doctest::Approx((FxF * sd + FyF * cd + FyR) / vp.m - (s.r + c.dr) * s.v_x).epsilon(1e-10));
    CHECK(d.r_dot ==
          doctest::Approx((vp.l_f * (FyF * cd + FxF * sd) - vp.l_r * FyR) / vp.I_zz).epsilon(1e-10));
  }
}

TEST_CASE("yaw-rate correction only shifts the velocity coupling terms") {
  VehicleParams vp;
  FialaParams fp;
  VehicleState s;
  s.v_x = 16.0;
  s.v_y = 0.7;
  s.r = 0.1;
  const ControlInput in{0.03, 500.0};
  const MismatchCorrection none{};
  const MismatchCorrection dr_only{0.0, 0.0, 0.08};

  const StateDerivative a = nominal_derivatives(s, in, none, vp, fp);
  const StateDerivative b = nominal_derivatives(s, in, dr_only, vp, fp);
  CHECK(b.v_x_dot - a.v_x_dot == doctest::Approx(0.08 * s.v_y).epsilon(1e-12));
  CHECK(b.v_y_dot - a.v_y_dot == doctest::Approx(-0.08 * s.v_x).epsilon(1e-12));
  CHECK(b.X_dot == a.X_dot);
  CHECK(b.Y_dot == a.Y_dot);
  CHECK(b.psi_dot == a.psi_dot);
  CHECK(b.r_dot == a.r_dot);

  // Straight state: v_y = 0 kills the v_x coupling entirely.
  s.v_y = 0.0;
  s.r = 0.0;
  const StateDerivative c = nominal_derivatives(s, {0.0, 0.0}, dr_only, vp, fp);
  CHECK(c.v_y_dot == doctest::Approx(-0.08 * s.v_x).epsilon(1e-12));
  CHECK(c.v_x_dot == doctest::Approx(-vp.drag_coeff * s.v_x * s.v_x / vp.m).epsilon(1e-12));
}

TEST_CASE("equilibrium state has zero dynamic derivatives") {
  VehicleParams vp;
  FialaParams fp;
  VehicleState s;
  s.v_x = 15.0;
  const ControlInput in{0.0, vp.drag_coeff * s.v_x * s.v_x};
  const StateDerivative d = nominal_derivatives(s, in, {}, vp, fp);
  CHECK(d.v_x_dot == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(d.v_y_dot == doctest::Approx(0.0));
  CHECK(d.r_dot == doctest::Approx(0.0));
  CHECK(d.X_dot == doctest::Approx(15.0));

  const VehicleState n = rk4_step(s, in, {}, vp, fp, 0.05);
  CHECK(n.X == doctest::Approx(15.0 * 0.05).epsilon(1e-12));
  CHECK(n.v_x == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(n.v_y == doctest::Approx(0.0));
  CHECK(n.r == doctest::Approx(0.0));
}

TEST_CASE("rk4 integration shows fourth-order convergence") {
  VehicleParams vp;
  FialaParams fp;
  // The brush force is only C^1 at alpha = 0, so the state and horizon are
  // chosen to keep both slip angles on one side of zero. With the kink
  // avoided the classical fourth order shows up cleanly.
  VehicleState s;
  s.v_x = 18.0;
  s.v_y = 1.2;
  s.r = 0.0;
  const ControlInput in{-0.1, 1000.0};
  const MismatchCorrection c{150.0, -100.0, 0.02};

  auto integrate = [&](double h, int steps) {
    VehicleState x = s;
    for (int i = 0; i < steps; ++i) x = rk4_step(x, in, c, vp, fp, h);
    return x;
  };
  const double T = 0.08;
  const VehicleState ref = integrate(T / 2048.0, 2048);
  auto err = [&](const VehicleState& x) {
    return std::sqrt(std::pow(x.X - ref.X, 2) + std::pow(x.Y - ref.Y, 2) +
                     std::pow(x.v_y - ref.v_y, 2) + std::pow(x.r - ref.r, 2));
  };
  const double e1 = err(integrate(T / 4.0, 4));
  const double e2 = err(integrate(T / 8.0, 8));
  const double e3 = err(integrate(T / 16.0, 16));
  const double order12 = std::log2(e1 / e2);
  const double order23 = std::log2(e2 / e3);
  CHECK(order12 >= 3.9);
  CHECK(order23 >= 3.9);
}

TEST_CASE("lateral jacobians match finite differences at zero steer closed forms") {
  VehicleParams vp;
  FialaParams fp;
  VehicleState s;
  s.v_x = 15.0;
  s.v_y = 0.3;
  s.r = 0.1;
  const ControlInput in{0.0, 0.0};
  const LateralJacobians J = dynamics_jacobians(s, in, {}, vp, fp);
  CHECK(J.B(0, 0) == doctest::Approx(1.0 / vp.m).epsilon(1e-12));
  CHECK(J.B(0, 1) == doctest::Approx(1.0 / vp.m).epsilon(1e-12));
  CHECK(J.B(1, 0) == doctest::Approx(vp.l_f / vp.I_zz).epsilon(1e-12));
  CHECK(J.B(1, 1) == doctest::Approx(-vp.l_r / vp.I_zz).epsilon(1e-12));
}

TEST_CASE("lateral and full jacobians agree with central differences") {
  VehicleParams vp;
  FialaParams fp;
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-6;
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const VehicleState s = random_state(rng);
    const ControlInput in = random_input(rng);
    const MismatchCorrection c{300.0 * u(rng), 300.0 * u(rng), 0.05 * u(rng)};

    const LateralJacobians J = dynamics_jacobians(s, in, c, vp, fp);
    // d(v_y_dot, r_dot)/d(v_y, r)
    for (int col = 0; col < 2; ++col) {
      VehicleState sp = s, sm = s;
      (col == 0 ? sp.v_y : sp.r) += h;
      (col == 0 ? sm.v_y : sm.r) -= h;
      const StateDerivative dp = nominal_derivatives(sp, in, c, vp, fp);
      const StateDerivative dm = nominal_derivatives(sm, in, c, vp, fp);
      const double fd0 = (dp.v_y_dot - dm.v_y_dot) / (2 * h);
      const double fd1 = (dp.r_dot - dm.r_dot) / (2 * h);
      CHECK(J.A(0, col) == doctest::Approx(fd0).epsilon(1e-5));
      CHECK(J.A(1, col) == doctest::Approx(fd1).epsilon(1e-5));
    }
    // d(v_y_dot, r_dot)/d(dFyF, dFyR)
    for (int col = 0; col < 2; ++col) {
      MismatchCorrection cp = c, cm = c;
      (col == 0 ? cp.dFyF : cp.dFyR) += h;
      (col == 0 ? cm.dFyF : cm.dFyR) -= h;
      const StateDerivative dp = nominal_derivatives(s, in, cp, vp, fp);
      const StateDerivative dm = nominal_derivatives(s, in, cm, vp, fp);
      CHECK(J.B(0, col) == doctest::Approx((dp.v_y_dot - dm.v_y_dot) / (2 * h)).epsilon(1e-5));
      CHECK(J.B(1, col) == doctest::Approx((dp.r_dot - dm.r_dot) / (2 * h)).epsilon(1e-5));
    }

    const FullJacobians F = nominal_jacobians(s, in, c, vp, fp);
    const Eigen::Matrix<double, 6, 1> base = deriv_vec(s, in, c, vp, fp);
    (void)base;
    for (int col = 0; col < 6; ++col) {
      VehicleState sp = s, sm = s;
      double* fields_p[] = {&sp.X, &sp.Y, &sp.psi, &sp.v_x, &sp.v_y, &sp.r};
      double* fields_m[] = {&sm.X, &sm.Y, &sm.psi, &sm.v_x, &sm.v_y, &sm.r};
      *fields_p[col] += h;
      *fields_m[col] -= h;
      const Eigen::Matrix<double, 6, 1> fd =
          (deriv_vec(sp, in, c, vp, fp) - deriv_vec(sm, in, c, vp, fp)) / (2 * h);
      for (int row = 0; row < 6; ++row) {
        const double scale = std::max(1.0, std::abs(fd(row)));
        CHECK(std::abs(F.A(row, col) - fd(row)) / scale < 1e-5);
      }
    }
    for (int col = 0; col < 2; ++col) {
      ControlInput ip = in, im = in;
      const double step = col == 0 ? h : 1e-2;  // force axis needs a larger probe
      (col == 0 ? ip.delta : ip.F_x) += step;
      (col == 0 ? im.delta : im.F_x) -= step;
      const Eigen::Matrix<double, 6, 1> fd =
          (deriv_vec(s, ip, c, vp, fp) - deriv_vec(s, im, c, vp, fp)) / (2 * step);
      for (int row = 0; row < 6; ++row) {
        const double scale = std::max(1.0, std::abs(fd(row)));
        CHECK(std::abs(F.B(row, col) - fd(row)) / scale < 1e-5);
      }
    }
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("straight-line coasting with drag strictly slows down") {
  VehicleParams vp;
  FialaParams fp;
  VehicleState s;
  s.v_x = 20.0;
  double prev = s.v_x;
  for (int i = 0; i < 100; ++i) {
    s = rk4_step(s, {0.0, 0.0}, {}, vp, fp, 0.01);
    CHECK(s.v_x < prev);
    CHECK(s.v_y == 0.0);
    CHECK(s.r == 0.0);
    prev = s.v_x;
  }
  // Analytic check: dv/dt = -k v^2 integrates to v(t) = v0 / (1 + k v0 t).
  const double k = vp.drag_coeff / vp.m;
  CHECK(s.v_x == doctest::Approx(20.0 / (1.0 + k * 20.0 * 1.0)).epsilon(1e-8));
}

TEST_CASE("plant in brush-tyre mode reproduces the prediction model exactly") {
  PlantParams pp;
  pp.tyre = PlantTyre::fiala;
  pp.substeps = 1;
  pp.pacejka.relax_length = 0.0;
  pp.pacejka.steer_tau = 0.0;
  pp.noise.enabled = false;

  PlantState ps = plant_equilibrium(17.0);
  VehicleState model = ps.vs;
  const ControlInput cmd{0.04, 900.0};
  for (int i = 0; i < 40; ++i) {
    const PlantStepResult step = plant_step(pp, ps, cmd, 0.05, nullptr);
    ps = step.next;
    model = rk4_step(model, cmd, {}, pp.vehicle, pp.fiala, 0.05);
    CHECK(ps.vs.X == doctest::Approx(model.X).epsilon(1e-12));
    CHECK(ps.vs.Y == doctest::Approx(model.Y).epsilon(1e-12));
    CHECK(ps.vs.v_y == doctest::Approx(model.v_y).epsilon(1e-12));
    CHECK(ps.vs.r == doctest::Approx(model.r).epsilon(1e-12));
  }
}

TEST_CASE("pacejka plant with matched small-angle slope tracks the model in the linear regime") {
  PlantParams pp;
  pp.substeps = 1;
  pp.pacejka.relax_length = 0.0;
  pp.pacejka.steer_tau = 0.0;
  pp.noise.enabled = false;
  // Match B*C*D to the brush stiffness and park the peaks far away so the
  // curves agree where |alpha| is small.
  pp.pacejka.front = {pp.fiala.C_alpha_f / (1.4 * 50000.0), 1.4, 50000.0, 0.0};
  pp.pacejka.rear = {pp.fiala.C_alpha_r / (1.4 * 50000.0), 1.4, 50000.0, 0.0};

  PlantState ps = plant_equilibrium(15.0);
  VehicleState model = ps.vs;
  const ControlInput cmd{0.002, 0.0};  // stays well inside |alpha| < 0.01
  for (int i = 0; i < 10; ++i) {
    const PlantStepResult step = plant_step(pp, ps, cmd, 0.05, nullptr);
    ps = step.next;
    model = rk4_step(model, cmd, {}, pp.vehicle, pp.fiala, 0.05);
  }
  // Agreement is limited by the brush model's own quadratic term, roughly
  // C^2 / (3 mu F_z) * alpha^2 of force difference, so the bound is loose
  // enough for that but tight enough to catch any sign or scale slip.
  CHECK(std::abs(ps.vs.X - model.X) < 5e-4);
  CHECK(std::abs(ps.vs.Y - model.Y) < 5e-4);
  CHECK(std::abs(ps.vs.v_y - model.v_y) < 5e-4);
  CHECK(std::abs(ps.vs.r - model.r) < 5e-4);
}

TEST_CASE("steering actuator behaves as a first-order lag") {
  PlantParams pp;
  pp.noise.enabled = false;
  pp.pacejka.steer_tau = 0.08;
  pp.substeps = 10;

  PlantState ps = plant_equilibrium(15.0);
  const ControlInput cmd{0.1, 0.0};
  // Integrate exactly to t = steer_tau and expect the 63.2% rise.
  const double dt = 0.008;
  for (int i = 0; i < 10; ++i) ps = plant_step(pp, ps, cmd, dt, nullptr).next;
  CHECK(ps.delta_act == doctest::Approx(0.1 * (1.0 - std::exp(-1.0))).epsilon(0.02));
}

TEST_CASE("plant equilibrium stays put and measures zero lateral force") {
  PlantParams pp;
  pp.noise.enabled = false;
  PlantState ps = plant_equilibrium(16.0);
  const ControlInput cmd{0.0, pp.vehicle.drag_coeff * 16.0 * 16.0};
  const PlantStepResult step = plant_step(pp, ps, cmd, 0.05, nullptr);
  CHECK(step.next.vs.v_y == doctest::Approx(0.0));
  CHECK(step.next.vs.r == doctest::Approx(0.0));
  CHECK(step.next.vs.v_x == doctest::Approx(16.0).epsilon(1e-9));
  CHECK(step.measured.F_yF == doctest::Approx(0.0));
  CHECK(step.measured.F_yR == doctest::Approx(0.0));
  CHECK(step.truth.F_yF == doctest::Approx(0.0));
}

TEST_CASE("measurement noise is deterministic per seed and silent when disabled") {
  PlantParams pp;
  PlantState ps = plant_equilibrium(15.0);
  const ControlInput cmd{0.05, 0.0};

  pp.noise.enabled = false;
  const PlantStepResult clean = plant_step(pp, ps, cmd, 0.05, nullptr);
  CHECK(clean.measured.F_yF == clean.truth.F_yF);
  CHECK(clean.measured.r == clean.truth.r);

  pp.noise.enabled = true;
  std::mt19937_64 rng_a(123), rng_b(123), rng_c(77);
  const PlantStepResult a = plant_step(pp, ps, cmd, 0.05, &rng_a);
  const PlantStepResult b = plant_step(pp, ps, cmd, 0.05, &rng_b);
  const PlantStepResult c = plant_step(pp, ps, cmd, 0.05, &rng_c);
  CHECK(a.measured.F_yF == b.measured.F_yF);
  CHECK(a.measured.r == b.measured.r);
  CHECK(a.measured.F_yF != c.measured.F_yF);
  CHECK(a.truth.F_yF == c.truth.F_yF);  // noise never touches the truth channel
}

TEST_CASE("parameter validation rejects nonsense") {
  VehicleParams vp;
  vp.m = -1.0;
  CHECK_THROWS_AS(vp.validate(), std::invalid_argument);
  vp = VehicleParams{};
  vp.fx_front_ratio = 1.5;
  CHECK_THROWS_AS(vp.validate(), std::invalid_argument);
  FialaParams fp;
  fp.C_alpha_f = 0.0;
  CHECK_THROWS_AS(fp.validate(), std::invalid_argument);
  PacejkaParams pp;
  pp.front.D = -5.0;
  CHECK_THROWS_AS(pp.validate(), std::invalid_argument);

  // Static weight split sums to the full weight and respects the lever arms.
  VehicleParams v2;
  const FialaParams split = FialaParams::from_static_weight(v2);
  CHECK(split.F_z_f + split.F_z_r == doctest::Approx(v2.m * 9.81).epsilon(1e-12));
  CHECK(split.F_z_f * v2.l_f == doctest::Approx(split.F_z_r * v2.l_r).epsilon(1e-12));
}
