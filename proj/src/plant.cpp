#include "lmpcc/plant.hpp"

#include <array>
#include <cmath>

namespace lmpcc {

namespace {

double tyre_force(const PlantParams& pp, bool front, double alpha) {
  if (pp.tyre == PlantTyre::fiala) {
    return front ? fiala_lateral_force(alpha, pp.fiala.C_alpha_f, pp.fiala.F_z_f, pp.vehicle.mu)
                 : fiala_lateral_force(alpha, pp.fiala.C_alpha_r, pp.fiala.F_z_r, pp.vehicle.mu);
  }
  return pacejka_lateral_force(alpha, front ? pp.pacejka.front : pp.pacejka.rear);
}

using PlantVec = std::array<double, 9>;  // X Y psi vx vy r delta_act FyF_lag FyR_lag

PlantVec pack(const PlantState& s) {
  return {s.vs.X, s.vs.Y, s.vs.psi, s.vs.v_x, s.vs.v_y, s.vs.r,
          s.delta_act, s.F_yF_lag, s.F_yR_lag};
}

PlantState unpack(const PlantVec& v) {
  PlantState s;
  s.vs.X = v[0];
  s.vs.Y = v[1];
  s.vs.psi = v[2];
  s.vs.v_x = v[3];
  s.vs.v_y = v[4];
  s.vs.r = v[5];
  s.delta_act = v[6];
  s.F_yF_lag = v[7];
  s.F_yR_lag = v[8];
  return s;
}

PlantVec plant_deriv(const PlantParams& pp, const PlantVec& x, const ControlInput& cmd) {
  const VehicleParams& vp = pp.vehicle;
  const bool steer_lag = pp.pacejka.steer_tau > 1e-9;
  const bool tyre_lag = pp.pacejka.relax_length > 1e-9;

  const double v_x = x[3];
  if (v_x < vp.v_eps) throw std::domain_error("plant_step: v_x below low-speed guard");
  const double v_y = x[4];
  const double r = x[5];
  const double delta = steer_lag ? x[6] : cmd.delta;

  const double alpha_f = std::atan((v_y + vp.l_f * r) / v_x) - delta;
  const double alpha_r = std::atan((v_y - vp.l_r * r) / v_x);
  const double F_ss_f = tyre_force(pp, true, alpha_f);
  const double F_ss_r = tyre_force(pp, false, alpha_r);
  const double F_yF = tyre_lag ? x[7] : F_ss_f;
  const double F_yR = tyre_lag ? x[8] : F_ss_r;

  const double F_xF = vp.fx_front_ratio * cmd.F_x;
  const double F_xR = (1.0 - vp.fx_front_ratio) * cmd.F_x;
  const double F_drag = vp.drag_coeff * v_x * v_x;
  const double cd = std::cos(delta);
  const double sd = std::sin(delta);

  PlantVec d;
  d[0] = v_x * std::cos(x[2]) - v_y * std::sin(x[2]);
  d[1] = v_x * std::sin(x[2]) + v_y * std::cos(x[2]);
  d[2] = r;
  d[3] = (F_xF * cd - F_yF * sd + F_xR - F_drag) / vp.m + r * v_y;
  d[4] = (F_xF * sd + F_yF * cd + F_yR) / vp.m - r * v_x;
  d[5] = (F_yF * cd * vp.l_f - F_yR * vp.l_r + F_xF * sd * vp.l_f) / vp.I_zz;
  d[6] = steer_lag ? (cmd.delta - x[6]) / pp.pacejka.steer_tau : 0.0;
  d[7] = tyre_lag ? (F_ss_f - x[7]) * v_x / pp.pacejka.relax_length : 0.0;
  d[8] = tyre_lag ? (F_ss_r - x[8]) * v_x / pp.pacejka.relax_length : 0.0;
  return d;
}

PlantVec rk4(const PlantParams& pp, const PlantVec& x, const ControlInput& cmd, double h) {
  auto axpy = [](const PlantVec& a, const PlantVec& k, double s) {
    PlantVec b;
    for (int i = 0; i < 9; ++i) b[i] = a[i] + s * k[i];
    return b;
  };
  const PlantVec k1 = plant_deriv(pp, x, cmd);
  const PlantVec k2 = plant_deriv(pp, axpy(x, k1, h / 2.0), cmd);
  const PlantVec k3 = plant_deriv(pp, axpy(x, k2, h / 2.0), cmd);
  const PlantVec k4 = plant_deriv(pp, axpy(x, k3, h), cmd);
  PlantVec y;
  for (int i = 0; i < 9; ++i)
    y[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return y;
}

PlantMeasurement readout(const PlantParams& pp, const PlantState& s) {
  PlantMeasurement m;
  if (pp.pacejka.relax_length > 1e-9) {
    m.F_yF = s.F_yF_lag;
    m.F_yR = s.F_yR_lag;
  } else {
    const double alpha_f =
        std::atan((s.vs.v_y + pp.vehicle.l_f * s.vs.r) / s.vs.v_x) - s.delta_act;
    const double alpha_r = std::atan((s.vs.v_y - pp.vehicle.l_r * s.vs.r) / s.vs.v_x);
    m.F_yF = tyre_force(pp, true, alpha_f);
    m.F_yR = tyre_force(pp, false, alpha_r);
  }
  m.r = s.vs.r;
  return m;
}

PlantMeasurement add_noise(const PlantParams& pp, PlantMeasurement m, std::mt19937_64* rng) {
  if (!pp.noise.enabled || rng == nullptr) return m;
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto draw = [&](double std_dev) {
    double scale = 1.0;
    if (pp.noise.outlier_prob > 0.0 && uni(*rng) < pp.noise.outlier_prob)
      scale = pp.noise.outlier_factor;
    return std_dev * scale * gauss(*rng);
  };
  m.F_yF += draw(pp.noise.std_Fy);
  m.F_yR += draw(pp.noise.std_Fy);
  m.r += draw(pp.noise.std_r);
  return m;
}

}  // namespace

PlantState plant_equilibrium(double v0) {
  PlantState s;
  s.vs.v_x = v0;
  return s;
}

PlantStepResult plant_step(const PlantParams& pp, const PlantState& state,
                           const ControlInput& cmd, double dt, std::mt19937_64* rng) {
  if (dt <= 0.0) throw std::invalid_argument("plant_step: dt must be positive");
  const int n = std::max(1, pp.substeps);
  const double h = dt / n;

  PlantVec x = pack(state);
  for (int i = 0; i < n; ++i) x = rk4(pp, x, cmd, h);

  PlantStepResult out;
  out.next = unpack(x);

  // Snap algebraic channels when the corresponding lag is disabled.
  const bool steer_lag = pp.pacejka.steer_tau > 1e-9;
  const bool tyre_lag = pp.pacejka.relax_length > 1e-9;
  if (!steer_lag) out.next.delta_act = cmd.delta;
  {
    const VehicleState& vs = out.next.vs;
    const double alpha_f =
        std::atan((vs.v_y + pp.vehicle.l_f * vs.r) / vs.v_x) - out.next.delta_act;
    const double alpha_r = std::atan((vs.v_y - pp.vehicle.l_r * vs.r) / vs.v_x);
    if (!tyre_lag) {
      out.next.F_yF_lag = tyre_force(pp, true, alpha_f);
      out.next.F_yR_lag = tyre_force(pp, false, alpha_r);
    }
  }

  out.truth = readout(pp, out.next);
  out.measured = add_noise(pp, out.truth, rng);
  return out;
}

PlantMeasurement plant_measure(const PlantParams& pp, const PlantState& state,
                               std::mt19937_64* rng) {
  return add_noise(pp, readout(pp, state), rng);
}

}  // namespace lmpcc
