#include "lmpcc/dynamics.hpp"

#include <cmath>

namespace lmpcc {

namespace {

struct ForceDetail {
  SlipAngles sa;
  double F_yF = 0.0;   // Fiala front force plus correction [N]
  double F_yR = 0.0;   // Fiala rear force plus correction [N]
  double dFf = 0.0;    // d F_yF / d alpha_f (Fiala part only)
  double dFr = 0.0;    // d F_yR / d alpha_r
  double F_xF = 0.0;
  double F_xR = 0.0;
};

ForceDetail force_detail(const VehicleState& s, const ControlInput& u,
                         const MismatchCorrection& c, const VehicleParams& vp,
                         const FialaParams& fp) {
  ForceDetail d;
  d.sa = slip_angles(s, u, vp);
  d.F_yF = fiala_lateral_force(d.sa.alpha_f, fp.C_alpha_f, fp.F_z_f, vp.mu) + c.dFyF;
  d.F_yR = fiala_lateral_force(d.sa.alpha_r, fp.C_alpha_r, fp.F_z_r, vp.mu) + c.dFyR;
  d.dFf = fiala_cornering_gradient(d.sa.alpha_f, fp.C_alpha_f, fp.F_z_f, vp.mu);
  d.dFr = fiala_cornering_gradient(d.sa.alpha_r, fp.C_alpha_r, fp.F_z_r, vp.mu);
  d.F_xF = vp.fx_front_ratio * u.F_x;
  d.F_xR = (1.0 - vp.fx_front_ratio) * u.F_x;
  return d;
}

}  // namespace

StateDerivative nominal_derivatives(const VehicleState& s, const ControlInput& u,
                                    const MismatchCorrection& c, const VehicleParams& vp,
                                    const FialaParams& fp) {
  const ForceDetail d = force_detail(s, u, c, vp, fp);
  const double cd = std::cos(u.delta);
  const double sd = std::sin(u.delta);
  const double F_drag = vp.drag_coeff * s.v_x * s.v_x;
  const double r_eff = s.r + c.dr;

  StateDerivative out;
  out.X_dot = s.v_x * std::cos(s.psi) - s.v_y * std::sin(s.psi);
  out.Y_dot = s.v_x * std::sin(s.psi) + s.v_y * std::cos(s.psi);
  out.psi_dot = s.r;
  out.v_x_dot = (d.F_xF * cd - d.F_yF * sd + d.F_xR - F_drag) / vp.m + r_eff * s.v_y;
  out.v_y_dot = (d.F_xF * sd + d.F_yF * cd + d.F_yR) / vp.m - r_eff * s.v_x;
  out.r_dot = (d.F_yF * cd * vp.l_f - d.F_yR * vp.l_r + d.F_xF * sd * vp.l_f) / vp.I_zz;
  return out;
}

VehicleState rk4_step(const VehicleState& s, const ControlInput& u,
                      const MismatchCorrection& c, const VehicleParams& vp,
                      const FialaParams& fp, double dt) {
  if (dt < 0.0) throw std::invalid_argument("rk4_step: dt must be non-negative");
  auto add = [](const VehicleState& a, const StateDerivative& k, double h) {
    VehicleState b = a;
    b.X += h * k.X_dot;
    b.Y += h * k.Y_dot;
    b.psi += h * k.psi_dot;
    b.v_x += h * k.v_x_dot;
    b.v_y += h * k.v_y_dot;
    b.r += h * k.r_dot;
    return b;
  };
  const StateDerivative k1 = nominal_derivatives(s, u, c, vp, fp);
  const StateDerivative k2 = nominal_derivatives(add(s, k1, dt / 2.0), u, c, vp, fp);
  const StateDerivative k3 = nominal_derivatives(add(s, k2, dt / 2.0), u, c, vp, fp);
  const StateDerivative k4 = nominal_derivatives(add(s, k3, dt), u, c, vp, fp);

  VehicleState out = s;
  out.X += dt / 6.0 * (k1.X_dot + 2.0 * k2.X_dot + 2.0 * k3.X_dot + k4.X_dot);
  out.Y += dt / 6.0 * (k1.Y_dot + 2.0 * k2.Y_dot + 2.0 * k3.Y_dot + k4.Y_dot);
  out.psi += dt / 6.0 * (k1.psi_dot + 2.0 * k2.psi_dot + 2.0 * k3.psi_dot + k4.psi_dot);
  out.v_x += dt / 6.0 * (k1.v_x_dot + 2.0 * k2.v_x_dot + 2.0 * k3.v_x_dot + k4.v_x_dot);
  out.v_y += dt / 6.0 * (k1.v_y_dot + 2.0 * k2.v_y_dot + 2.0 * k3.v_y_dot + k4.v_y_dot);
  out.r += dt / 6.0 * (k1.r_dot + 2.0 * k2.r_dot + 2.0 * k3.r_dot + k4.r_dot);
  return out;
}

LateralJacobians dynamics_jacobians(const VehicleState& s, const ControlInput& u,
                                    const MismatchCorrection& c, const VehicleParams& vp,
                                    const FialaParams& fp) {
  const ForceDetail d = force_detail(s, u, c, vp, fp);
  const double cd = std::cos(u.delta);

  // Slip-angle partials. den_f = v_x^2 + (v_y + l_f r)^2 etc.
  const double wf = s.v_y + vp.l_f * s.r;
  const double wr = s.v_y - vp.l_r * s.r;
  const double den_f = s.v_x * s.v_x + wf * wf;
  const double den_r = s.v_x * s.v_x + wr * wr;
  const double daf_dvy = s.v_x / den_f;
  const double daf_dr = vp.l_f * s.v_x / den_f;
  const double dar_dvy = s.v_x / den_r;
  const double dar_dr = -vp.l_r * s.v_x / den_r;

  LateralJacobians J;
  J.A(0, 0) = (cd * d.dFf * daf_dvy + d.dFr * dar_dvy) / vp.m;
  J.A(0, 1) = (cd * d.dFf * daf_dr + d.dFr * dar_dr) / vp.m - s.v_x;
  J.A(1, 0) = (vp.l_f * cd * d.dFf * daf_dvy - vp.l_r * d.dFr * dar_dvy) / vp.I_zz;
  J.A(1, 1) = (vp.l_f * cd * d.dFf * daf_dr - vp.l_r * d.dFr * dar_dr) / vp.I_zz;

  J.B(0, 0) = cd / vp.m;
  J.B(0, 1) = 1.0 / vp.m;
  J.B(1, 0) = cd * vp.l_f / vp.I_zz;
  J.B(1, 1) = -vp.l_r / vp.I_zz;
  return J;
}

FullJacobians nominal_jacobians(const VehicleState& s, const ControlInput& u,
                                const MismatchCorrection& c, const VehicleParams& vp,
                                const FialaParams& fp) {
  const ForceDetail d = force_detail(s, u, c, vp, fp);
  const double cd = std::cos(u.delta);
  const double sd = std::sin(u.delta);
  const double cp = std::cos(s.psi);
  const double sp = std::sin(s.psi);
  const double r_eff = s.r + c.dr;

  const double wf = s.v_y + vp.l_f * s.r;
  const double wr = s.v_y - vp.l_r * s.r;
  const double den_f = s.v_x * s.v_x + wf * wf;
  const double den_r = s.v_x * s.v_x + wr * wr;
  const double daf_dvx = -wf / den_f;
  const double daf_dvy = s.v_x / den_f;
  const double daf_dr = vp.l_f * s.v_x / den_f;
  const double dar_dvx = -wr / den_r;
  const double dar_dvy = s.v_x / den_r;
  const double dar_dr = -vp.l_r * s.v_x / den_r;

  FullJacobians J;
  J.A.setZero();
  J.B.setZero();
  // Row X_dot = v_x cos(psi) - v_y sin(psi)
  J.A(0, 2) = -s.v_x * sp - s.v_y * cp;
  J.A(0, 3) = cp;
  J.A(0, 4) = -sp;
  // Row Y_dot = v_x sin(psi) + v_y cos(psi)
  J.A(1, 2) = s.v_x * cp - s.v_y * sp;
  J.A(1, 3) = sp;
  J.A(1, 4) = cp;
  // Row psi_dot = r
  J.A(2, 5) = 1.0;
  // Row v_x_dot
  J.A(3, 3) = (-sd * d.dFf * daf_dvx - 2.0 * vp.drag_coeff * s.v_x) / vp.m;
  J.A(3, 4) = (-sd * d.dFf * daf_dvy) / vp.m + r_eff;
  J.A(3, 5) = (-sd * d.dFf * daf_dr) / vp.m + s.v_y;
  // Row v_y_dot
  J.A(4, 3) = (cd * d.dFf * daf_dvx + d.dFr * dar_dvx) / vp.m - r_eff;
  J.A(4, 4) = (cd * d.dFf * daf_dvy + d.dFr * dar_dvy) / vp.m;
  J.A(4, 5) = (cd * d.dFf * daf_dr + d.dFr * dar_dr) / vp.m - s.v_x;
  // Row r_dot
  J.A(5, 3) = (vp.l_f * cd * d.dFf * daf_dvx - vp.l_r * d.dFr * dar_dvx) / vp.I_zz;
  J.A(5, 4) = (vp.l_f * cd * d.dFf * daf_dvy - vp.l_r * d.dFr * dar_dvy) / vp.I_zz;
  J.A(5, 5) = (vp.l_f * cd * d.dFf * daf_dr - vp.l_r * d.dFr * dar_dr) / vp.I_zz;

  // Input columns: delta, F_x. Slip angle alpha_f depends on delta with
  // d alpha_f / d delta = -1.
  const double rho = vp.fx_front_ratio;
  J.B(3, 0) = (-d.F_xF * sd - d.F_yF * cd + sd * d.dFf) / vp.m;
  J.B(3, 1) = (rho * cd + (1.0 - rho)) / vp.m;
  J.B(4, 0) = (d.F_xF * cd - d.F_yF * sd - cd * d.dFf) / vp.m;
  J.B(4, 1) = rho * sd / vp.m;
  J.B(5, 0) = (-d.F_yF * sd * vp.l_f - cd * vp.l_f * d.dFf + d.F_xF * cd * vp.l_f) / vp.I_zz;
  J.B(5, 1) = rho * sd * vp.l_f / vp.I_zz;
  return J;
}

}  // namespace lmpcc
