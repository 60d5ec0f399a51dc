#include "lmpcc/tyre.hpp"

#include <cmath>

namespace lmpcc {

SlipAngles slip_angles(const VehicleState& state, const ControlInput& input,
                       const VehicleParams& vp) {
  if (state.v_x < vp.v_eps)
    throw std::domain_error("slip_angles: v_x below low-speed guard");
  SlipAngles sa;
  sa.alpha_f = std::atan((state.v_y + vp.l_f * state.r) / state.v_x) - input.delta;
  sa.alpha_r = std::atan((state.v_y - vp.l_r * state.r) / state.v_x);
  return sa;
}

double fiala_lateral_force(double alpha, double C_alpha, double F_z, double mu) {
  const double t = std::tan(alpha);
  const double t_sl = 3.0 * mu * F_z / C_alpha;  // tan of the sliding slip angle
  const double at = std::abs(t);
  if (at >= t_sl) {
    return (t > 0.0 ? -mu * F_z : mu * F_z);
  }
  return -C_alpha * t * (1.0 - at / t_sl + t * t / (3.0 * t_sl * t_sl));
}

double fiala_cornering_gradient(double alpha, double C_alpha, double F_z, double mu) {
  const double t = std::tan(alpha);
  const double t_sl = 3.0 * mu * F_z / C_alpha;
  const double at = std::abs(t);
  if (at >= t_sl) return 0.0;
  const double u = 1.0 - at / t_sl;
  const double sec2 = 1.0 + t * t;  // d tan(alpha) / d alpha
  return -C_alpha * u * u * sec2;
}

double pacejka_lateral_force(double alpha, const PacejkaAxle& p) {
  const double ba = p.B * alpha;
  const double arg = ba - p.E * (ba - std::atan(ba));
  return -p.D * std::sin(p.C * std::atan(arg));
}

double pacejka_cornering_gradient(double alpha, const PacejkaAxle& p) {
  const double ba = p.B * alpha;
  const double arg = ba - p.E * (ba - std::atan(ba));
  const double darg = p.B - p.E * (p.B - p.B / (1.0 + ba * ba));
  const double datan = darg / (1.0 + arg * arg);
  return -p.D * std::cos(p.C * std::atan(arg)) * p.C * datan;
}

}  // namespace lmpcc
