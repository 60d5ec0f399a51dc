#pragma once

#include "lmpcc/vehicle.hpp"

namespace lmpcc {

struct SlipAngles {
  double alpha_f = 0.0;  // front slip angle [rad]
  double alpha_r = 0.0;  // rear slip angle [rad]
};

// Kinematic slip angles of the single-track model. Throws std::domain_error
// when v_x is below the low-speed guard vp.v_eps.
SlipAngles slip_angles(const VehicleState& state, const ControlInput& input,
                       const VehicleParams& vp);

// Fiala brush-model lateral force: cubic below the sliding slip angle
// alpha_sl = atan(3 mu F_z / C_alpha), saturated at -sign(alpha) mu F_z beyond.
double fiala_lateral_force(double alpha, double C_alpha, double F_z, double mu);

// d F_y / d alpha of the Fiala model (zero in the saturated region).
double fiala_cornering_gradient(double alpha, double C_alpha, double F_z, double mu);

// Magic-formula lateral force -D sin(C atan(B a - E (B a - atan(B a)))).
double pacejka_lateral_force(double alpha, const PacejkaAxle& p);

// d F_y / d alpha of the magic formula.
double pacejka_cornering_gradient(double alpha, const PacejkaAxle& p);

}  // namespace lmpcc
