#pragma once

#include <Eigen/Dense>

#include "lmpcc/tyre.hpp"
#include "lmpcc/vehicle.hpp"

namespace lmpcc {

struct StateDerivative {
  double X_dot = 0.0;
  double Y_dot = 0.0;
  double psi_dot = 0.0;
  double v_x_dot = 0.0;
  double v_y_dot = 0.0;
  double r_dot = 0.0;
};

// Single-track dynamics with Fiala tyres and additive mismatch corrections.
// F_drag = drag_coeff * v_x^2; the commanded F_x splits into front/rear by
// fx_front_ratio. The yaw-rate correction enters only the velocity coupling
// terms (r + dr) * v_y and (r + dr) * v_x.
StateDerivative nominal_derivatives(const VehicleState& state, const ControlInput& input,
                                    const MismatchCorrection& corr, const VehicleParams& vp,
                                    const FialaParams& fp);

// Classical RK4 advance of nominal_derivatives with inputs and corrections
// held constant over the step.
VehicleState rk4_step(const VehicleState& state, const ControlInput& input,
                      const MismatchCorrection& corr, const VehicleParams& vp,
                      const FialaParams& fp, double dt);

struct LateralJacobians {
  Eigen::Matrix2d A;  // d(v_y_dot, r_dot) / d(v_y, r)
  Eigen::Matrix2d B;  // d(v_y_dot, r_dot) / d(dFyF, dFyR)
};

// Analytic Jacobians of the lateral dynamics used by the covariance recursion.
LateralJacobians dynamics_jacobians(const VehicleState& state, const ControlInput& input,
                                    const MismatchCorrection& corr, const VehicleParams& vp,
                                    const FialaParams& fp);

struct FullJacobians {
  Eigen::Matrix<double, 6, 6> A;  // d f / d (X, Y, psi, v_x, v_y, r)
  Eigen::Matrix<double, 6, 2> B;  // d f / d (delta, F_x)
};

// Analytic Jacobians of the full six-state nominal model, used to linearize
// the shooting dynamics inside the OCP.
FullJacobians nominal_jacobians(const VehicleState& state, const ControlInput& input,
                                const MismatchCorrection& corr, const VehicleParams& vp,
                                const FialaParams& fp);

}  // namespace lmpcc
