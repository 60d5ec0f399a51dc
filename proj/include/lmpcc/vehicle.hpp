#pragma once

#include <stdexcept>

namespace lmpcc {

// Planar pose plus body-frame velocities and yaw rate. The object both the
// surrogate plant and the prediction model evolve.
struct VehicleState {
  double X = 0.0;    // global position [m]
  double Y = 0.0;    // global position [m]
  double psi = 0.0;  // heading [rad]
  double v_x = 0.0;  // longitudinal velocity, body frame [m/s]
  double v_y = 0.0;  // lateral velocity, body frame [m/s]
  double r = 0.0;    // yaw rate [rad/s]
};

struct ControlInput {
  double delta = 0.0;  // road-wheel angle [rad]
  double F_x = 0.0;    // commanded total longitudinal force [N]
};

// Additive corrections to the single-track model: lateral-force offsets per
// axle and a yaw-rate offset entering the velocity coupling terms.
// A zero-valued instance reproduces the nominal model exactly.
struct MismatchCorrection {
  double dFyF = 0.0;  // front lateral-force correction [N]
  double dFyR = 0.0;  // rear lateral-force correction [N]
  double dr = 0.0;    // yaw-rate correction [rad/s]
};

struct VehicleParams {
  double m = 1500.0;           // mass [kg]
  double I_zz = 2500.0;        // yaw inertia [kg m^2]
  double l_f = 1.1;            // CoG to front axle [m]
  double l_r = 1.6;            // CoG to rear axle [m]
  double drag_coeff = 0.4;     // F_drag = drag_coeff * v_x^2 [N s^2/m^2]
  double fx_front_ratio = 0.6; // share of commanded F_x applied at the front axle
  double mu = 1.0;             // tyre-road friction
  double v_eps = 0.5;          // low-speed singularity guard [m/s]
  double width = 1.8;          // vehicle width, used by the road-edge terms [m]

  void validate() const {
    if (!(m > 0.0 && I_zz > 0.0 && l_f > 0.0 && l_r > 0.0))
      throw std::invalid_argument("VehicleParams: m, I_zz, l_f, l_r must be positive");
    if (!(fx_front_ratio >= 0.0 && fx_front_ratio <= 1.0))
      throw std::invalid_argument("VehicleParams: fx_front_ratio must be in [0,1]");
    if (!(mu > 0.0))
      throw std::invalid_argument("VehicleParams: mu must be positive");
  }
};

// Brush-type tyre parameterization for the prediction model.
struct FialaParams {
  double C_alpha_f = 80000.0;  // front cornering stiffness [N/rad]
  double C_alpha_r = 80000.0;  // rear cornering stiffness [N/rad]
  double F_z_f = 8720.0;       // static front axle load [N]
  double F_z_r = 5995.0;       // static rear axle load [N]

  void validate() const {
    if (!(C_alpha_f > 0.0 && C_alpha_r > 0.0 && F_z_f > 0.0 && F_z_r > 0.0))
      throw std::invalid_argument("FialaParams: all fields must be positive");
  }

  // Static weight split over the axles.
  static FialaParams from_static_weight(const VehicleParams& vp,
                                        double c_alpha_f = 80000.0,
                                        double c_alpha_r = 80000.0,
                                        double g = 9.81) {
    FialaParams fp;
    fp.C_alpha_f = c_alpha_f;
    fp.C_alpha_r = c_alpha_r;
    const double wheelbase = vp.l_f + vp.l_r;
    fp.F_z_f = vp.m * g * vp.l_r / wheelbase;
    fp.F_z_r = vp.m * g * vp.l_f / wheelbase;
    return fp;
  }
};

// Magic-formula shape set for one axle of the surrogate plant.
struct PacejkaAxle {
  double B = 7.0;     // stiffness factor
  double C = 1.4;     // shape factor
  double D = 8000.0;  // peak lateral force [N]
  double E = -0.3;    // curvature factor
};

struct PacejkaParams {
  // The default plant tyres are deliberately weaker than the brush model the
  // controller carries (lower cornering stiffness B*C*D and lower peaks than
  // mu * F_z per axle), so the nominal prediction is optimistic near the limit
  // and there is a real mismatch for the learning variants to pick up.
  PacejkaAxle front{5.5, 1.4, 7600.0, -0.3};
  PacejkaAxle rear{6.5, 1.4, 5300.0, -0.3};
  double relax_length = 0.6;  // tyre relaxation length [m]; <= 0 disables the lag
  double steer_tau = 0.08;    // steering-actuator time constant [s]; <= 0 disables the lag

  void validate() const {
    if (!(front.D > 0.0 && rear.D > 0.0))
      throw std::invalid_argument("PacejkaParams: D must be positive");
  }
};

}  // namespace lmpcc
