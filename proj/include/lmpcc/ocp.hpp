#pragma once

#include <Eigen/Core>
#include <vector>

#include "lmpcc/scenario.hpp"
#include "lmpcc/sqp.hpp"
#include "lmpcc/vehicle.hpp"

namespace lmpcc {

// Augmented contouring state: pose and body velocities, path progress, and
// the actuator targets integrated from the rate controls.
enum StateIndex { SX = 0, SY, SPSI, SVX, SVY, SR, SS, SDELTA, SFX };
enum InputIndex { UDDELTA = 0, UDFX, USDOT };

using ContouringSolver = SqpSolver<9, 3>;
using ContouringState = Eigen::Matrix<double, 9, 1>;
using ContouringInput = Eigen::Matrix<double, 3, 1>;

struct OCPWeights {
  double q_con = 1.0;
  double q_lag = 10.0;
  double q_vel = 0.5;
  double q_ddelta = 50.0;
  double q_dfx = 1e-6;
  double q_obs = 500.0;
  double q_edge = 200.0;
  double q_sigma_vy = 20.0;
  double q_sigma_r = 20.0;
};

struct OCPBounds {
  double delta_max = 0.52;     // |steering angle| [rad]
  double ddelta_max = 0.9;     // |steering rate| [rad/s]
  double fx_min = -20000.0;    // longitudinal force [N]
  double fx_max = 8000.0;
  double dfx_max = 30000.0;    // force rate [N/s]
  double vx_min = 3.0;         // forward speed [m/s]
  double vx_max = 40.0;
  double sdot_factor = 1.5;    // progress rate in [0, factor * v_ref]
};

// Obstacle-avoidance prioritization: below `threshold` clearance the
// obstacle/edge weights scale up and tracking scales down; the mode releases
// only above threshold + hysteresis.
struct PriorityConfig {
  double threshold = 2.0;
  double hysteresis = 0.5;
  double obstacle_gain = 5.0;
  double tracking_gain = 0.25;
};

struct OCPConfig {
  int N = 30;
  int N_prob = 20;
  double dt = 0.05;
  OCPWeights weights;
  OCPBounds bounds;
  PriorityConfig priority;
  double hinge_eps = 0.01;  // quadratic blend width of the avoidance hinges
  // Design ceilings for the propagated sigmas; validate() checks that the
  // sigma cost at these caps stays below one fully violated obstacle stage
  // under prioritization, so uncertainty can never outrank avoidance.
  double sigma_vy_cap = 1.0;
  double sigma_r_cap = 1.0;

  void validate() const;
};

struct StageCostTerms {
  double con = 0.0, lag = 0.0, vel = 0.0;
  double obs = 0.0, edge = 0.0, sigma = 0.0;
  double total() const { return con + lag + vel + obs + edge + sigma; }
};

bool priority_active(const PriorityConfig& pc, double min_clearance, bool was_active);
OCPWeights apply_priority(const OCPWeights& w, const PriorityConfig& pc, bool active);

// Piecewise hinge with a quadratic blend of width eps at activation, so the
// avoidance residuals stay differentiable: 0 for v <= 0, v^2/(2 eps) inside
// the blend, v - eps/2 beyond.
double hinge_smooth(double v, double eps);
double hinge_smooth_deriv(double v, double eps);

// One RK4 step of the augmented dynamics with the mismatch correction frozen
// over the interval; A/B receive the Jacobians of the discrete map when
// non-null. States below v_eps make the step return NaNs, which the solver
// line search rejects.
ContouringState ocp_dynamics(const ContouringState& x, const ContouringInput& u,
                             const MismatchCorrection& corr, const VehicleParams& vp,
                             const FialaParams& fp, double dt,
                             Eigen::Matrix<double, 9, 9>* A = nullptr,
                             Eigen::Matrix<double, 9, 3>* B = nullptr);

// Tracking/avoidance cost of one predicted state, as a Gauss-Newton model
// plus an optional per-term breakdown. The sigma pair enters as a constant
// (propagated outside the solver), so it shifts the value only.
void state_cost_model(const ContouringState& x, const Scenario& sc, const OCPWeights& w,
                      const VehicleParams& vp, double hinge_eps, double sigma_vy,
                      double sigma_r, double* value, Eigen::Matrix<double, 9, 1>* gx,
                      Eigen::Matrix<double, 9, 9>* Qxx, StageCostTerms* terms);

// Assembles the multiple-shooting problem for one control cycle. corr must
// hold N entries (one per shooting interval) and the sigma vectors N + 1
// (one per state stage, zero where no uncertainty cost applies). The
// scenario reference must outlive the returned problem.
ContouringSolver::Problem build_ocp(const Scenario& sc, const OCPConfig& cfg,
                                    const OCPWeights& weights, const VehicleParams& vp,
                                    const FialaParams& fp, const ContouringState& x0,
                                    const std::vector<MismatchCorrection>& corr,
                                    const std::vector<double>& sigma_vy,
                                    const std::vector<double>& sigma_r);

}  // namespace lmpcc
