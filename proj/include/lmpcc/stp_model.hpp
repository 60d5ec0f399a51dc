#pragma once

#include <Eigen/Core>
#include <limits>
#include <string>

#include "lmpcc/kernel.hpp"

namespace lmpcc {

// z-score transform fitted on training data; scale entries are floored so a
// constant feature column maps to zero instead of dividing by zero.
struct Normalizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;

  Eigen::VectorXd apply(const Eigen::VectorXd& z) const;
  static Normalizer fit(const Eigen::MatrixXd& Z);
  static Normalizer identity(Eigen::Index d);
};

// Predictive distribution of one mismatch channel at a query point, in raw
// target units. dof is infinite for the plain GP posterior.
struct Posterior {
  double mean = 0.0;
  double variance = 0.0;
  double dof = std::numeric_limits<double>::infinity();
};

// A conditioned single-output regression model over one mismatch channel.
// Stores raw training data plus normalization so a reloaded model reproduces
// posteriors bit-for-bit; the gram factorization is rebuilt on load.
struct STPModel {
  std::string channel;               // dfyf | dfyr | dr
  std::string objective = "student_t";  // which marginal likelihood fitted it
  double nu = 30.0;
  KernelHyper hyper;                 // in normalized feature/target space
  Eigen::MatrixXd Z;                 // raw n x d training inputs
  Eigen::VectorXd y;                 // raw n targets
  Normalizer norm;                   // feature normalization
  double target_mean = 0.0;
  double target_scale = 1.0;
  // Per-sample multipliers on noise_variance along the gram diagonal; empty
  // means all ones. The robust fit uses these to discount samples whose
  // residuals look like outliers under the Student-t noise model.
  Eigen::VectorXd noise_scale;
  bool converged = true;

  // Derived by condition(), not serialized.
  Eigen::MatrixXd Zn;
  Eigen::VectorXd yn;
  Eigen::MatrixXd L;                 // chol(K(Zn) + noise I)
  Eigen::VectorXd alpha;             // (K + noise I)^{-1} yn
  double beta = 0.0;                 // yn' (K + noise I)^{-1} yn

  static STPModel make(std::string channel, double nu, KernelHyper hyper, Eigen::MatrixXd Z,
                       Eigen::VectorXd y, Normalizer norm, double target_mean,
                       double target_scale, Eigen::VectorXd noise_scale = {});

  Eigen::Index n() const { return y.size(); }

  // Student-t posterior: mean identical to the GP's, variance scaled by
  // (nu + beta - 2)/(nu + n - 2), dof = nu + n.
  Posterior stp_posterior(const Eigen::VectorXd& z_star) const;

  // Plain GP posterior with the same kernel, dof = infinity.
  Posterior gp_posterior(const Eigen::VectorXd& z_star) const;

  void save(const std::string& path) const;
  static STPModel load(const std::string& path);

 private:
  void condition();
};

// Variance of the moment-matched Gaussian: variance * dof/(dof - 2) for
// finite dof, identity for the GP. Throws std::domain_error for dof <= 2.
double moment_match_gaussian(const Posterior& p);

}  // namespace lmpcc
