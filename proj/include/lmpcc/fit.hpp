#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lmpcc/dataset.hpp"
#include "lmpcc/stp_model.hpp"

namespace lmpcc {

struct FitOptions {
  int restarts = 4;
  std::uint64_t seed = 0;
  int max_iters = 200;
  bool student = true;  // false fits the Gaussian marginal likelihood instead
  double nu_init = 30.0;
};

struct FitReport {
  double objective = 0.0;  // best log marginal likelihood found
  bool converged = false;  // at least one restart converged
  int best_restart = -1;
  int iterations = 0;   // iterations of the winning restart
  int em_rounds = 0;    // reweighting rounds of the student fit, 0 for gaussian
};

// Log marginal likelihood of zero-mean data under the multivariate Student-t
// model, with params packed as [log l_1 .. log l_d, log s2, log sn2,
// log(nu - 2)]. noise_scale, when given, multiplies sn2 per sample on the
// gram diagonal. Throws when the gram matrix cannot be factorized.
double stp_log_marginal(const Eigen::MatrixXd& Zn, const Eigen::VectorXd& yn,
                        const Eigen::VectorXd& params, Eigen::VectorXd* grad = nullptr,
                        const Eigen::VectorXd* noise_scale = nullptr);

// Gaussian log marginal likelihood; params packed as [log l_1 .. log l_d,
// log s2, log sn2], noise_scale as above.
double gp_log_marginal(const Eigen::MatrixXd& Zn, const Eigen::VectorXd& yn,
                       const Eigen::VectorXd& params, Eigen::VectorXd* grad = nullptr,
                       const Eigen::VectorXd* noise_scale = nullptr);

struct LbfgsResult {
  Eigen::VectorXd x;
  double f = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> accepted;  // objective after every accepted step, monotone non-increasing
};

// Limited-memory BFGS minimizer with Armijo backtracking. The callback
// returns the objective and fills the gradient; non-finite values make the
// line search back off, so a callback may signal an invalid region with
// +infinity.
LbfgsResult lbfgs_minimize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fg,
    Eigen::VectorXd x0, int max_iters);

// Fits one mismatch channel; requires at least 10 samples. The gaussian
// objective maximizes the exact log marginal likelihood over random restarts.
// The student objective wraps the same hyperparameter search in an EM loop
// over per-sample Student-t noise latents: samples whose leave-one-out
// residuals look like outliers get their noise variance scaled up, and nu
// follows the usual ECME digamma update. A single corrupted sample therefore
// stops dragging the posterior mean, which the joint multivariate-t marginal
// alone cannot achieve (its one global scale cannot isolate a bad sample, so
// maximizing it collapses onto the gaussian fit). The returned model carries
// the training data, z-score normalization, per-sample noise scales, and the
// clamped nu (in [2.1, 1000]).
STPModel fit(const MismatchDataset& data, const std::string& channel, const FitOptions& opt,
             FitReport* report = nullptr);

}  // namespace lmpcc
