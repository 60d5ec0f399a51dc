#pragma once

#include <Eigen/Core>

namespace lmpcc {

// Hyperparameters of the Matern 5/2 kernel with one lengthscale per input
// dimension. noise_variance is the observation noise added on the gram
// diagonal, not part of the kernel itself.
struct KernelHyper {
  Eigen::VectorXd lengthscales;
  double signal_variance = 1.0;
  double noise_variance = 1e-4;

  void validate() const;
};

double matern52_ard(const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
                    const KernelHyper& hyper);

// n x n kernel matrix over the rows of Z plus noise_variance on the diagonal.
Eigen::MatrixXd gram(const Eigen::MatrixXd& Z, const KernelHyper& hyper);

// k(Z_i, z_star) for all rows of Z.
Eigen::VectorXd kernel_vector(const Eigen::MatrixXd& Z, const Eigen::VectorXd& z_star,
                              const KernelHyper& hyper);

// Lower Cholesky factor of a symmetric matrix, retrying with diagonal jitter
// escalating from 1e-10 to 1e-6 (relative to the mean diagonal). Throws
// std::runtime_error when the matrix stays indefinite at the largest jitter.
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& K);

// Derivative of gram(Z, hyper) with respect to log-hyperparameter j:
// j in [0, d) selects log lengthscales[j], j == d log signal_variance,
// j == d + 1 log noise_variance.
Eigen::MatrixXd gram_grad(const Eigen::MatrixXd& Z, const KernelHyper& hyper, int j);

}  // namespace lmpcc
