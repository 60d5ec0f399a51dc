#include "lmpcc/kernel.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace lmpcc {

namespace {
constexpr double kSqrt5 = 2.2360679774997896;
}

void KernelHyper::validate() const {
  if (lengthscales.size() == 0) throw std::invalid_argument("kernel: no lengthscales");
  if ((lengthscales.array() <= 0.0).any())
    throw std::invalid_argument("kernel: lengthscales must be positive");
  if (!(signal_variance > 0.0) || !(noise_variance > 0.0))
    throw std::invalid_argument("kernel: variances must be positive");
}

double matern52_ard(const Eigen::VectorXd& z1, const Eigen::VectorXd& z2,
                    const KernelHyper& hyper) {
  const double rho = ((z1 - z2).array() / hyper.lengthscales.array()).matrix().norm();
  const double a = kSqrt5 * rho;
  return hyper.signal_variance * (1.0 + a + 5.0 * rho * rho / 3.0) * std::exp(-a);
}

Eigen::MatrixXd gram(const Eigen::MatrixXd& Z, const KernelHyper& hyper) {
  const auto n = Z.rows();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = hyper.signal_variance + hyper.noise_variance;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      K(i, j) = matern52_ard(Z.row(i), Z.row(j), hyper);
      K(j, i) = K(i, j);
    }
  }
  return K;
}

Eigen::VectorXd kernel_vector(const Eigen::MatrixXd& Z, const Eigen::VectorXd& z_star,
                              const KernelHyper& hyper) {
  Eigen::VectorXd k(Z.rows());
  for (Eigen::Index i = 0; i < Z.rows(); ++i) k(i) = matern52_ard(Z.row(i), z_star, hyper);
  return k;
}

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& K) {
  const double base = std::max(K.diagonal().mean(), 1e-300);
  for (double jitter : {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
    Eigen::MatrixXd Kj = K;
    Kj.diagonal().array() += jitter * base;
    Eigen::LLT<Eigen::MatrixXd> llt(Kj);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw std::runtime_error("kernel: gram matrix not positive definite after jitter escalation");
}

Eigen::MatrixXd gram_grad(const Eigen::MatrixXd& Z, const KernelHyper& hyper, int j) {
  const auto n = Z.rows();
  const auto d = hyper.lengthscales.size();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  if (j == d) {  // d/dlog signal_variance: the noise-free kernel values
    for (Eigen::Index i = 0; i < n; ++i) {
      G(i, i) = hyper.signal_variance;
      for (Eigen::Index k = i + 1; k < n; ++k) {
        G(i, k) = matern52_ard(Z.row(i), Z.row(k), hyper);
        G(k, i) = G(i, k);
      }
    }
    return G;
  }
  if (j == d + 1) {  // d/dlog noise_variance
    G.diagonal().setConstant(hyper.noise_variance);
    return G;
  }
  if (j < 0 || j > d + 1) throw std::invalid_argument("gram_grad: hyperparameter index");
  // d/dlog lengthscales[j]. With u = (z1 - z2)/lengthscales and rho = |u|,
  // dk/drho = -(5/3) s2 rho (1 + sqrt5 rho) exp(-sqrt5 rho) and
  // drho/dlog l_j = -u_j^2 / rho, so the 1/rho cancels and the coincident
  // limit is zero without a special case.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const Eigen::ArrayXd u = (Z.row(i) - Z.row(k)).transpose().array() /
                               hyper.lengthscales.array();
      const double rho = std::sqrt(u.square().sum());
      const double val = (5.0 / 3.0) * hyper.signal_variance * (1.0 + kSqrt5 * rho) *
                         std::exp(-kSqrt5 * rho) * u(j) * u(j);
      G(i, k) = val;
      G(k, i) = val;
    }
  }
  return G;
}

}  // namespace lmpcc
