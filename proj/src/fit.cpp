#include "lmpcc/fit.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace lmpcc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

KernelHyper unpack_hyper(const Eigen::VectorXd& params, Eigen::Index d) {
  // Clamp the log-parameters so an irrelevant feature whose lengthscale drifts
  // towards infinity still produces a finite, serialisable hyperparameter. At
  // exp(30) the kernel already treats the feature as constant, so the clamp
  // does not change the fit.
  KernelHyper h;
  h.lengthscales = params.head(d).array().min(30.0).max(-30.0).exp();
  h.signal_variance = std::exp(std::clamp(params(d), -30.0, 30.0));
  h.noise_variance = std::exp(std::clamp(params(d + 1), -30.0, 30.0));
  return h;
}

struct GramFactors {
  Eigen::MatrixXd L;
  Eigen::VectorXd alpha;
  double logdet = 0.0;
  double beta = 0.0;
};

GramFactors factorize(const Eigen::MatrixXd& Zn, const Eigen::VectorXd& yn,
                      const KernelHyper& h, const Eigen::VectorXd* noise_scale) {
  Eigen::MatrixXd K = gram(Zn, h);
  if (noise_scale)
    K.diagonal() += h.noise_variance * (noise_scale->array() - 1.0).matrix();
  GramFactors f;
  f.L = cholesky_with_jitter(K);
  f.alpha = f.L.transpose().triangularView<Eigen::Upper>().solve(
      f.L.triangularView<Eigen::Lower>().solve(yn));
  f.logdet = 2.0 * f.L.diagonal().array().log().sum();
  f.beta = yn.dot(f.alpha);
  return f;
}

// Fills grad entries for the kernel parameters (log-lengthscales and the two
// log-variances). quad_weight multiplies alpha' dK alpha; -0.5 tr(Kinv dK)
// is common to both likelihoods.
void kernel_gradient(const Eigen::MatrixXd& Zn, const KernelHyper& h, const GramFactors& f,
                     double quad_weight, const Eigen::VectorXd* noise_scale,
                     Eigen::VectorXd& grad) {
  const Eigen::Index n = Zn.rows();
  const Eigen::Index d = Zn.cols();
  const Eigen::MatrixXd Kinv = f.L.transpose().triangularView<Eigen::Upper>().solve(
      f.L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n)));
  for (Eigen::Index j = 0; j < d + 2; ++j) {
    Eigen::MatrixXd dK = gram_grad(Zn, h, static_cast<int>(j));
    if (noise_scale && j == d + 1)
      dK.diagonal() = h.noise_variance * noise_scale->array();
    const double trace_term = Kinv.cwiseProduct(dK).sum();
    const double quad = f.alpha.dot(dK * f.alpha);
    grad(j) = quad_weight * quad - 0.5 * trace_term;
  }
}

}  // namespace

double gp_log_marginal(const Eigen::MatrixXd& Zn, const Eigen::VectorXd& yn,
                       const Eigen::VectorXd& params, Eigen::VectorXd* grad,
                       const Eigen::VectorXd* noise_scale) {
  const Eigen::Index d = Zn.cols();
  if (params.size() != d + 2) throw std::invalid_argument("gp likelihood: parameter count");
  const KernelHyper h = unpack_hyper(params, d);
  const GramFactors f = factorize(Zn, yn, h, noise_scale);
  const double n = static_cast<double>(yn.size());
  const double L = -0.5 * f.beta - 0.5 * f.logdet - 0.5 * n * std::log(2.0 * kPi);
  if (grad) {
    grad->resize(d + 2);
    kernel_gradient(Zn, h, f, 0.5, noise_scale, *grad);
  }
  return L;
}

double stp_log_marginal(const Eigen::MatrixXd& Zn, const Eigen::VectorXd& yn,
                        const Eigen::VectorXd& params, Eigen::VectorXd* grad,
                        const Eigen::VectorXd* noise_scale) {
  const Eigen::Index d = Zn.cols();
  if (params.size() != d + 3) throw std::invalid_argument("stp likelihood: parameter count");
  const KernelHyper h = unpack_hyper(params, d);
  const double nu = 2.0 + std::exp(params(d + 2));
  const GramFactors f = factorize(Zn, yn, h, noise_scale);
  const double n = static_cast<double>(yn.size());

  const double L = std::lgamma(0.5 * (nu + n)) - std::lgamma(0.5 * nu) -
                   0.5 * n * std::log((nu - 2.0) * kPi) - 0.5 * f.logdet -
                   0.5 * (nu + n) * std::log1p(f.beta / (nu - 2.0));
  if (grad) {
    grad->resize(d + 3);
    kernel_gradient(Zn, h, f, 0.5 * (nu + n) / (nu - 2.0 + f.beta), noise_scale, *grad);
    const double dL_dnu = 0.5 * boost::math::digamma(0.5 * (nu + n)) -
                          0.5 * boost::math::digamma(0.5 * nu) - 0.5 * n / (nu - 2.0) -
                          0.5 * std::log1p(f.beta / (nu - 2.0)) +
                          0.5 * (nu + n) * f.beta / ((nu - 2.0) * (nu - 2.0 + f.beta));
    (*grad)(d + 2) = dL_dnu * (nu - 2.0);  // chain rule through log(nu - 2)
  }
  return L;
}

LbfgsResult lbfgs_minimize(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& fg,
    Eigen::VectorXd x0, int max_iters) {
  constexpr int kHistory = 8;
  constexpr double kArmijo = 1e-4;

  LbfgsResult res;
  Eigen::VectorXd x = std::move(x0);
  Eigen::VectorXd g(x.size());
  double f = fg(x, g);
  if (!std::isfinite(f) || !g.allFinite()) {
    res.x = std::move(x);
    res.f = f;
    return res;
  }
  res.accepted.push_back(f);

  std::vector<Eigen::VectorXd> s_hist, y_hist;
  std::vector<double> rho_hist;

  for (int iter = 0; iter < max_iters; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < 1e-6) {
      res.converged = true;
      break;
    }

    // Two-loop recursion for the quasi-Newton direction.
    Eigen::VectorXd q = g;
    const auto hist = s_hist.size();
    std::vector<double> a(hist);
    for (size_t i = hist; i-- > 0;) {
      a[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= a[i] * y_hist[i];
    }
    const double gamma =
        hist ? s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm()
             : 1.0 / std::max(1.0, g.norm());
    q *= gamma;
    for (size_t i = 0; i < hist; ++i) {
      const double b = rho_hist[i] * y_hist[i].dot(q);
      q += (a[i] - b) * s_hist[i];
    }
    Eigen::VectorXd p = -q;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {  // fall back to steepest descent if curvature info is stale
      p = -g;
      slope = -g.squaredNorm();
    }

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new, g_new(x.size());
    double f_new = 0.0;
    for (int bt = 0; bt < 40; ++bt) {
      x_new = x + step * p;
      f_new = fg(x_new, g_new);
      if (std::isfinite(f_new) && g_new.allFinite() && f_new <= f + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd s_vec = x_new - x;
    const Eigen::VectorXd y_vec = g_new - g;
    const double sy = s_vec.dot(y_vec);
    if (sy > 1e-10 * s_vec.norm() * y_vec.norm()) {
      s_hist.push_back(s_vec);
      y_hist.push_back(y_vec);
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kHistory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
    }

    const bool stalled = std::abs(f - f_new) < 1e-12 * std::max(1.0, std::abs(f));
    x = std::move(x_new);
    f = f_new;
    g = g_new;
    res.accepted.push_back(f);
    res.iterations = iter + 1;
    if (stalled) {
      res.converged = true;
      break;
    }
  }

  res.x = std::move(x);
  res.f = f;
  return res;
}

namespace {

// ECME update of the Student-t degrees of freedom given the latent precision
// weights: solves log(nu/2) + 1 - psi(nu/2) + mean(log w - w) + psi((nu0+1)/2)
// - log((nu0+1)/2) = 0 by bisection. The left side decreases in nu; clean
// data (w near 1) pushes nu to the upper clamp, heavy residuals pull it down.
double ecme_nu_update(const Eigen::VectorXd& w, double nu0) {
  const double c = (w.array().log() - w.array()).mean() +
                   boost::math::digamma(0.5 * (nu0 + 1.0)) - std::log(0.5 * (nu0 + 1.0));
  auto f = [&](double nu) {
    return std::log(0.5 * nu) + 1.0 - boost::math::digamma(0.5 * nu) + c;
  };
  double lo = 2.1, hi = 1000.0;
  if (f(lo) <= 0.0) return lo;
  if (f(hi) >= 0.0) return hi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

STPModel fit(const MismatchDataset& data, const std::string& channel, const FitOptions& opt,
             FitReport* report) {
  if (data.n() < 10) throw std::invalid_argument("fit: need at least 10 samples");
  if (opt.restarts < 1) throw std::invalid_argument("fit: restarts must be >= 1");

  const Eigen::VectorXd& y_raw = data.targets(channel);
  const Normalizer norm = Normalizer::fit(data.Z);
  const double target_mean = y_raw.mean();
  const double target_scale =
      std::max(std::sqrt((y_raw.array() - target_mean).square().mean()), 1e-12);

  const Eigen::Index n = data.n();
  const Eigen::Index d = data.Z.cols();
  Eigen::MatrixXd Zn(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    Zn.row(i) = norm.apply(data.Z.row(i).transpose()).transpose();
  const Eigen::VectorXd yn = (y_raw.array() - target_mean) / target_scale;

  // Both objectives maximize the gaussian marginal over the kernel and noise
  // parameters; the student branch additionally reweights the per-sample
  // noise between hyperparameter passes (EM over the t noise latents).
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(n);
  auto objective = [&](const Eigen::VectorXd& params, Eigen::VectorXd& grad) -> double {
    grad.setZero(d + 2);
    try {
      const double L = gp_log_marginal(Zn, yn, params, &grad, &scale);
      grad = -grad;
      return -L;
    } catch (const std::runtime_error&) {
      return kInf;  // indefinite gram matrix; line search backs away
    }
  };

  Eigen::VectorXd base = Eigen::VectorXd::Zero(d + 2);
  base(d + 1) = std::log(1e-2);  // noise_variance start, targets are unit variance

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };

  FitReport best;
  best.objective = -kInf;
  Eigen::VectorXd best_params = base;

  for (int k = 0; k < opt.restarts; ++k) {
    Eigen::VectorXd x0 = base;
    if (k > 0) {
      for (Eigen::Index j = 0; j < d; ++j) x0(j) = uniform(-1.6, 1.6);
      x0(d) = uniform(-2.3, 1.1);
      x0(d + 1) = uniform(-9.2, -0.7);
    }
    const LbfgsResult r = lbfgs_minimize(objective, x0, opt.max_iters);
    if (std::isfinite(r.f) && -r.f > best.objective) {
      best.objective = -r.f;
      best.best_restart = k;
      best.iterations = r.iterations;
      best_params = r.x;
    }
    best.converged = best.converged || r.converged;
  }
  if (best.best_restart < 0)
    throw std::runtime_error("fit: every restart failed at its starting point");

  double nu = 1000.0;
  if (opt.student) {
    // EM refinement: score each sample by its leave-one-out residual under
    // the current fit, turn the scores into t noise latents, refit the
    // hyperparameters against the reweighted diagonal, and update nu. The
    // latents converge in a handful of rounds; outliers end up with a large
    // noise multiplier and lose their grip on the posterior mean.
    constexpr int kMaxRounds = 10;
    nu = std::clamp(opt.nu_init, 2.1, 1000.0);
    for (int round = 0; round < kMaxRounds; ++round) {
      const KernelHyper h = unpack_hyper(best_params, d);
      Eigen::MatrixXd K = gram(Zn, h);
      K.diagonal() += h.noise_variance * (scale.array() - 1.0).matrix();
      const Eigen::MatrixXd L = cholesky_with_jitter(K);
      const Eigen::MatrixXd Kinv = L.transpose().triangularView<Eigen::Upper>().solve(
          L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n)));
      const Eigen::VectorXd alpha = Kinv * yn;

      Eigen::VectorXd w(n), next_scale(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double e_loo = alpha(i) / Kinv(i, i);
        const double u2 = e_loo * e_loo / h.noise_variance;
        w(i) = (nu + 1.0) / (nu + u2);
        next_scale(i) = std::clamp(1.0 / w(i), 0.5, 1e8);
      }
      const double nu_next = ecme_nu_update(w, nu);
      const double move = (next_scale - scale).lpNorm<Eigen::Infinity>();
      scale = next_scale;
      nu = nu_next;
      best.em_rounds = round + 1;

      const LbfgsResult r = lbfgs_minimize(objective, best_params, opt.max_iters);
      if (std::isfinite(r.f)) {
        best.objective = -r.f;
        best.iterations = r.iterations;
        best_params = r.x;
        best.converged = r.converged;
      }
      if (move < 1e-3 && round > 0) break;
    }
  }

  KernelHyper hyper = unpack_hyper(best_params, d);
  Eigen::VectorXd model_scale;
  if (opt.student && (scale.array() != 1.0).any()) model_scale = scale;

  STPModel model = STPModel::make(channel, nu, hyper, data.Z, y_raw, norm, target_mean,
                                  target_scale, std::move(model_scale));
  model.objective = opt.student ? "student_t" : "gaussian";
  model.converged = best.converged;
  if (report) *report = best;
  return model;
}

}  // namespace lmpcc
