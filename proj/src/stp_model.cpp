#include "lmpcc/stp_model.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace lmpcc {

Eigen::VectorXd Normalizer::apply(const Eigen::VectorXd& z) const {
  return ((z - mean).array() / scale.array()).matrix();
}

Normalizer Normalizer::fit(const Eigen::MatrixXd& Z) {
  Normalizer out;
  out.mean = Z.colwise().mean();
  const Eigen::ArrayXd var =
      (Z.rowwise() - out.mean.transpose()).array().square().colwise().mean();
  out.scale = var.sqrt().max(1e-12).matrix();
  return out;
}

Normalizer Normalizer::identity(Eigen::Index d) {
  Normalizer out;
  out.mean = Eigen::VectorXd::Zero(d);
  out.scale = Eigen::VectorXd::Ones(d);
  return out;
}

STPModel STPModel::make(std::string channel, double nu, KernelHyper hyper, Eigen::MatrixXd Z,
                        Eigen::VectorXd y, Normalizer norm, double target_mean,
                        double target_scale, Eigen::VectorXd noise_scale) {
  if (Z.rows() != y.size() || Z.rows() == 0)
    throw std::invalid_argument("stp: inputs and targets must have matching non-zero rows");
  if (!(nu > 2.0)) throw std::invalid_argument("stp: nu must exceed 2");
  if (!(target_scale > 0.0)) throw std::invalid_argument("stp: target scale must be positive");
  hyper.validate();
  if (hyper.lengthscales.size() != Z.cols())
    throw std::invalid_argument("stp: lengthscale count must match feature dimension");
  if (noise_scale.size() != 0) {
    if (noise_scale.size() != y.size())
      throw std::invalid_argument("stp: noise scales must match sample count");
    if (!(noise_scale.array() > 0.0).all())
      throw std::invalid_argument("stp: noise scales must be positive");
  }

  STPModel m;
  m.channel = std::move(channel);
  m.nu = nu;
  m.hyper = std::move(hyper);
  m.Z = std::move(Z);
  m.y = std::move(y);
  m.norm = std::move(norm);
  m.target_mean = target_mean;
  m.target_scale = target_scale;
  m.noise_scale = std::move(noise_scale);
  m.condition();
  return m;
}

void STPModel::condition() {
  Zn.resize(Z.rows(), Z.cols());
  for (Eigen::Index i = 0; i < Z.rows(); ++i)
    Zn.row(i) = norm.apply(Z.row(i).transpose()).transpose();
  yn = (y.array() - target_mean) / target_scale;
  Eigen::MatrixXd K = gram(Zn, hyper);
  if (noise_scale.size() != 0)
    K.diagonal() += hyper.noise_variance * (noise_scale.array() - 1.0).matrix();
  L = cholesky_with_jitter(K);
  alpha = L.transpose().triangularView<Eigen::Upper>().solve(
      L.triangularView<Eigen::Lower>().solve(yn));
  beta = yn.dot(alpha);
}

Posterior STPModel::gp_posterior(const Eigen::VectorXd& z_star) const {
  const Eigen::VectorXd zn = norm.apply(z_star);
  const Eigen::VectorXd k = kernel_vector(Zn, zn, hyper);
  const Eigen::VectorXd v = L.triangularView<Eigen::Lower>().solve(k);
  Posterior p;
  p.mean = target_mean + target_scale * k.dot(alpha);
  p.variance = std::max(0.0, hyper.signal_variance - v.squaredNorm()) * target_scale *
               target_scale;
  return p;
}

Posterior STPModel::stp_posterior(const Eigen::VectorXd& z_star) const {
  Posterior p = gp_posterior(z_star);
  p.variance *= (nu + beta - 2.0) / (nu + static_cast<double>(n()) - 2.0);
  p.dof = nu + static_cast<double>(n());
  return p;
}

double moment_match_gaussian(const Posterior& p) {
  if (std::isinf(p.dof)) return p.variance;
  if (!(p.dof > 2.0)) throw std::domain_error("moment match: dof must exceed 2");
  return p.variance * p.dof / (p.dof - 2.0);
}

namespace {

nlohmann::json to_json_vec(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd from_json_vec(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

}  // namespace

void STPModel::save(const std::string& path) const {
  nlohmann::json j;
  j["format"] = "mismatch-model-v1";
  j["channel"] = channel;
  j["objective"] = objective;
  j["nu"] = nu;
  j["lengthscales"] = to_json_vec(hyper.lengthscales);
  j["signal_variance"] = hyper.signal_variance;
  j["noise_variance"] = hyper.noise_variance;
  j["feature_mean"] = to_json_vec(norm.mean);
  j["feature_scale"] = to_json_vec(norm.scale);
  j["target_mean"] = target_mean;
  j["target_scale"] = target_scale;
  j["converged"] = converged;
  if (noise_scale.size() != 0) j["noise_scale"] = to_json_vec(noise_scale);
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < Z.rows(); ++i) rows.push_back(to_json_vec(Z.row(i).transpose()));
  j["inputs"] = rows;
  j["targets"] = to_json_vec(y);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("stp: cannot write " + path);
  out << j.dump(1) << "\n";
}

STPModel STPModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("stp: cannot open " + path);
  nlohmann::json j;
  in >> j;
  if (j.value("format", "") != "mismatch-model-v1")
    throw std::runtime_error("stp: unsupported model format in " + path);

  KernelHyper hyper;
  hyper.lengthscales = from_json_vec(j["lengthscales"]);
  hyper.signal_variance = j["signal_variance"].get<double>();
  hyper.noise_variance = j["noise_variance"].get<double>();

  const auto& rows = j["inputs"];
  Eigen::MatrixXd Z(rows.size(), hyper.lengthscales.size());
  for (size_t i = 0; i < rows.size(); ++i)
    Z.row(static_cast<Eigen::Index>(i)) = from_json_vec(rows[i]).transpose();

  Normalizer norm;
  norm.mean = from_json_vec(j["feature_mean"]);
  norm.scale = from_json_vec(j["feature_scale"]);

  Eigen::VectorXd noise_scale;
  if (j.contains("noise_scale")) noise_scale = from_json_vec(j["noise_scale"]);

  STPModel m = make(j["channel"].get<std::string>(), j["nu"].get<double>(), hyper, Z,
                    from_json_vec(j["targets"]), norm, j["target_mean"].get<double>(),
                    j["target_scale"].get<double>(), std::move(noise_scale));
  m.objective = j.value("objective", "student_t");
  m.converged = j.value("converged", true);
  return m;
}

}  // namespace lmpcc
