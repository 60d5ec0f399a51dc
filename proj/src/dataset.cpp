#include "lmpcc/dataset.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lmpcc/stp_model.hpp"
#include "lmpcc/tyre.hpp"

namespace lmpcc {

const Eigen::VectorXd& MismatchDataset::targets(const std::string& channel) const {
  if (channel == "dfyf") return dFyF;
  if (channel == "dfyr") return dFyR;
  if (channel == "dr") return dr;
  throw std::invalid_argument("dataset: unknown channel '" + channel + "'");
}

MismatchDataset build_training_set(const std::vector<RunLog>& logs) {
  if (logs.empty()) throw std::invalid_argument("dataset: no logs given");

  Eigen::Index total = 0;
  for (const auto& log : logs) total += static_cast<Eigen::Index>(log.rows.size());

  MismatchDataset data;
  data.Z.resize(total, MismatchDataset::kFeatureDim);
  data.dFyF.resize(total);
  data.dFyR.resize(total);
  data.dr.resize(total);
  data.source.reserve(total);

  // A sample pairs the conditions at the start of a control interval (the
  // previous row, whose applied input was in effect) with the mismatches
  // realized at its end. Features use the model-side force estimates rather
  // than the measured forces so that sensor glitches only ever show up in the
  // targets, which is the error the noise model is meant to absorb.
  Eigen::Index n = 0;
  for (const auto& log : logs) {
    for (std::size_t i = 1; i < log.rows.size(); ++i) {
      const LogRow& prev = log.rows[i - 1];
      const LogRow& row = log.rows[i];
      if (!std::isfinite(row.nom_r_pred)) continue;
      data.Z(n, 0) = prev.v_x;
      data.Z(n, 1) = prev.delta_cmd;
      data.Z(n, 2) = prev.Fx_cmd;
      data.Z(n, 3) = prev.r;
      data.Z(n, 4) = prev.nom_FyF + prev.corr_dFyF;
      data.Z(n, 5) = prev.nom_FyR + prev.corr_dFyR;
      data.dFyF(n) = row.meas_FyF - row.nom_FyF;
      data.dFyR(n) = row.meas_FyR - row.nom_FyR;
      data.dr(n) = row.meas_r - row.nom_r_pred;
      data.source.push_back(log.scenario_id);
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("dataset: logs contain no usable rows");
  data.Z.conservativeResize(n, Eigen::NoChange);
  data.dFyF.conservativeResize(n);
  data.dFyR.conservativeResize(n);
  data.dr.conservativeResize(n);
  if (!data.Z.allFinite() || !data.dFyF.allFinite() || !data.dFyR.allFinite() ||
      !data.dr.allFinite())
    throw std::invalid_argument("dataset: non-finite entries in logs");
  return data;
}

Eigen::VectorXd stage_features(const VehicleState& state, const ControlInput& input,
                               const MismatchCorrection& corr, const VehicleParams& vp,
                               const FialaParams& fp) {
  VehicleState st = state;
  st.v_x = std::max(st.v_x, vp.v_eps);
  const SlipAngles slip = slip_angles(st, input, vp);
  Eigen::VectorXd z(MismatchDataset::kFeatureDim);
  z << st.v_x, input.delta, input.F_x, st.r,
      fiala_lateral_force(slip.alpha_f, fp.C_alpha_f, fp.F_z_f, vp.mu) + corr.dFyF,
      fiala_lateral_force(slip.alpha_r, fp.C_alpha_r, fp.F_z_r, vp.mu) + corr.dFyR;
  return z;
}

MismatchDataset decimate(const MismatchDataset& data, Eigen::Index m_max) {
  if (m_max <= 0) throw std::invalid_argument("dataset: m_max must be positive");
  const Eigen::Index n = data.n();
  if (n <= m_max) return data;

  const Normalizer norm = Normalizer::fit(data.Z);
  Eigen::MatrixXd Zn(n, data.Z.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    Zn.row(i) = norm.apply(data.Z.row(i).transpose()).transpose();

  // Seed with the point farthest from the centroid (origin after z-scoring),
  // then repeatedly take the point farthest from the chosen set.
  std::vector<Eigen::Index> chosen;
  chosen.reserve(m_max);
  Eigen::Index seed = 0;
  Zn.rowwise().squaredNorm().maxCoeff(&seed);
  chosen.push_back(seed);

  Eigen::VectorXd dist2 = (Zn.rowwise() - Zn.row(seed)).rowwise().squaredNorm();
  while (static_cast<Eigen::Index>(chosen.size()) < m_max) {
    Eigen::Index next = 0;
    dist2.maxCoeff(&next);
    chosen.push_back(next);
    dist2 = dist2.cwiseMin((Zn.rowwise() - Zn.row(next)).rowwise().squaredNorm());
  }

  MismatchDataset out;
  out.Z.resize(m_max, data.Z.cols());
  out.dFyF.resize(m_max);
  out.dFyR.resize(m_max);
  out.dr.resize(m_max);
  out.source.reserve(m_max);
  for (Eigen::Index i = 0; i < m_max; ++i) {
    const Eigen::Index src = chosen[i];
    out.Z.row(i) = data.Z.row(src);
    out.dFyF(i) = data.dFyF(src);
    out.dFyR(i) = data.dFyR(src);
    out.dr(i) = data.dr(src);
    out.source.push_back(data.source[src]);
  }
  return out;
}

}  // namespace lmpcc
