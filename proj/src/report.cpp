#include "lmpcc/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lmpcc {

namespace {

double reduction_pct(double base, double value) {
  if (base == 0.0)
    return value == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  return 100.0 * (base - value) / base;
}

std::string num(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

CompareReport compare_report(const std::vector<RunLog>& logs, const Scenario& sc) {
  if (logs.size() < 2)
    throw std::invalid_argument("report: need at least two variants to compare");
  for (const auto& log : logs)
    if (log.scenario_id != logs.front().scenario_id)
      throw std::invalid_argument("report: logs mix scenarios '" +
                                  logs.front().scenario_id + "' and '" + log.scenario_id +
                                  "'");

  CompareReport rep;
  rep.scenario_id = logs.front().scenario_id;
  const Metrics base = compute_metrics(logs.front(), sc);
  for (const auto& log : logs) {
    CompareReport::Row row;
    row.variant = log.variant;
    row.metrics = compute_metrics(log, sc);
    row.red_rms_dFyF = reduction_pct(base.rms_dFyF, row.metrics.rms_dFyF);
    row.red_rms_dFyR = reduction_pct(base.rms_dFyR, row.metrics.rms_dFyR);
    row.red_rms_dr = reduction_pct(base.rms_dr, row.metrics.rms_dr);
    row.red_peak_beta = reduction_pct(base.peak_beta, row.metrics.peak_beta);
    rep.rows.push_back(row);
  }
  return rep;
}

std::string CompareReport::to_markdown() const {
  std::ostringstream os;
  os << "# Variant comparison on " << scenario_id << "\n\n";
  os << "| metric |";
  for (const auto& r : rows) os << " " << r.variant << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < rows.size(); ++i) os << "---|";
  os << "\n";

  auto line = [&](const std::string& name, auto getter) {
    os << "| " << name << " |";
    for (const auto& r : rows) os << " " << getter(r) << " |";
    os << "\n";
  };
  line("success", [](const Row& r) { return r.metrics.success ? "yes" : "no"; });
  line("termination", [](const Row& r) { return r.metrics.termination; });
  line("peak |beta| [rad]", [](const Row& r) { return num(r.metrics.peak_beta); });
  line("peak |v_y| [m/s]", [](const Row& r) { return num(r.metrics.peak_vy); });
  line("rms dFyF [N]", [](const Row& r) { return num(r.metrics.rms_dFyF); });
  line("rms dFyR [N]", [](const Row& r) { return num(r.metrics.rms_dFyR); });
  line("rms dr [rad/s]", [](const Row& r) { return num(r.metrics.rms_dr); });
  line("min clearance [m]", [](const Row& r) { return num(r.metrics.min_clearance); });
  line("mean v_x [m/s]", [](const Row& r) { return num(r.metrics.mean_vx); });
  const std::string vs = " vs " + rows.front().variant + " [%]";
  line("rms dFyF reduction" + vs, [](const Row& r) { return num(r.red_rms_dFyF, "%.2f"); });
  line("rms dFyR reduction" + vs, [](const Row& r) { return num(r.red_rms_dFyR, "%.2f"); });
  line("rms dr reduction" + vs, [](const Row& r) { return num(r.red_rms_dr, "%.2f"); });
  line("peak |beta| reduction" + vs,
       [](const Row& r) { return num(r.red_peak_beta, "%.2f"); });
  return os.str();
}

std::string CompareReport::to_csv() const {
  std::ostringstream os;
  os << "scenario,variant,success,termination,peak_beta,peak_vy,rms_dFyF,rms_dFyR,"
        "rms_dr,min_clearance,mean_vx,red_rms_dFyF_pct,red_rms_dFyR_pct,red_rms_dr_pct,"
        "red_peak_beta_pct\n";
  for (const auto& r : rows) {
    os << scenario_id << ',' << r.variant << ',' << (r.metrics.success ? 1 : 0) << ','
       << r.metrics.termination << ',' << num(r.metrics.peak_beta, "%.17g") << ','
       << num(r.metrics.peak_vy, "%.17g") << ',' << num(r.metrics.rms_dFyF, "%.17g") << ','
       << num(r.metrics.rms_dFyR, "%.17g") << ',' << num(r.metrics.rms_dr, "%.17g") << ','
       << num(r.metrics.min_clearance, "%.17g") << ',' << num(r.metrics.mean_vx, "%.17g")
       << ',' << num(r.red_rms_dFyF, "%.17g") << ',' << num(r.red_rms_dFyR, "%.17g") << ','
       << num(r.red_rms_dr, "%.17g") << ',' << num(r.red_peak_beta, "%.17g") << "\n";
  }
  return os.str();
}

}  // namespace lmpcc
