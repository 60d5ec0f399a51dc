#pragma once

#include <string>
#include <vector>

#include "lmpcc/metrics.hpp"
#include "lmpcc/runlog.hpp"
#include "lmpcc/scenario.hpp"

namespace lmpcc {

// Side-by-side metric table over variants on one scenario. The first log is
// the baseline the percentage reductions refer to; every number derives from
// the logs alone so a stored report can be recomputed exactly.
struct CompareReport {
  struct Row {
    std::string variant;
    Metrics metrics;
    // Percentage reductions vs the baseline; NaN when the baseline value is
    // zero while the variant's is not.
    double red_rms_dFyF = 0.0;
    double red_rms_dFyR = 0.0;
    double red_rms_dr = 0.0;
    double red_peak_beta = 0.0;
  };

  std::string scenario_id;
  std::vector<Row> rows;

  std::string to_markdown() const;
  std::string to_csv() const;
};

// Requires at least two logs, all from the same scenario.
CompareReport compare_report(const std::vector<RunLog>& logs, const Scenario& sc);

}  // namespace lmpcc
