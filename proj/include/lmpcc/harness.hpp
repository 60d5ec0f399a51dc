#pragma once

#include <string>
#include <vector>

#include "lmpcc/metrics.hpp"
#include "lmpcc/run_config.hpp"
#include "lmpcc/runlog.hpp"

namespace lmpcc {

// Simulates the configured scenario until the path end, a failure, or the
// timeout. Deterministic for a fixed config and seed.
RunLog run_closed_loop(const RunConfig& cfg);

struct SweepEntry {
  double speed_kmh = 0.0;
  bool success = false;
  std::string termination;
  Metrics metrics;
  RunLog log;  // full trace, kept so callers can audit per-cycle invariants
};

struct SweepResult {
  std::string variant;
  std::vector<SweepEntry> entries;            // one per requested speed, in order
  double max_speed_kmh = 0.0;                 // highest completing speed
  bool any_success = false;                   // false leaves max_speed_kmh at 0
};

// Runs the scenario at each entry speed (ascending required) and reports the
// highest one the variant completes. Runs execute in parallel; each is
// internally sequential and seeded independently of scheduling.
SweepResult speed_sweep(const RunConfig& base, const std::string& variant,
                        const std::vector<double>& speeds_kmh);

struct TrainingRuns {
  std::vector<RunLog> train;  // lane changes at 55 and 80, priority variant at 55
  std::vector<RunLog> test;   // lane change and priority variant at 60
};

// Baseline runs against the surrogate plant that the mismatch models learn
// from, written as CSV under out_dir/train and out_dir/test. A diverging
// training run aborts generation; other failures still yield usable samples.
TrainingRuns generate_training_runs(const RunConfig& base, const std::string& out_dir);

}  // namespace lmpcc
