#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lmpcc/controller.hpp"
#include "lmpcc/dataset.hpp"
#include "lmpcc/fit.hpp"
#include "lmpcc/harness.hpp"
#include "lmpcc/report.hpp"
#include "lmpcc/run_config.hpp"

namespace fs = std::filesystem;
using namespace lmpcc;

namespace {

RunConfig load_or_default(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return RunConfig::load(path);
}

// Accepts CSV paths and/or directories; directories contribute their *.csv
// files in sorted order so runs stay reproducible.
std::vector<RunLog> load_logs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(in))
        if (e.path().extension() == ".csv") found.push_back(e.path().string());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(in);
    }
  }
  if (files.empty()) throw std::invalid_argument("no log files found");
  std::vector<RunLog> logs;
  logs.reserve(files.size());
  for (const auto& f : files) logs.push_back(RunLog::load_csv(f));
  return logs;
}

void write_metrics_csv(const std::string& path, const RunLog& log, const Metrics& m) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "scenario,variant,seed,success,termination,peak_beta,peak_vy,rms_dFyF,rms_dFyR,"
        "rms_dr,min_clearance,mean_vx\n";
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%s,%llu,%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                log.scenario_id.c_str(), log.variant.c_str(),
                static_cast<unsigned long long>(log.seed), log.success ? 1 : 0,
                log.termination.c_str(), m.peak_beta, m.peak_vy, m.rms_dFyF, m.rms_dFyR,
                m.rms_dr, m.min_clearance, m.mean_vx);
  os << buf;
}

int exit_code_for(const RunLog& log) {
  if (log.success) return 0;
  if (log.termination == "divergence") return 3;
  return 2;  // collision, off_road, timeout
}

int cmd_generate_data(const std::string& config, const std::string& out) {
  RunConfig cfg = load_or_default(config);
  const TrainingRuns runs = generate_training_runs(cfg, out);
  for (const auto& log : runs.train)
    std::printf("train %-8s %-10s rows=%zu\n", log.scenario_id.c_str(),
                log.termination.c_str(), log.rows.size());
  for (const auto& log : runs.test)
    std::printf("test  %-8s %-10s rows=%zu\n", log.scenario_id.c_str(),
                log.termination.c_str(), log.rows.size());
  std::printf("logs written under %s\n", out.c_str());
  return 0;
}

int cmd_train(const std::vector<std::string>& log_inputs, const std::string& out,
              const std::string& channel, const std::string& objective, int restarts,
              std::uint64_t seed, int max_points) {
  const std::vector<RunLog> logs = load_logs(log_inputs);
  MismatchDataset data = build_training_set(logs);
  std::printf("dataset: %td samples from %zu logs\n", data.n(), logs.size());
  data = decimate(data, max_points);
  std::printf("decimated to %td inducing samples\n", data.n());

  FitOptions opt;
  opt.restarts = restarts;
  opt.seed = seed;
  opt.student = objective != "gaussian";

  fs::create_directories(out);
  const std::vector<std::string> channels =
      channel == "all" ? std::vector<std::string>{"dfyf", "dfyr", "dr"}
                       : std::vector<std::string>{channel};
  for (const auto& ch : channels) {
    FitReport rep;
    const STPModel model = fit(data, ch, opt, &rep);
    model.save(out + "/" + ch + ".json");
    std::printf("%-5s objective=%.4f nu=%.2f converged=%s restart=%d\n", ch.c_str(),
                rep.objective, model.nu, rep.converged ? "yes" : "no", rep.best_restart);
  }
  std::printf("models written under %s\n", out.c_str());
  return 0;
}

int cmd_run(const std::string& config, const std::string& variant, double speed_kmh,
            std::uint64_t seed, bool seed_set, const std::string& models,
            const std::string& out) {
  RunConfig cfg = load_or_default(config);
  if (!variant.empty()) cfg.variant = variant;
  if (speed_kmh > 0.0) cfg.entry_kmh = speed_kmh;
  if (seed_set) cfg.seed = seed;
  if (!models.empty()) cfg.models_dir = models;

  fs::create_directories(out);
  const RunLog log = run_closed_loop(cfg);
  const Scenario sc = cfg.make_scenario();
  const Metrics m = compute_metrics(log, sc);

  const std::string stem = out + "/" + log.scenario_id + "_" + log.variant;
  log.save_csv(stem + ".csv");
  write_metrics_csv(stem + "_metrics.csv", log, m);
  sc.export_centerline_csv(out + "/" + log.scenario_id + "_path.csv");

  std::printf("%s %s: %s (%.1f s, %zu ticks)\n", log.scenario_id.c_str(),
              log.variant.c_str(), log.termination.c_str(), log.rows.size() * log.dt,
              log.rows.size());
  std::printf("peak|beta|=%.4f rad  peak|v_y|=%.3f m/s  min clearance=%.3f m\n",
              m.peak_beta, m.peak_vy, m.min_clearance);
  std::printf("rms mismatch: dFyF=%.1f N  dFyR=%.1f N  dr=%.5f rad/s\n", m.rms_dFyF,
              m.rms_dFyR, m.rms_dr);
  return exit_code_for(log);
}

int cmd_sweep(const std::string& config, const std::string& variant,
              const std::vector<double>& speeds, const std::string& out) {
  RunConfig cfg = load_or_default(config);
  const std::string var = variant.empty() ? cfg.variant : variant;
  const SweepResult res = speed_sweep(cfg, var, speeds);

  fs::create_directories(out);
  std::ofstream os(out + "/sweep_" + var + ".csv");
  os << "variant,speed_kmh,success,termination,peak_beta,min_clearance,mean_vx\n";
  for (const auto& e : res.entries) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%s,%.17g,%.17g,%.17g\n", var.c_str(),
                  e.speed_kmh, e.success ? 1 : 0, e.termination.c_str(),
                  e.metrics.peak_beta, e.metrics.min_clearance, e.metrics.mean_vx);
    os << buf;
  }

  for (const auto& e : res.entries)
    std::printf("%6.1f km/h  %-10s %s\n", e.speed_kmh, e.termination.c_str(),
                e.success ? "ok" : "failed");
  if (res.any_success)
    std::printf("%s max completing speed: %.1f km/h\n", var.c_str(), res.max_speed_kmh);
  else
    std::printf("%s completed no speed in the grid\n", var.c_str());
  return 0;
}

int cmd_compare(const std::vector<std::string>& log_inputs, const std::string& config,
                const std::string& out) {
  const std::vector<RunLog> logs = load_logs(log_inputs);
  RunConfig cfg = load_or_default(config);
  const CompareReport rep = compare_report(logs, cfg.make_scenario());

  fs::create_directories(out);
  {
    std::ofstream os(out + "/compare_" + rep.scenario_id + ".md");
    os << rep.to_markdown();
  }
  {
    std::ofstream os(out + "/compare_" + rep.scenario_id + ".csv");
    os << rep.to_csv();
  }
  std::printf("%s", rep.to_markdown().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"closed-loop workbench for learning-corrected contouring control"};
  app.require_subcommand(1);

  std::string config, out = "out", variant, channel = "all", objective = "student_t";
  std::string models;
  std::vector<std::string> log_inputs;
  std::vector<double> speeds = {55.0, 57.5, 60.0, 62.5, 65.0, 67.5, 70.0, 72.5, 75.0};
  double speed_kmh = 0.0;
  std::uint64_t seed = 1;
  int restarts = 4;
  int max_points = 150;

  auto* gen = app.add_subcommand("generate-data", "run the baseline on the training and "
                                                  "test manoeuvres and save the logs");
  gen->add_option("--config", config, "run config file");
  gen->add_option("--out", out, "output directory");

  auto* train = app.add_subcommand("train-stp", "fit mismatch models from run logs");
  train->add_option("--logs", log_inputs, "log CSV files or directories")->required();
  train->add_option("--out", out, "model output directory");
  train->add_option("--channel", channel, "dfyf, dfyr, dr or all")
      ->check(CLI::IsMember({"dfyf", "dfyr", "dr", "all"}));
  train->add_option("--objective", objective, "marginal likelihood to maximize")
      ->check(CLI::IsMember({"student_t", "gaussian"}));
  train->add_option("--restarts", restarts, "random restarts per channel");
  train->add_option("--seed", seed, "restart RNG seed");
  train->add_option("--max-points", max_points, "decimation budget");

  auto* run = app.add_subcommand("run", "simulate one scenario closed loop");
  run->add_option("--config", config, "run config file");
  run->add_option("--variant", variant, "mpcc, lmpcc-gp or lmpcc-stp")
      ->check(CLI::IsMember({"mpcc", "lmpcc-gp", "lmpcc-stp"}));
  run->add_option("--speed-kmh", speed_kmh, "entry speed override");
  auto* seed_opt = run->add_option("--seed", seed, "noise seed");
  run->add_option("--models", models, "mismatch model directory");
  run->add_option("--out", out, "output directory");

  auto* sweep = app.add_subcommand("sweep", "find the highest completing entry speed");
  sweep->add_option("--config", config, "run config file");
  sweep->add_option("--variant", variant, "controller variant")
      ->check(CLI::IsMember({"mpcc", "lmpcc-gp", "lmpcc-stp"}));
  sweep->add_option("--speeds", speeds, "entry speeds in km/h, ascending");
  sweep->add_option("--out", out, "output directory");

  auto* cmp = app.add_subcommand("compare", "metric table across variant logs");
  cmp->add_option("--logs", log_inputs, "log CSV files (same scenario)")->required();
  cmp->add_option("--config", config, "run config file (for scenario geometry)");
  cmp->add_option("--out", out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate_data(config, out);
    if (train->parsed())
      return cmd_train(log_inputs, out, channel, objective, restarts, seed, max_points);
    if (run->parsed())
      return cmd_run(config, variant, speed_kmh, seed, seed_opt->count() > 0, models, out);
    if (sweep->parsed()) return cmd_sweep(config, variant, speeds, out);
    if (cmp->parsed()) return cmd_compare(log_inputs, config, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 1;
}
