#include "lmpcc/runlog.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lmpcc {

std::string RunLog::csv_header() {
  std::string h =
      "t,X,Y,psi,v_x,v_y,r,s_proj,delta_cmd,Fx_cmd,delta_act,"
      "meas_FyF,meas_FyR,meas_r,true_FyF,true_FyR,nom_FyF,nom_FyR,"
      "nom_r_pred,corr_r_pred,corr_dFyF,corr_dFyR,corr_dr";
  for (int k : kSigmaLogStages) h += ",sigma_vy_" + std::to_string(k);
  for (int k : kSigmaLogStages) h += ",sigma_r_" + std::to_string(k);
  h += ",cost_total,cost_con,cost_lag,cost_vel,cost_obs,cost_edge,cost_rate,cost_sigma,"
       "sigma_cost_ceiling,clearance,e_con,e_lag,priority_mode,solver_status,"
       "solver_iterations,solver_kkt,solve_ms";
  return h;
}

namespace {

void put(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g,", v);
  line += buf;
}

void put(std::string& line, int v) {
  line += std::to_string(v);
  line += ',';
}

class FieldReader {
 public:
  explicit FieldReader(const std::string& line) : in_(line) {}
  double next_double() { return std::stod(next()); }
  int next_int() { return std::stoi(next()); }

 private:
  std::string next() {
    std::string f;
    if (!std::getline(in_, f, ',')) throw std::runtime_error("run log: truncated row");
    return f;
  }
  std::istringstream in_;
};

}  // namespace

void RunLog::save_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("run log: cannot write " + path);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", dt);
  out << "# schema = " << kSchemaVersion << "\n";
  out << "# scenario = " << scenario_id << "\n";
  out << "# variant = " << variant << "\n";
  out << "# seed = " << seed << "\n";
  out << "# dt = " << buf << "\n";
  out << "# termination = " << termination << "\n";
  out << "# success = " << (success ? 1 : 0) << "\n";
  out << csv_header() << "\n";
  for (const auto& row : rows) {
    std::string line;
    line.reserve(1024);
    put(line, row.t);
    put(line, row.X);
    put(line, row.Y);
    put(line, row.psi);
    put(line, row.v_x);
    put(line, row.v_y);
    put(line, row.r);
    put(line, row.s_proj);
    put(line, row.delta_cmd);
    put(line, row.Fx_cmd);
    put(line, row.delta_act);
    put(line, row.meas_FyF);
    put(line, row.meas_FyR);
    put(line, row.meas_r);
    put(line, row.true_FyF);
    put(line, row.true_FyR);
    put(line, row.nom_FyF);
    put(line, row.nom_FyR);
    put(line, row.nom_r_pred);
    put(line, row.corr_r_pred);
    put(line, row.corr_dFyF);
    put(line, row.corr_dFyR);
    put(line, row.corr_dr);
    for (double v : row.sigma_vy) put(line, v);
    for (double v : row.sigma_r) put(line, v);
    put(line, row.cost_total);
    put(line, row.cost_con);
    put(line, row.cost_lag);
    put(line, row.cost_vel);
    put(line, row.cost_obs);
    put(line, row.cost_edge);
    put(line, row.cost_rate);
    put(line, row.cost_sigma);
    put(line, row.sigma_cost_ceiling);
    put(line, row.clearance);
    put(line, row.e_con);
    put(line, row.e_lag);
    put(line, row.priority_mode);
    put(line, row.solver_status);
    put(line, row.solver_iterations);
    put(line, row.solver_kkt);
    put(line, row.solve_ms);
    line.back() = '\n';
    out << line;
  }
}

RunLog RunLog::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("run log: cannot open " + path);
  RunLog log;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t#");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
      };
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key == "schema" && std::stoi(value) != kSchemaVersion)
        throw std::runtime_error("run log: unsupported schema in " + path);
      if (key == "scenario") log.scenario_id = value;
      if (key == "variant") log.variant = value;
      if (key == "seed") log.seed = std::stoull(value);
      if (key == "dt") log.dt = std::stod(value);
      if (key == "termination") log.termination = value;
      if (key == "success") log.success = value == "1";
      continue;
    }
    if (!have_header) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line != csv_header())
        throw std::runtime_error("run log: column schema mismatch in " + path);
      have_header = true;
      continue;
    }
    FieldReader f(line);
    LogRow row;
    row.t = f.next_double();
    row.X = f.next_double();
    row.Y = f.next_double();
    row.psi = f.next_double();
    row.v_x = f.next_double();
    row.v_y = f.next_double();
    row.r = f.next_double();
    row.s_proj = f.next_double();
    row.delta_cmd = f.next_double();
    row.Fx_cmd = f.next_double();
    row.delta_act = f.next_double();
    row.meas_FyF = f.next_double();
    row.meas_FyR = f.next_double();
    row.meas_r = f.next_double();
    row.true_FyF = f.next_double();
    row.true_FyR = f.next_double();
    row.nom_FyF = f.next_double();
    row.nom_FyR = f.next_double();
    row.nom_r_pred = f.next_double();
    row.corr_r_pred = f.next_double();
    row.corr_dFyF = f.next_double();
    row.corr_dFyR = f.next_double();
    row.corr_dr = f.next_double();
    for (double& v : row.sigma_vy) v = f.next_double();
    for (double& v : row.sigma_r) v = f.next_double();
    row.cost_total = f.next_double();
    row.cost_con = f.next_double();
    row.cost_lag = f.next_double();
    row.cost_vel = f.next_double();
    row.cost_obs = f.next_double();
    row.cost_edge = f.next_double();
    row.cost_rate = f.next_double();
    row.cost_sigma = f.next_double();
    row.sigma_cost_ceiling = f.next_double();
    row.clearance = f.next_double();
    row.e_con = f.next_double();
    row.e_lag = f.next_double();
    row.priority_mode = f.next_int();
    row.solver_status = f.next_int();
    row.solver_iterations = f.next_int();
    row.solver_kkt = f.next_double();
    row.solve_ms = f.next_double();
    log.rows.push_back(row);
  }
  if (!have_header) throw std::runtime_error("run log: no header in " + path);
  return log;
}

}  // namespace lmpcc
