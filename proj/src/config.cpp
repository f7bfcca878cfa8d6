#include "lrnn/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lrnn/errors.hpp"

namespace lrnn::config {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v) {
  std::size_t used = 0;
  const double x = std::stod(v, &used);
  if (used != v.size()) throw InvalidConfig("bad numeric value: " + v);
  return x;
}

int to_int(const std::string& v) {
  std::size_t used = 0;
  const int x = std::stoi(v, &used);
  if (used != v.size()) throw InvalidConfig("bad integer value: " + v);
  return x;
}

bool to_switch(const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw InvalidConfig("expected on/off: " + v);
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::string norm = text;
  std::replace(norm.begin(), norm.end(), ':', ',');
  std::stringstream ss(norm);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(to_double(item));
  }
  if (out.empty()) throw InvalidConfig("empty number list: " + text);
  return out;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "example") cfg.example = to_int(value);
  else if (key == "dim") cfg.dim = to_int(value);
  else if (key == "m") cfg.m = to_int(value);
  else if (key == "trials") cfg.trials = to_int(value);
  else if (key == "form") cfg.form = value;
  else if (key == "seed" || key == "sampling.seed") {
    cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
  } else if (key == "sampling.N" || key == "n_points") {
    cfg.n_points = to_int(value);
  } else if (key == "sampling.ratios" || key == "ratios") {
    cfg.ratios = parse_number_list(value);
  } else if (key == "sampling.interface") {
    if (value == "arclength") cfg.arclength_interface = true;
    else if (value == "parameter") cfg.arclength_interface = false;
    else throw InvalidConfig("sampling.interface must be parameter or arclength");
  } else if (key == "beta") {
    cfg.beta = parse_number_list(value);
  } else if (key == "r1") cfg.r1 = to_double(value);
  else if (key == "r2") cfg.r2 = to_double(value);
  else if (key == "r3") cfg.r3 = to_double(value);
  else if (key == "r4") cfg.r4 = to_double(value);
  else if (key == "gamma") {
    const double g = to_double(value);
    cfg.gamma = assembly::BlockWeights{g, g, g, g};
  } else if (key == "gamma.jump") cfg.gamma.jump = to_double(value);
  else if (key == "gamma.flux") cfg.gamma.flux_jump = to_double(value);
  else if (key == "gamma.dirichlet") cfg.gamma.dirichlet = to_double(value);
  else if (key == "gamma.initial") cfg.gamma.initial = to_double(value);
  else if (key == "fd.h1") cfg.fd.h1 = to_double(value);
  else if (key == "fd.h2") cfg.fd.h2 = to_double(value);
  else if (key == "solver.method" || key == "solver") {
    if (value == "svd") cfg.solver.method = linsolve::Method::Svd;
    else if (value == "qr") cfg.solver.method = linsolve::Method::Qr;
    else if (value == "normal") cfg.solver.method = linsolve::Method::Normal;
    else throw InvalidConfig("solver.method must be svd, qr or normal");
  } else if (key == "solver.rcond") cfg.solver.rcond = to_double(value);
  else if (key == "assembly.flux_beta") cfg.flux_includes_beta = to_switch(value);
  else if (key == "error.rule") {
    if (value != "gl" && value != "mc") {
      throw InvalidConfig("error.rule must be gl or mc");
    }
    cfg.error_rule = value;
  } else if (key == "error.nodes") cfg.error_nodes = to_int(value);
  else if (key == "error.mc_samples") cfg.mc_samples = to_int(value);
  else if (key == "dump.system") cfg.dump_system = value;
  else if (key == "out") cfg.out_dir = value;
  else if (key == "grid.resolution") cfg.grid_resolution = to_int(value);
  else if (key == "report.residuals") cfg.report_residuals = to_switch(value);
  else if (key == "parallel.trials") cfg.parallel_trials = to_switch(value);
  else throw InvalidConfig("unknown config key: " + key);
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfig("config line " + std::to_string(lineno) +
                          " is not key=value");
    }
    set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

}  // namespace lrnn::config
