#include "kp/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kp/errors.hpp"
#include "kp/kernel.hpp"

namespace kp {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw ConfigError("config: key '" + key + "' has non-numeric value '" + v +
                      "'");
  return d;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: empty key on line " + std::to_string(lineno));
    cfg.kv_[key] = value;
  }
  return cfg;
}

bool ExperimentConfig::has(const std::string& key) const {
  return kv_.count(key) > 0;
}

std::string ExperimentConfig::get_string(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end())
    throw ConfigError("config: missing required key '" + key + "'");
  return it->second;
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key) const {
  return to_double(key, get_string(key));
}

double ExperimentConfig::get_double(const std::string& key,
                                    double fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : to_double(key, it->second);
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return static_cast<int>(to_double(key, it->second));
}

std::vector<double> ExperimentConfig::get_list(const std::string& key) const {
  const std::string raw = get_string(key);
  std::vector<double> out;
  std::istringstream in(raw);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_double(key, item));
  }
  if (out.empty())
    throw ConfigError("config: key '" + key + "' holds an empty list");
  return out;
}

std::vector<double> ExperimentConfig::get_list(
    const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  return get_list(key);
}

KernelParams ExperimentConfig::kernel_params(ParamGrade grade) const {
  KernelParams p;
  p.alpha = get_double("kernel.alpha", 1.5);
  p.beta_index = get_double("kernel.beta", 1.2);
  p.a = get_double("kernel.a", 0.0);
  p.dim = get_int("kernel.dim", 1);
  try {
    p.validate(grade);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid kernel parameters: ") +
                      e.what());
  }
  return p;
}

DriftField ExperimentConfig::drift() const {
  const std::string family = get_string("drift.family", "zero");
  if (family == "zero") return DriftField::zero();
  if (family == "constant")
    return DriftField::constant(get_double("drift.c"));
  const KernelParams p = kernel_params();
  if (family == "power_law") {
    const double eps = get_double("drift.epsilon");
    if (p.a > 0.0 && !(eps < p.alpha - p.beta_index))
      throw ConfigError(
          "config: drift.epsilon must be below alpha - beta when a > 0");
    return DriftField::power_law(p.alpha, eps);
  }
  if (family == "kernel_power") {
    KernelOptions ko;
    ko.fast = true;
    auto k = std::make_shared<MixedStableKernel>(p, ko);
    return DriftField::kernel_power(k, p.alpha, p.dim);
  }
  if (family == "tabulated") {
    return DriftField::tabulated(get_list("drift.u_nodes"),
                                 get_list("drift.z_nodes"),
                                 get_list("drift.values"));
  }
  throw ConfigError("config: unknown drift.family '" + family + "'");
}

GridSpec ExperimentConfig::grid() const {
  GridSpec g;
  g.n_time = get_int("grid.n_time", g.n_time);
  g.n_space = get_int("grid.n_space", g.n_space);
  g.L = get_double("grid.L", g.L);
  g.grading_exponent = get_double("grid.grading", g.grading_exponent);
  g.tol = get_double("grid.tol", g.tol);
  g.max_refine = get_int("grid.max_refine", g.max_refine);
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid grid: ") + e.what());
  }
  return g;
}

std::optional<ControlPair> ExperimentConfig::control() const {
  if (!has("control.eta")) return std::nullopt;
  const double eta = get_double("control.eta");
  if (eta < 0.0) throw ConfigError("config: control.eta must be >= 0");
  if (has("control.f_nodes")) {
    return ControlPair::tabulated_form(eta, get_list("control.f_nodes"),
                                       get_list("control.f_values"));
  }
  return ControlPair::rate_form(eta, get_double("control.rate", 0.0));
}

std::string ExperimentConfig::echo() const {
  std::ostringstream os;
  for (const auto& [k, v] : kv_) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace kp
