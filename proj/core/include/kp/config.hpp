#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kp/control.hpp"
#include "kp/drift.hpp"
#include "kp/kernel_params.hpp"
#include "kp/quadrature.hpp"

namespace kp {

// Flat key-value configuration: one `section.key = value` per line, '#'
// comments, comma-separated lists. All module preconditions are validated at
// extraction time with ConfigError.
class ExperimentConfig {
 public:
  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<double> get_list(const std::string& key,
                               std::vector<double> fallback) const;

  // Typed sections.
  KernelParams kernel_params(ParamGrade grade = ParamGrade::kEvaluation) const;
  DriftField drift() const;
  GridSpec grid() const;
  std::optional<ControlPair> control() const;

  // Serialization for the echo; parsing the result reproduces this config.
  std::string echo() const;
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace kp
