#pragma once

#include <string>

#include "kp/config.hpp"
#include "kp/report.hpp"

namespace kp {

// Command implementations behind the kp CLI. Each builds a Report from the
// configuration; writing files and exit codes are the caller's concern.
Report cmd_kernel(const ExperimentConfig& cfg);
Report cmd_series(const ExperimentConfig& cfg);
Report cmd_conditions(const ExperimentConfig& cfg);
Report cmd_partition(const ExperimentConfig& cfg);
Report cmd_scan(const ExperimentConfig& cfg);
Report cmd_verify(const ExperimentConfig& cfg);

Report run_command(const std::string& name, const ExperimentConfig& cfg);

}  // namespace kp
