#include <chrono>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kp/commands.hpp"
#include "kp/config.hpp"
#include "kp/errors.hpp"
#include "kp/log.hpp"
#include "kp/parallel.hpp"
#include "kp/report.hpp"
#include "kp/version.hpp"

namespace {

// Exit codes: 0 ok, 1 verdict failure, 2 numerical non-convergence,
// 3 configuration error.
constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitConfig = 3;

int run(const std::string& command, const std::string& config_path,
        const std::string& out_dir, unsigned threads) {
  kp::set_max_threads(threads);
  const auto start = std::chrono::steady_clock::now();
  const kp::ExperimentConfig cfg = kp::ExperimentConfig::parse_file(config_path);
  kp::Report report = kp::run_command(command, cfg);

  const std::string dir =
      !out_dir.empty() ? out_dir : cfg.get_string("output.dir", ".");
  const std::string prefix = cfg.get_string("output.prefix", "");
  const auto written = kp::write_report(report, dir, prefix);

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  kp::print_summary(report, elapsed, std::cout);
  for (const auto& path : written) std::cout << "  wrote " << path << "\n";
  return report.pass() ? kExitOk : kExitVerdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient-perturbed transition densities for mixed "
               "fractional-Laplacian kernels"};
  app.set_version_flag("--version", std::string(kp::kVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  unsigned threads = 0;
  unsigned seed = 0;  // reserved
  app.add_option("--config", config_path, "configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default: output.dir)");
  app.add_option("--threads", threads, "worker thread cap (0 = all cores)");
  app.add_option("--seed", seed, "reserved")->group("");

  for (const char* name :
       {"kernel", "series", "conditions", "partition", "scan", "verify"})
    app.add_subcommand(name);

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, config_path, out_dir, threads);
  } catch (const kp::ConfigError& e) {
    kp::log::error(e.what());
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const kp::NumericalNonConvergence& e) {
    std::cerr << "numerical non-convergence: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const kp::BoundViolation& e) {
    std::cerr << "bound violation: " << e.what() << "\n";
    return kExitVerdict;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
