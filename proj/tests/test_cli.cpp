#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "kp/commands.hpp"
#include "kp/config.hpp"
#include "kp/errors.hpp"
#include "kp/report.hpp"

using namespace kp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("kp_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(KP_BIN_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = ExperimentConfig::parse_string(
      "# comment\n"
      "kernel.alpha = 1.5\n"
      "kernel.beta = 1.2\n"
      "kernel.a = 1\n"
      "samples.y_values = -1, 0.5, 2  # inline comment\n");
  CHECK(cfg.get_double("kernel.alpha") == 1.5);
  CHECK(cfg.get_double("missing", 7.0) == 7.0);
  const auto ys = cfg.get_list("samples.y_values");
  REQUIRE(ys.size() == 3);
  CHECK(ys[1] == 0.5);
  const KernelParams p = cfg.kernel_params();
  CHECK(p.a == 1.0);

  CHECK_THROWS_AS(ExperimentConfig::parse_string("not a kv line\n"),
                  ConfigError);
  CHECK_THROWS_AS(cfg.get_double("nope"), ConfigError);
  CHECK_THROWS_AS(
      ExperimentConfig::parse_string("kernel.alpha = oops\n")
          .get_double("kernel.alpha"),
      ConfigError);
}

TEST_CASE("config echo round-trips") {
  const std::string text =
      "grid.L = 9\n"
      "kernel.a = 0\n"
      "kernel.alpha = 1.6\n";
  const auto cfg = ExperimentConfig::parse_string(text);
  const auto again = ExperimentConfig::parse_string(cfg.echo());
  CHECK(again.entries() == cfg.entries());
}

TEST_CASE("invalid parameters are rejected with ConfigError") {
  const auto bad = ExperimentConfig::parse_string("kernel.alpha = 2.5\n");
  CHECK_THROWS_AS(bad.kernel_params(), ConfigError);

  const auto bad_eta = ExperimentConfig::parse_string(
      "kernel.alpha = 1.5\n"
      "drift.family = constant\n"
      "drift.c = 0.1\n"
      "control.eta = 0.6\n"
      "control.rate = 0.1\n"
      "samples.y_values = 0.5\n"
      "grid.n_time = 8\n"
      "grid.n_space = 8\n"
      "series.order = 1\n");
  CHECK_THROWS_AS(cmd_series(bad_eta), ConfigError);
}

TEST_CASE("cmd_partition reproduces the worked example") {
  const auto cfg = ExperimentConfig::parse_string(
      "partition.s = 0\n"
      "partition.t = 2\n"
      "partition.theta = 0.4\n"
      "partition.rate = 0.5\n");
  const Report rep = cmd_partition(cfg);
  REQUIRE(rep.tables.size() == 2);
  const auto& pts = rep.tables[0];
  REQUIRE(pts.rows.size() == 4);
  CHECK(std::stod(pts.rows[1][1]) == doctest::Approx(0.8));
  CHECK(std::stod(pts.rows[2][1]) == doctest::Approx(1.6));
  CHECK(rep.tables[1].rows[0][0] == "3");  // m
  CHECK(rep.pass());
}

TEST_CASE("cmd_series with zero drift reports exact convergence") {
  const auto cfg = ExperimentConfig::parse_string(
      "kernel.alpha = 1.5\n"
      "drift.family = zero\n"
      "samples.s = 0\n"
      "samples.t = 0.5\n"
      "samples.x = 0\n"
      "samples.y_values = -0.5, 0.5\n"
      "series.order = 3\n"
      "grid.n_time = 8\n"
      "grid.n_space = 8\n"
      "grid.L = 8\n");
  const Report rep = cmd_series(cfg);
  CHECK(rep.pass());
  // All n >= 1 terms vanish.
  for (const auto& row : rep.tables[0].rows)
    if (row[1] != "0") CHECK(std::stod(row[2]) == 0.0);
}

TEST_CASE("report writing is deterministic") {
  const auto cfg = ExperimentConfig::parse_string(
      "kernel.alpha = 1.5\n"
      "kernel.beta = 1.2\n"
      "kernel.a = 1\n"
      "samples.t_values = 0.5, 1\n"
      "samples.x_values = 0, 1, 2\n");
  const fs::path d1 = temp_dir("det1");
  const fs::path d2 = temp_dir("det2");
  write_report(cmd_kernel(cfg), d1.string(), "run_");
  write_report(cmd_kernel(cfg), d2.string(), "run_");
  for (const char* name : {"run_kernel.csv", "run_report.json"}) {
    const std::string a = slurp(d1 / name);
    const std::string b = slurp(d2 / name);
    CHECK(a == b);
    CHECK(!a.empty());
  }
}

TEST_CASE("fmt17 round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-14, 1234567.89, 6.02e23}) {
    CHECK(std::stod(fmt17(v)) == v);
    CHECK(std::stod(fmt17(-v)) == -v);
  }
}

TEST_CASE("binary exit codes") {
  SUBCASE("partition run succeeds") {
    const fs::path dir = temp_dir("cli_ok");
    const int code = run_binary("partition --config " +
                                std::string(KP_CONFIG_DIR) +
                                "/partition_rate.cfg --out " + dir.string());
    CHECK(code == 0);
    CHECK(fs::exists(dir / "partition.csv"));
    CHECK(fs::exists(dir / "report.json"));
  }

  SUBCASE("malformed config exits with code 3") {
    const fs::path dir = temp_dir("cli_bad");
    const int code = run_binary("partition --config " +
                                std::string(KP_CONFIG_DIR) + "/bad.cfg --out " +
                                dir.string());
    CHECK(code == 3);
  }

  SUBCASE("missing config file exits nonzero") {
    const int code = run_binary("kernel --config /nonexistent.cfg");
    CHECK(code != 0);
  }
}

TEST_CASE("kernel command emits the full table") {
  const auto cfg = ExperimentConfig::parse_string(
      "kernel.alpha = 1.5\n"
      "samples.t_values = 1\n"
      "samples.x_values = 0, 1\n");
  const Report rep = cmd_kernel(cfg);
  REQUIRE(rep.tables.size() == 1);
  CHECK(rep.tables[0].header.size() == 6);
  CHECK(rep.tables[0].rows.size() == 2);
  // x = 0 row: gradient zero, envelope 1 at t = 1 for a = 0.
  CHECK(std::stod(rep.tables[0].rows[0][3]) == 0.0);
  CHECK(std::stod(rep.tables[0].rows[0][4]) == doctest::Approx(1.0));
}
