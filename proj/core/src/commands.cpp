#include "kp/commands.hpp"

#include <cmath>
#include <sstream>

#include "kp/acceptance.hpp"
#include "kp/bounds.hpp"
#include "kp/conditions.hpp"
#include "kp/errors.hpp"
#include "kp/scans.hpp"
#include "kp/series.hpp"
#include "kp/version.hpp"

namespace kp {

namespace {

Report make_report(const std::string& command, const ExperimentConfig& cfg) {
  Report rep;
  rep.command = command;
  rep.version = kVersion;
  rep.config_echo = cfg.entries();
  return rep;
}

}  // namespace

Report cmd_kernel(const ExperimentConfig& cfg) {
  Report rep = make_report("kernel", cfg);
  const KernelParams params = cfg.kernel_params();
  KernelOptions ko;
  ko.fast = true;
  MixedStableKernel kernel(params, ko);

  const auto ts = cfg.get_list("samples.t_values", {0.25, 0.5, 1.0, 2.0});
  const auto xs = cfg.get_list("samples.x_values",
                               {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0});
  CsvTable table;
  table.name = "kernel";
  table.header = {"t", "x", "density", "gradient", "envelope", "hat"};
  for (double t : ts)
    for (double x : xs) {
      const double r = std::abs(x);
      std::string grad;
      if (params.dim == 1) grad = fmt17(kernel.gradient_signed(t, x));
      table.add_row({fmt17(t), fmt17(x), fmt17(kernel.density(t, r)), grad,
                     fmt17(kernel.envelope(t, r)), fmt17(kernel.hat(t, r))});
    }
  rep.tables.push_back(std::move(table));
  return rep;
}

Report cmd_series(const ExperimentConfig& cfg) {
  Report rep = make_report("series", cfg);
  const KernelParams params = cfg.kernel_params(ParamGrade::kPerturbation);
  const DriftField drift = cfg.drift();
  const GridSpec grid = cfg.grid();
  const double s = cfg.get_double("samples.s", 0.0);
  const double t = cfg.get_double("samples.t", 0.5);
  const double x = cfg.get_double("samples.x", 0.0);
  const auto ys = cfg.get_list("samples.y_values", {-1.0, -0.5, 0.0, 0.5, 1.0});
  const int N = cfg.get_int("series.order", 8);
  SeriesOptions sopts;
  sopts.early_stop = cfg.get_int("series.early_stop", 1) != 0;

  const auto control = cfg.control();
  if (control && control->eta() >= 0.5)
    throw ConfigError(
        "control.eta = " + std::to_string(control->eta()) +
        " but the two-sided density bounds require eta < 1/2");

  SeriesEngine engine(params, drift, grid, s, x, t);

  CsvTable terms;
  terms.name = "series_terms";
  terms.header = {"y", "n", "term", "partial_sum"};
  CsvTable summary;
  summary.name = "series_summary";
  summary.header = {"y", "sum", "tail_ratio", "tail_estimate", "converged"};

  std::vector<BoundSample> bound_samples;
  bool all_converged = true;
  for (double y : ys) {
    const SeriesResult res = engine.sum_at(N, y, sopts);
    for (std::size_t n = 0; n < res.terms.size(); ++n)
      terms.add_row({fmt17(y), std::to_string(n), fmt17(res.terms[n]),
                     fmt17(res.partial_sums[n])});
    summary.add_row({fmt17(y), fmt17(res.sum()), fmt17(res.tail_ratio),
                     fmt17(res.tail_estimate), res.converged ? "1" : "0"});
    all_converged = all_converged && res.converged;
    if (control) {
      BoundSample b;
      b.s = s;
      b.x = x;
      b.t = t;
      b.y = y;
      b.perturbed = res.sum();
      b.base = engine.kernel().density(t - s, std::abs(y - x));
      bound_samples.push_back(b);
    }
  }
  rep.tables.push_back(std::move(terms));
  rep.tables.push_back(std::move(summary));
  rep.verdicts.push_back({"series_converged", all_converged, ""});

  if (control) {
    const std::string mode_str = cfg.get_string("control.mode", "N");
    const BoundMode mode =
        mode_str == "P" ? BoundMode::kClassP : BoundMode::kClassN;
    const double q = control->Q(s, t);
    try {
      verify_bounds(bound_samples, control->eta(), q, mode, t - s, grid.tol);
      rep.verdicts.push_back({"density_bounds", true, ""});
    } catch (const BoundViolation& e) {
      rep.verdicts.push_back({"density_bounds", false, e.what()});
    }
  }
  return rep;
}

Report cmd_conditions(const ExperimentConfig& cfg) {
  Report rep = make_report("conditions", cfg);
  const KernelParams params = cfg.kernel_params(ParamGrade::kPerturbation);
  const DriftField drift = cfg.drift();
  const GridSpec grid = cfg.grid();
  ConditionsEngine engine(params, drift, grid);

  SampleSet samples = SampleSet::default_grid();
  if (cfg.has("samples.x_values") && cfg.has("samples.y_values")) {
    samples.pairs.clear();
    for (double x : cfg.get_list("samples.x_values"))
      for (double y : cfg.get_list("samples.y_values"))
        samples.pairs.emplace_back(x, y);
  }
  const double horizon = cfg.get_double("samples.t", 0.5);

  CsvTable kato;
  kato.name = "kato_functional";
  kato.header = {"x", "y", "t", "value"};
  for (const auto& [x, y] : samples.pairs)
    kato.add_row({fmt17(x), fmt17(y), fmt17(horizon),
                  fmt17(engine.kato_functional(0.0, x, horizon, y))});
  rep.tables.push_back(std::move(kato));

  const double eta = cfg.get_double("control.eta", 0.25);
  const auto est = engine.estimate_class_P(eta, samples);
  CsvTable cls;
  cls.name = "class_p";
  cls.header = {"eta", "h", "found", "unbounded", "measured", "rate"};
  cls.add_row({fmt17(eta), fmt17(est.h), est.found ? "1" : "0",
               est.unbounded ? "1" : "0", fmt17(est.measured),
               est.found && est.h > 0.0 ? fmt17(eta / est.h) : ""});
  rep.tables.push_back(std::move(cls));
  rep.verdicts.push_back({"class_p_found", est.found,
                          est.unbounded ? "functional stayed below eta on the "
                                          "whole probe bracket"
                                        : ""});

  CsvTable split;
  split.name = "split_bound";
  split.header = {"x", "y", "t", "split", "kato", "ratio"};
  for (const auto& [x, y] : samples.pairs) {
    const auto sb = engine.split_bound(0.0, x, horizon, y);
    split.add_row({fmt17(x), fmt17(y), fmt17(horizon), fmt17(sb.value),
                   fmt17(sb.kato), fmt17(sb.ratio)});
  }
  rep.tables.push_back(std::move(split));

  if (drift.space_only() && !drift.is_zero()) {
    CsvTable ind;
    ind.name = "kato_indicator";
    ind.header = {"gamma", "epsilon", "value", "decays"};
    const std::vector<double> probes = {0.0, 0.25, 0.5, 1.0, 2.0};
    for (double gamma : {params.alpha, params.beta_index}) {
      if (!(gamma > 1.0)) continue;
      const KatoIndicator ki = kato_class_indicator(drift, gamma, probes);
      for (std::size_t i = 0; i < ki.epsilons.size(); ++i)
        ind.add_row({fmt17(gamma), fmt17(ki.epsilons[i]), fmt17(ki.values[i]),
                     ki.decays ? "1" : "0"});
    }
    rep.tables.push_back(std::move(ind));
  }
  return rep;
}

Report cmd_partition(const ExperimentConfig& cfg) {
  Report rep = make_report("partition", cfg);
  const double s = cfg.get_double("partition.s", 0.0);
  const double t = cfg.get_double("partition.t");
  const double theta = cfg.get_double("partition.theta");
  if (!(t > s)) throw ConfigError("partition: need partition.t > partition.s");

  std::shared_ptr<MonotoneFn> F;
  if (cfg.has("partition.f_nodes")) {
    F = std::make_shared<StepFn>(cfg.get_list("partition.f_nodes"),
                                 cfg.get_list("partition.f_values"), 0.0);
  } else {
    F = std::make_shared<RateFn>(cfg.get_double("partition.rate"), s);
  }
  const PartitionResult part = greedy_partition(*F, s, t, theta);

  CsvTable table;
  table.name = "partition";
  table.header = {"i", "t_i"};
  for (std::size_t i = 0; i < part.points.size(); ++i)
    table.add_row({std::to_string(i), fmt17(part.points[i])});
  rep.tables.push_back(std::move(table));

  CsvTable meta;
  meta.name = "partition_meta";
  meta.header = {"m", "k", "theta", "certified"};
  meta.add_row({std::to_string(part.m), std::to_string(part.k),
                fmt17(part.theta), part.certified ? "1" : "0"});
  rep.tables.push_back(std::move(meta));
  rep.verdicts.push_back({"partition_certified", part.certified, ""});
  return rep;
}

Report cmd_scan(const ExperimentConfig& cfg) {
  Report rep = make_report("scan", cfg);
  const KernelParams params = cfg.kernel_params();
  const std::string kind = cfg.get_string("scan.kind");

  ScanConfig sc;
  sc.t_lo = cfg.get_double("scan.t_lo", sc.t_lo);
  sc.t_hi = cfg.get_double("scan.t_hi", sc.t_hi);
  sc.x_lo = cfg.get_double("scan.x_lo", sc.x_lo);
  sc.x_hi = cfg.get_double("scan.x_hi", sc.x_hi);
  sc.n_time = cfg.get_int("scan.n_time", sc.n_time);
  sc.n_space = cfg.get_int("scan.n_space", sc.n_space);
  sc.levels = cfg.get_int("scan.levels", sc.levels);

  RatioScanReport report;
  if (kind == "gradient")
    report = scan_gradient_bound(params, sc);
  else if (kind == "3p_hat")
    report = scan_3p_hat(params, sc);
  else if (kind == "3p_plain")
    report = scan_3p_plain(params, sc);
  else if (kind == "php")
    report = scan_php(params, sc);
  else if (kind == "envelope")
    report = scan_envelope(params, sc);
  else
    throw ConfigError("scan: unknown scan.kind '" + kind + "'");

  CsvTable levels;
  levels.name = "scan_levels";
  levels.header = {"level", "sup", "inf"};
  for (std::size_t i = 0; i < report.history.size(); ++i)
    levels.add_row({std::to_string(i), fmt17(report.history[i]),
                    i < report.history_inf.size() ? fmt17(report.history_inf[i])
                                                  : ""});
  rep.tables.push_back(std::move(levels));

  CsvTable result;
  result.name = "scan_result";
  result.header = {"name", "sup", "inf", "stable", "evaluations"};
  result.add_row({report.name, fmt17(report.sup_ratio), fmt17(report.inf_ratio),
                  report.stable ? "1" : "0",
                  std::to_string(report.evaluations)});
  rep.tables.push_back(std::move(result));

  CsvTable argmax;
  argmax.name = "scan_argmax";
  argmax.header = {"coordinate", "value"};
  for (std::size_t i = 0; i < report.argmax.size(); ++i)
    argmax.add_row({std::to_string(i), fmt17(report.argmax[i])});
  rep.tables.push_back(std::move(argmax));

  rep.verdicts.push_back({"scan_stable", report.stable, report.name});
  return rep;
}

Report cmd_verify(const ExperimentConfig& cfg) {
  Report rep = make_report("verify", cfg);
  AcceptanceOptions opts;
  if (cfg.has("verify.criteria")) {
    for (double v : cfg.get_list("verify.criteria"))
      opts.criteria.push_back(static_cast<int>(v));
  }
  const auto results = run_acceptance(opts, nullptr);

  CsvTable table;
  table.name = "criteria";
  table.header = {"id", "name", "pass", "measured", "threshold", "note"};
  for (const auto& r : results) {
    std::string note = r.note;
    for (char& ch : note)
      if (ch == ',') ch = ';';
    table.add_row({std::to_string(r.id), r.name, r.pass ? "1" : "0",
                   fmt17(r.measured), fmt17(r.threshold), note});
    rep.verdicts.push_back(
        {"criterion_" + std::to_string(r.id) + "_" + r.name, r.pass, r.note});
  }
  rep.tables.push_back(std::move(table));
  return rep;
}

Report run_command(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "kernel") return cmd_kernel(cfg);
  if (name == "series") return cmd_series(cfg);
  if (name == "conditions") return cmd_conditions(cfg);
  if (name == "partition") return cmd_partition(cfg);
  if (name == "scan") return cmd_scan(cfg);
  if (name == "verify") return cmd_verify(cfg);
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace kp
