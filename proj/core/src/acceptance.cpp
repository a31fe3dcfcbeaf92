#include "kp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "kp/bounds.hpp"
#include "kp/conditions.hpp"
#include "kp/errors.hpp"
#include "kp/generator.hpp"
#include "kp/kernel.hpp"
#include "kp/quadrature.hpp"
#include "kp/scans.hpp"
#include "kp/series.hpp"

namespace kp {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Reference constant-drift configuration shared by criteria 5-8.
struct ConstantDriftContext {
  KernelParams params = KernelParams::pure(1.5, 1, ParamGrade::kPerturbation);
  double c = 0.3;
  double s = 0.0;
  double t = 0.5;
  double x = 0.0;
  GridSpec grid;
  std::vector<double> ys;
  std::unique_ptr<SeriesEngine> engine;
  std::vector<SeriesResult> sums;  // per y, N = 8, no early stop

  // Class-P data measured once (criteria 7, 8).
  double eta = 0.25;
  double h = 0.0;
  std::unique_ptr<ConditionsEngine> conditions;

  void ensure_series() {
    if (engine) return;
    grid.n_time = 20;
    grid.n_space = 44;
    grid.L = 12.0;
    grid.tol = 1e-3;
    ys = {-1.2, -0.9, -0.6, -0.4, -0.2, -0.05, 0.1, 0.25, 0.4, 0.55, 0.7,
          0.9, 1.1, 1.35, 1.6};
    engine = std::make_unique<SeriesEngine>(params, DriftField::constant(c),
                                            grid, s, x, t);
    SeriesOptions so;
    so.early_stop = false;
    for (double y : ys) sums.push_back(engine->sum_at(8, y, so));
  }

  void ensure_class_p() {
    if (conditions) return;
    GridSpec g;
    g.n_time = 24;
    g.n_space = 40;
    g.L = 10.0;
    g.tol = 1e-3;
    conditions = std::make_unique<ConditionsEngine>(
        params, DriftField::constant(c), g);
    SampleSet samples;
    samples.pairs = {{0.0, 0.0}, {0.0, 0.3},  {0.3, 0.0}, {0.0, 1.0},
                     {1.0, 1.0}, {-0.3, 0.3}, {0.5, 0.5}};
    const auto est = conditions->estimate_class_P(eta, samples);
    h = est.h;
  }
};

using Clock = std::chrono::steady_clock;

CriterionResult run_one(int id, const std::string& name, double threshold,
                        const std::function<double(CriterionResult&)>& body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.threshold = threshold;
  const auto start = Clock::now();
  try {
    r.measured = body(r);
    if (r.note.empty() || r.note.substr(0, 5) != "FAIL:")
      r.pass = r.measured <= threshold;
    else
      r.pass = false;
  } catch (const std::exception& e) {
    r.pass = false;
    r.note = std::string("exception: ") + e.what();
    r.measured = HUGE_VAL;
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

// --- criterion bodies ------------------------------------------------------

double criterion_cauchy(CriterionResult&) {
  const KernelParams P = KernelParams::pure(1.0, 1);
  MixedStableKernel k(P);
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    for (int i = 0; i <= 40; ++i) {
      const double x = -10.0 + 20.0 * i / 40.0;
      const double got = k.density(t, std::abs(x));
      const double want = t / (kPi * (t * t + x * x));
      worst = std::max(worst, std::abs(got - want) / want);
    }
  }
  return worst;
}

double criterion_normalization_ck(CriterionResult& r) {
  struct Config {
    double alpha, beta, a;
  };
  const std::vector<Config> configs = {{1.2, 0.9, 0.0}, {1.5, 1.2, 0.0},
                                       {1.8, 1.2, 0.0}, {1.2, 0.9, 1.0},
                                       {1.5, 1.2, 1.0}, {1.8, 1.2, 1.0}};
  double worst_norm = 0.0, worst_ck = 0.0;
  for (const auto& cfg : configs) {
    const KernelParams P =
        cfg.a > 0.0 ? KernelParams::mixed(cfg.alpha, cfg.beta, cfg.a, 1)
                    : KernelParams::pure(cfg.alpha, 1);
    KernelOptions ko;
    ko.fast = true;
    ko.rel_tol = 1e-10;
    ko.slice_nodes = 480;
    MixedStableKernel k(P, ko);

    // Normalization: 2 * int_0^L p + 2 * tail.
    for (double t : {0.5, 1.0, 2.0}) {
      const double L = 40.0;
      auto f = [&](double z) { return k.density(t, z); };
      const double head = integrate_1d(f, 0.0, L, 1e-9).value;
      const double total = 2.0 * (head + k.tail_mass(t, L));
      worst_norm = std::max(worst_norm, std::abs(total - 1.0));
    }

    // Chapman-Kolmogorov on the 3x3x3 time sample times 3x3 (x, y).
    const double gaps[3] = {0.3, 0.6, 1.0};
    const double ss[3] = {0.0, 0.2, 0.4};
    const double xs[3] = {-1.5, 0.0, 1.0};
    for (double s : ss)
      for (double g1 : gaps)
        for (double g2 : gaps) {
          const double u = s + g1, t = u + g2;
          for (double x : xs)
            for (double y : xs) {
              auto f = [&](double z) {
                return k.density(u - s, std::abs(z - x)) *
                       k.density(t - u, std::abs(y - z));
              };
              Integrate1dOptions opts;
              opts.breakpoints = {x, y};
              const double L = 30.0;
              const double lhs =
                  integrate_1d(f, 0.5 * (x + y) - L, 0.5 * (x + y) + L, 1e-8,
                               opts)
                      .value;
              const double rhs = k.density(t - s, std::abs(y - x));
              worst_ck = std::max(worst_ck, std::abs(lhs - rhs) / rhs);
            }
        }
  }
  r.note = "norm err " + fmt(worst_norm) + ", ck err " + fmt(worst_ck);
  // Both budgets are 1e-6 (norm) and 1e-4 (ck); report the binding ratio.
  return std::max(worst_norm / 1e-6, worst_ck / 1e-4);
}

double criterion_gradient(CriterionResult&) {
  const std::vector<KernelParams> configs = {
      KernelParams::pure(1.5, 1), KernelParams::mixed(1.5, 1.2, 1.0, 1)};
  const double h = 1e-4;
  double worst = 0.0;
  for (const auto& P : configs) {
    MixedStableKernel k(P);
    int count = 0;
    for (double t : {0.5, 2.0})
      for (double x : {-3.0, -1.5, -0.7, -0.2, 0.2, 0.45, 0.7, 1.5, 3.0, 8.0}) {
        if (count >= 20) break;
        ++count;
        const double fd = (k.density(t, std::abs(x + h)) -
                           k.density(t, std::abs(x - h))) /
                          (2.0 * h);
        const double gi = k.gradient_signed(t, x);
        worst = std::max(worst, std::abs(fd - gi) / std::abs(fd));
      }
  }
  return worst;
}

double criterion_scaling(CriterionResult&) {
  const KernelParams P = KernelParams::mixed(1.5, 1.2, 2.0, 1);
  MixedStableKernel k(P);
  MixedStableKernel unit(KernelParams::mixed(1.5, 1.2, 1.0, 1));
  std::mt19937 rng(20240801);
  std::uniform_real_distribution<double> ut(std::log(0.05), std::log(5.0));
  std::uniform_real_distribution<double> ux(-8.0, 8.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double t = std::exp(ut(rng));
    const double x = ux(rng);
    const SpaceTimeArg arg(t, x);
    const auto tri = scale_to_unit(P, arg);
    const double direct = k.density(t, std::abs(x));
    const double via = tri.prefactor * unit.density(tri.arg.t, tri.arg.radius());
    worst = std::max(worst, std::abs(direct - via) / direct);
  }
  return worst;
}

double criterion_series_oracle(CriterionResult& r, ConstantDriftContext& ctx) {
  ctx.ensure_series();
  const auto& k = ctx.engine->kernel();
  double worst = 0.0;
  // Aggregate tail ratio over the sample set: ratios of l1 norms across
  // samples, immune to the isolated zeros of individual derivatives.
  std::vector<double> l1(16, 0.0);
  std::size_t max_terms = 0;
  for (std::size_t i = 0; i < ctx.ys.size(); ++i) {
    const double oracle =
        k.density(ctx.t - ctx.s, std::abs(ctx.ys[i] - ctx.x - ctx.c * (ctx.t - ctx.s)));
    worst = std::max(worst, std::abs(ctx.sums[i].sum() - oracle) / oracle);
    const auto& terms = ctx.sums[i].terms;
    max_terms = std::max(max_terms, terms.size());
    for (std::size_t n = 0; n < terms.size() && n < l1.size(); ++n)
      l1[n] += std::abs(terms[n]);
  }
  double tail = 0.0;
  for (std::size_t n = 1; n + 1 < max_terms; ++n)
    if (l1[n] > 0.0) tail = std::max(tail, l1[n + 1] / l1[n]);
  r.note = "oracle err " + fmt(worst) + ", aggregate tail ratio " + fmt(tail);
  if (tail >= 0.5) {
    r.note = "FAIL: tail ratio " + fmt(tail) + " >= 1/2; " + r.note;
    return HUGE_VAL;
  }
  return worst;
}

double criterion_order_ck(CriterionResult& r, ConstantDriftContext& ctx) {
  GridSpec grid = ctx.grid;
  grid.n_time = 32;
  grid.n_space = 56;
  grid.tol = 1e-3;
  grid.L = 12.0;
  const DriftField drift = DriftField::constant(ctx.c);
  const double s = 0.0, u = 0.25, t = 0.5, x = 0.0, y = 0.4;

  SeriesEngine whole(ctx.params, drift, grid, s, x, t);
  double worst = 0.0;
  std::ostringstream note;
  for (int n = 0; n <= 3; ++n) {
    const double residual =
        check_order_ck(n, s, u, t, x, y, drift, ctx.params, grid);
    const double scale = std::abs(whole.term_at(n, y));
    const double rel = residual / scale;
    worst = std::max(worst, rel);
    note << (n ? ", " : "") << "n=" << n << ": " << fmt(rel);
  }
  r.note = note.str();
  return worst;
}

double criterion_classP_bounds(CriterionResult& r, ConstantDriftContext& ctx) {
  ctx.ensure_series();
  ctx.ensure_class_p();
  const auto& k = ctx.engine->kernel();
  const double elapsed = ctx.t - ctx.s;
  const double rate = ctx.eta / ctx.h;
  const double q = rate * elapsed;

  std::vector<BoundSample> samples;
  for (std::size_t i = 0; i < ctx.ys.size(); ++i) {
    BoundSample b;
    b.s = ctx.s;
    b.x = ctx.x;
    b.t = ctx.t;
    b.y = ctx.ys[i];
    b.perturbed = ctx.sums[i].sum();
    b.base = k.density(elapsed, std::abs(ctx.ys[i] - ctx.x));
    samples.push_back(b);
  }
  const BoundVerdict verdict = verify_bounds(samples, ctx.eta, q,
                                             BoundMode::kClassP, elapsed,
                                             ctx.grid.tol);
  double min_margin = HUGE_VAL;
  for (const auto& m : verdict.margins)
    min_margin = std::min(min_margin, m.margin);

  // Negative test: halving eta falsifies the short-window certificate.
  bool negative_fired = false;
  SampleSet sset;
  sset.pairs = {{0.0, 0.0}, {0.0, 0.3}, {0.5, 0.5}};
  try {
    ctx.conditions->certify_class_P(0.5 * ctx.eta, ctx.h, sset);
  } catch (const BoundViolation&) {
    negative_fired = true;
  }
  r.note = "h = " + fmt(ctx.h) + ", min margin " + fmt(min_margin) +
           ", negative test " + (negative_fired ? "fired" : "DID NOT FIRE");
  if (!verdict.pass || !negative_fired) {
    r.note = "FAIL: " + r.note;
    return HUGE_VAL;
  }
  return 0.0;  // pass/fail criterion; measured is informational
}

double criterion_binomial_chain(CriterionResult& r, ConstantDriftContext& ctx) {
  ctx.ensure_class_p();
  const double eps = 0.15;
  const double theta = ctx.eta + eps;
  const double rate = ctx.eta / ctx.h;
  // Horizon whose control span rate*T sits in (2 eps, 3 eps]: three parts.
  const double T = 2.5 * eps / rate;

  RateFn F(rate, 0.0);
  const PartitionResult part = greedy_partition(F, 0.0, T, eps);
  if (part.m != 3) {
    r.note = "FAIL: partition produced m = " + std::to_string(part.m);
    return HUGE_VAL;
  }
  // Certify the per-part functional against theta = eta + eps.
  double part_worst = 0.0;
  for (int i = 0; i < part.m; ++i) {
    const double pk = ctx.conditions->kato_functional(
        part.points[i], 0.0, part.points[i + 1], 0.0);
    part_worst = std::max(part_worst, pk);
  }
  if (part_worst > theta) {
    r.note = "FAIL: per-part functional " + fmt(part_worst) + " > theta";
    return HUGE_VAL;
  }

  GridSpec grid = ctx.grid;
  grid.n_time = 28;
  grid.n_space = 48;
  grid.L = 8.0;
  SeriesEngine engine(ctx.params, DriftField::constant(ctx.c), grid, 0.0, 0.0,
                      T);
  const auto& k = engine.kernel();
  double worst = 0.0;
  const double tol_inflate = 1.0 + 5.0 * grid.tol;
  for (double y : {-0.6, -0.2, 0.0, 0.2, 0.4, 0.8}) {
    const double p = k.density(T, std::abs(y));
    for (int n = 0; n <= 6; ++n) {
      const double term = std::abs(engine.term_at(n, y));
      const double bound =
          binomial_term_bound(n, part.m, theta) * p * tol_inflate;
      if (term > 0.0) worst = std::max(worst, term / bound);
    }
  }
  r.note = "T = " + fmt(T) + ", m = 3, per-part kato " + fmt(part_worst) +
           ", worst |p_n|/bound " + fmt(worst);
  return worst;
}

double criterion_partitions(CriterionResult& r) {
  // Worked example 1: F(u) = u on [0,1], theta = 0.4.
  {
    RateFn F(1.0, 0.0);
    const auto part = greedy_partition(F, 0.0, 1.0, 0.4);
    const std::vector<double> want = {0.0, 0.4, 0.8, 1.0};
    if (part.m != 3 || part.points.size() != want.size()) {
      r.note = "FAIL: example 1 m=" + std::to_string(part.m);
      return HUGE_VAL;
    }
    for (std::size_t i = 0; i < want.size(); ++i)
      if (std::abs(part.points[i] - want[i]) > 1e-9) {
        r.note = "FAIL: example 1 point " + std::to_string(i);
        return HUGE_VAL;
      }
  }
  // Worked example 2: constant F -> trivial partition.
  {
    RateFn F(0.0, 0.0);
    const auto part = greedy_partition(F, 0.0, 1.0, 0.4);
    if (part.m != 1 || part.points.front() != 0.0 || part.points.back() != 1.0) {
      r.note = "FAIL: example 2";
      return HUGE_VAL;
    }
  }
  // Worked example 3: single step of height 0.5 inside, theta = 0.6.
  {
    StepFn F({0.5}, {0.5}, 0.0);
    const auto part = greedy_partition(F, 0.0, 1.0, 0.6);
    if (part.m != 1 || part.points.front() != 0.0 || part.points.back() != 1.0) {
      r.note = "FAIL: example 3 m=" + std::to_string(part.m);
      return HUGE_VAL;
    }
  }
  // 100 randomized tabulated controls.
  std::mt19937 rng(7111u);
  std::uniform_int_distribution<int> n_steps(1, 12);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = n_steps(rng);
    std::vector<double> nodes, values;
    double level = 0.0;
    for (int i = 0; i < n; ++i) {
      nodes.push_back(unif(rng));
      level += unif(rng);
      values.push_back(level);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    values.resize(nodes.size());
    StepFn F(nodes, values, 0.0);
    const double theta = 0.2 + unif(rng);
    const auto part = greedy_partition(F, 0.0, 1.0, theta);
    if (part.m > std::max(part.k, 1)) {
      r.note = "FAIL: trial " + std::to_string(trial) + " m > k";
      return HUGE_VAL;
    }
    for (int i = 0; i < part.m; ++i) {
      const double jump = F.left_limit(part.points[i + 1]) -
                          F.right_limit(part.points[i]);
      if (jump > theta + 1e-9) {
        r.note = "FAIL: trial " + std::to_string(trial) + " jump > theta";
        return HUGE_VAL;
      }
    }
  }
  r.note = "3 worked examples + 100 randomized controls";
  return 0.0;
}

double criterion_scans(CriterionResult& r) {
  const KernelParams mixed = KernelParams::mixed(1.5, 1.2, 1.0, 1);
  const KernelParams low_beta = KernelParams::mixed(1.5, 0.8, 1.0, 1);

  ScanConfig cfg4;
  cfg4.n_time = 7;
  cfg4.n_space = 7;
  cfg4.levels = 3;
  ScanConfig cfg2;
  cfg2.n_time = 12;
  cfg2.n_space = 12;
  cfg2.levels = 3;

  std::vector<RatioScanReport> reports;
  reports.push_back(scan_gradient_bound(mixed, cfg2));
  reports.push_back(scan_3p_hat(mixed, cfg4));
  reports.push_back(scan_3p_plain(mixed, cfg4));
  reports.push_back(scan_3p_plain(low_beta, cfg4));
  reports.push_back(scan_php(mixed, cfg4));
  reports.push_back(scan_envelope(mixed, cfg2));

  std::ostringstream note;
  bool all_ok = true;
  for (const auto& rep : reports) {
    note << rep.name << " sup " << fmt(rep.sup_ratio)
         << (rep.stable ? "" : " UNSTABLE") << "; ";
    all_ok = all_ok && rep.stable && std::isfinite(rep.sup_ratio);
  }

  // Pointwise factor inequality behind the gradient bound (a = 1).
  bool factor_ok = true;
  for (double t : {0.01, 0.1, 1.0, 10.0, 100.0})
    for (double x : {0.0, 0.01, 0.1, 1.0, 10.0, 50.0})
      factor_ok = factor_ok && gradient_factor_inequality_holds(mixed, t, x);
  note << "factor inequality " << (factor_ok ? "holds" : "VIOLATED");

  r.note = note.str();
  if (!all_ok || !factor_ok) {
    r.note = "FAIL: " + r.note;
    return HUGE_VAL;
  }
  return 0.0;
}

double criterion_example2(CriterionResult& r) {
  const KernelParams P =
      KernelParams::mixed(1.5, 1.2, 1.0, 1, ParamGrade::kPerturbation);
  const DriftField drift = DriftField::power_law(P.alpha, 0.1);
  const std::vector<double> probes = {0.0, 0.25, 0.5, 1.0, 2.0};

  const KatoIndicator at_alpha = kato_class_indicator(drift, P.alpha, probes);
  const KatoIndicator at_beta =
      kato_class_indicator(drift, P.beta_index, probes);

  GridSpec grid;
  grid.n_time = 20;
  grid.n_space = 36;
  grid.L = 8.0;
  grid.tol = 1e-3;
  ConditionsEngine cond(P, drift, grid);
  SampleSet samples;
  samples.pairs = {{0.0, 0.0},  {0.0, 0.2},  {0.2, 0.0}, {-0.2, 0.2},
                   {0.5, 0.5},  {0.0, 1.0},  {1.0, 0.0}, {0.3, -0.3}};
  const auto est = cond.estimate_class_P(0.25, samples);

  // Time-integrated hat-kernel slope near the origin.
  const double x1 = 0.08, x2 = 0.2, t = 1.0;
  const double v1 = time_integrated_hat(t, x1, P);
  const double v2 = time_integrated_hat(t, x2, P);
  const double slope = std::log(v2 / v1) / std::log(x2 / x1);
  const double want = P.alpha - 2.0;  // alpha - (d+1), d = 1

  std::ostringstream note;
  note << "K^{alpha-1} " << (at_alpha.decays ? "in" : "OUT") << " (ratio "
       << fmt(at_alpha.decay_ratio) << "), K^{beta-1} "
       << (at_beta.decays ? "IN" : "out") << " (ratio "
       << fmt(at_beta.decay_ratio) << "), h = " << fmt(est.h) << ", slope "
       << fmt(slope) << " vs " << fmt(want);
  r.note = note.str();

  const bool ok = at_alpha.decays && !at_beta.decays && est.found &&
                  est.h > 0.0 && std::abs(slope - want) <= 0.15;
  if (!ok) {
    r.note = "FAIL: " + r.note;
    return HUGE_VAL;
  }
  return std::abs(slope - want);
}

double criterion_weak_generator(CriterionResult& r) {
  const TestFunction bump1{0.6, 0.35, 0.2, 0.8, 1.0};
  const TestFunction bump2{0.5, 0.25, -0.3, 0.5, 0.7};
  GridSpec grid;
  grid.n_time = 24;
  grid.n_space = 40;
  grid.L = 10.0;
  grid.tol = 1e-3;

  double worst = 0.0;
  std::ostringstream note;

  // Zero drift against the mixed generator (a = 1).
  {
    const KernelParams P =
        KernelParams::mixed(1.5, 1.2, 1.0, 1, ParamGrade::kPerturbation);
    for (const auto& phi : {bump1, bump2}) {
      const double res = weak_generator_residual(0.0, 0.1, phi,
                                                 DriftField::zero(), P, grid,
                                                 0);
      worst = std::max(worst, res / phi.sup_norm());
    }
    note << "mixed zero-drift " << fmt(worst);
  }

  // Constant drift with the translated-kernel oracle (a = 0).
  {
    const KernelParams P = KernelParams::pure(1.5, 1, ParamGrade::kPerturbation);
    WeakGeneratorOptions wopts;
    wopts.source = PerturbedKernelSource::kTranslatedOracle;
    wopts.oracle_drift = 0.3;
    double w2 = 0.0;
    for (const auto& phi : {bump1, bump2}) {
      const double res = weak_generator_residual(
          0.0, 0.1, phi, DriftField::constant(0.3), P, grid, 0, wopts);
      w2 = std::max(w2, res / phi.sup_norm());
    }
    note << ", oracle constant-drift " << fmt(w2);
    worst = std::max(worst, w2);
  }
  r.note = note.str();
  return worst;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            std::ostream* progress) {
  ConstantDriftContext ctx;

  struct Spec {
    int id;
    const char* name;
    double threshold;
    std::function<double(CriterionResult&)> body;
  };
  const std::vector<Spec> specs = {
      {1, "cauchy_oracle", 1e-6, [](CriterionResult& r) { return criterion_cauchy(r); }},
      {2, "normalization_and_ck", 1.0,
       [](CriterionResult& r) { return criterion_normalization_ck(r); }},
      {3, "gradient_identity", 1e-5,
       [](CriterionResult& r) { return criterion_gradient(r); }},
      {4, "scaling_identity", 1e-8,
       [](CriterionResult& r) { return criterion_scaling(r); }},
      {5, "constant_drift_series_oracle", 1e-3,
       [&ctx](CriterionResult& r) { return criterion_series_oracle(r, ctx); }},
      {6, "order_wise_ck", 1e-3,
       [&ctx](CriterionResult& r) { return criterion_order_ck(r, ctx); }},
      {7, "classP_bounds", 0.5,
       [&ctx](CriterionResult& r) { return criterion_classP_bounds(r, ctx); }},
      {8, "binomial_term_chain", 1.0,
       [&ctx](CriterionResult& r) { return criterion_binomial_chain(r, ctx); }},
      {9, "partition_algorithm", 0.5,
       [](CriterionResult& r) { return criterion_partitions(r); }},
      {10, "inequality_scans", 0.5,
       [](CriterionResult& r) { return criterion_scans(r); }},
      {11, "example2_pipeline", 0.15,
       [](CriterionResult& r) { return criterion_example2(r); }},
      {12, "weak_generator_residual", 1e-3,
       [](CriterionResult& r) { return criterion_weak_generator(r); }},
  };

  std::vector<CriterionResult> results;
  for (const auto& spec : specs) {
    if (!opts.criteria.empty() &&
        std::find(opts.criteria.begin(), opts.criteria.end(), spec.id) ==
            opts.criteria.end())
      continue;
    CriterionResult r = run_one(spec.id, spec.name, spec.threshold, spec.body);
    if (progress) {
      (*progress) << "criterion " << r.id << " [" << (r.pass ? "PASS" : "FAIL")
                  << "] " << r.name << ": measured " << r.measured
                  << " vs threshold " << r.threshold << " (" << r.seconds
                  << " s)";
      if (!r.note.empty()) (*progress) << " - " << r.note;
      (*progress) << "\n" << std::flush;
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace kp
