#include "kp/scans.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "kp/log.hpp"

namespace kp {

namespace {

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> v(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    v[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  return v;
}

// Signed spatial grid: +-log-spaced plus zero. Opposite-sign pairs are the
// stress case for the three-point scans (x + y near zero with both large).
std::vector<double> signed_grid(double lo, double hi, int n) {
  std::vector<double> pos = log_spaced(lo, hi, n);
  std::vector<double> v;
  v.reserve(2 * pos.size() + 1);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) v.push_back(-*it);
  v.push_back(0.0);
  for (double p : pos) v.push_back(p);
  return v;
}

int level_count(int base, int level) {
  double n = base;
  for (int i = 0; i < level; ++i) n *= 1.5;
  return static_cast<int>(n);
}

struct ScanAccumulator {
  double sup = -std::numeric_limits<double>::infinity();
  double inf = std::numeric_limits<double>::infinity();
  std::vector<double> argmax;
  std::size_t evals = 0;

  void visit(double ratio, std::initializer_list<double> coords) {
    ++evals;
    if (!std::isfinite(ratio)) return;
    if (ratio > sup) {
      sup = ratio;
      argmax.assign(coords);
    }
    inf = std::min(inf, ratio);
  }
};

RatioScanReport finalize(std::string name, std::vector<double> history,
                         std::vector<double> history_inf,
                         ScanAccumulator&& last, double stability_tol,
                         bool two_sided) {
  RatioScanReport rep;
  rep.name = std::move(name);
  rep.sup_ratio = last.sup;
  rep.inf_ratio = two_sided ? last.inf : 0.0;
  rep.argmax = std::move(last.argmax);
  rep.history = std::move(history);
  rep.history_inf = std::move(history_inf);
  rep.evaluations = last.evals;
  if (rep.history.size() >= 2) {
    const double a = rep.history[rep.history.size() - 2];
    const double b = rep.history.back();
    bool ok = std::abs(b - a) <= stability_tol * std::max(std::abs(b), 1e-300);
    if (two_sided && rep.history_inf.size() >= 2) {
      const double ia = rep.history_inf[rep.history_inf.size() - 2];
      const double ib = rep.history_inf.back();
      ok = ok &&
           std::abs(ib - ia) <= stability_tol * std::max(std::abs(ib), 1e-300);
    }
    rep.stable = ok && std::isfinite(rep.sup_ratio);
  }
  return rep;
}

using PointFn = std::function<double(const MixedStableKernel&, double, double)>;

// Shared driver for the (t, x) scans.
RatioScanReport scan_2d(const std::string& name, const KernelParams& params,
                        const ScanConfig& cfg, const PointFn& ratio_fn,
                        bool two_sided) {
  KernelOptions ko;
  ko.fast = true;
  ko.rel_tol = 1e-8;
  ko.slice_nodes = 200;
  MixedStableKernel kernel(params, ko);

  std::vector<double> history, history_inf;
  ScanAccumulator acc;
  for (int level = 0; level < cfg.levels; ++level) {
    const auto ts = log_spaced(cfg.t_lo, cfg.t_hi,
                               level_count(2 * cfg.n_time, level));
    auto xs = log_spaced(cfg.x_lo, cfg.x_hi,
                         level_count(2 * cfg.n_space, level));
    xs.insert(xs.begin(), 0.0);
    acc = ScanAccumulator();
    for (double t : ts)
      for (double x : xs) acc.visit(ratio_fn(kernel, t, x), {t, x});
    history.push_back(acc.sup);
    history_inf.push_back(acc.inf);
    log::debug("scan ", name, " level ", level, ": sup = ", acc.sup,
               " inf = ", acc.inf);
  }
  return finalize(name, std::move(history), std::move(history_inf),
                  std::move(acc), cfg.stability_tol, two_sided);
}

using TupleFn = std::function<double(const MixedStableKernel&, double, double,
                                     double, double)>;

// Shared driver for the signed 4-tuple scans.
RatioScanReport scan_4d(const std::string& name, const KernelParams& params,
                        const ScanConfig& cfg, const TupleFn& ratio_fn) {
  KernelOptions ko;
  ko.fast = true;
  ko.rel_tol = 1e-8;
  ko.slice_nodes = 200;
  MixedStableKernel kernel(params, ko);

  std::vector<double> history;
  ScanAccumulator acc;
  for (int level = 0; level < cfg.levels; ++level) {
    const auto ts =
        log_spaced(cfg.t_lo, cfg.t_hi, level_count(cfg.n_time, level));
    const auto xs =
        signed_grid(cfg.x_lo, cfg.x_hi, level_count(cfg.n_space, level));
    acc = ScanAccumulator();
    for (double u : ts)
      for (double x : xs)
        for (double r : ts)
          for (double y : xs)
            acc.visit(ratio_fn(kernel, u, x, r, y), {u, x, r, y});
    history.push_back(acc.sup);
    log::debug("scan ", name, " level ", level, ": sup = ", acc.sup, " (",
               acc.evals, " evals)");
  }
  return finalize(name, std::move(history), {}, std::move(acc),
                  cfg.stability_tol, false);
}

}  // namespace

RatioScanReport scan_gradient_bound(const KernelParams& params,
                                    const ScanConfig& cfg) {
  return scan_2d(
      "gradient_bound", params, cfg,
      [](const MixedStableKernel& k, double t, double x) {
        const double hat = k.hat(t, std::abs(x));
        if (!(hat > 0.0)) return 0.0;
        return std::abs(k.gradient_signed(t, x)) / hat;
      },
      false);
}

RatioScanReport scan_3p_hat(const KernelParams& params,
                            const ScanConfig& cfg) {
  return scan_4d("3p_hat", params, cfg,
                 [](const MixedStableKernel& k, double u, double x, double r,
                    double y) {
                   const double denom = k.hat(u + r, std::abs(x + y));
                   if (!(denom > 0.0)) return 0.0;
                   const double numer =
                       std::min(k.hat(u, std::abs(x)), k.hat(r, std::abs(y)));
                   return numer / denom;
                 });
}

RatioScanReport scan_3p_plain(const KernelParams& params,
                              const ScanConfig& cfg) {
  return scan_4d("3p_plain", params, cfg,
                 [](const MixedStableKernel& k, double u, double x, double r,
                    double y) {
                   const double denom = k.density(u + r, std::abs(x + y));
                   if (!(denom > 0.0)) return 0.0;
                   const double numer = std::min(k.density(u, std::abs(x)),
                                                 k.density(r, std::abs(y)));
                   return numer / denom;
                 });
}

RatioScanReport scan_php(const KernelParams& params, const ScanConfig& cfg) {
  return scan_4d(
      "php", params, cfg,
      [](const MixedStableKernel& k, double u, double x, double r, double y) {
        const double hx = k.hat(u, std::abs(x));
        const double hy = k.hat(r, std::abs(y));
        const double denom = k.density(u + r, std::abs(x + y)) * (hx + hy);
        if (!(denom > 0.0)) return 0.0;
        return k.density(u, std::abs(x)) * hy / denom;
      });
}

RatioScanReport scan_envelope(const KernelParams& params,
                              const ScanConfig& cfg) {
  return scan_2d(
      "envelope", params, cfg,
      [](const MixedStableKernel& k, double t, double x) {
        const double env = k.envelope(t, std::abs(x));
        if (!(env > 0.0))
          return std::numeric_limits<double>::quiet_NaN();
        return k.density(t, std::abs(x)) / env;
      },
      true);
}

bool gradient_factor_inequality_holds(const KernelParams& params, double t,
                                      double x) {
  const double a = params.alpha, b = params.beta_index;
  const double lhs =
      std::abs(x) * std::min({std::pow(t, -2.0 / a), std::pow(t, -2.0 / b),
                              x != 0.0 ? 1.0 / (x * x)
                                       : std::numeric_limits<double>::infinity()});
  const double rhs = std::min(std::pow(t, -1.0 / a), std::pow(t, -1.0 / b));
  return lhs <= rhs * (1.0 + 1e-12);
}

}  // namespace kp
