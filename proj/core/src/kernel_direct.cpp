#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "kp/errors.hpp"
#include "kp/kernel.hpp"
#include "kp/quadrature.hpp"

namespace kp::detail {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxExpansionOrder = 16;

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double binom(int k, int j) {
  double v = 1.0;
  for (int i = 0; i < j; ++i) v = v * (k - i) / (i + 1);
  return v;
}

}  // namespace

double truncation_radius(const KernelParams& params, int dim, double t) {
  // exp(-t psi(S)) * S^{dim-1} < 1e-18 times the head of the integrand.
  double target = 41.5;  // -ln(1e-18)
  auto solve = [&](double c) {
    if (params.a <= 0.0) return std::pow(c / t, 1.0 / params.alpha);
    double lo = 0.0, hi = 1.0;
    while (t * params.psi(hi) < c && hi < 1e12) hi *= 2.0;
    for (int i = 0; i < 120; ++i) {
      const double mid = 0.5 * (lo + hi);
      (t * params.psi(mid) < c ? lo : hi) = mid;
    }
    return hi;
  };
  double S = solve(target);
  if (dim == 3) {
    for (int pass = 0; pass < 3; ++pass)
      S = solve(target + 2.0 * std::log(std::max(S, 1.0)));
  }
  return S;
}

double density_tail_expansion(const KernelParams& params, int dim, double t,
                              double r, double rel_tol, bool& ok) {
  ok = false;
  if (!(r > 0.0) || !(t > 0.0)) return 0.0;
  const double alpha = params.alpha;
  const double beta = params.beta_index;
  const double ab = params.a > 0.0 ? std::pow(params.a, beta) : 0.0;
  const double log_r = std::log(r);

  double sum = 0.0;
  double prev_nonzero = HUGE_VAL;
  int small_streak = 0;
  double tk = 1.0;  // t^k / k!
  for (int k = 1; k <= kMaxExpansionOrder; ++k) {
    tk *= t / k;
    double term = 0.0;
    const int jmax = ab > 0.0 ? k : 0;
    double abj = 1.0;
    for (int j = 0; j <= jmax; ++j) {
      const double gamma = k * alpha - j * (alpha - beta);
      const double trig = std::sin(0.5 * kPi * gamma);
      if (trig != 0.0) {
        double g, radial;
        if (dim == 1) {
          g = std::tgamma(gamma + 1.0);
          radial = std::exp(-(gamma + 1.0) * log_r);
          term += binom(k, j) * abj * g * trig * radial / kPi;
        } else {
          g = std::tgamma(gamma + 2.0);
          radial = std::exp(-(gamma + 3.0) * log_r);
          term += binom(k, j) * abj * g * trig * radial / (2.0 * kPi * kPi);
        }
      }
      abj *= ab;
    }
    const double signed_term = (k % 2 == 1 ? term : -term) * tk;
    sum += signed_term;
    const double mag = std::abs(term) * tk;
    // Terms can be exactly zero at integer exponents; demand two consecutive
    // small terms before accepting.
    small_streak = (mag <= rel_tol * std::abs(sum)) ? small_streak + 1 : 0;
    if (small_streak >= 2 && sum > 0.0) {
      ok = true;
      return sum;
    }
    if (mag > 0.0) {
      if (mag > prev_nonzero && k > 2) return 0.0;  // divergence reached
      prev_nonzero = mag;
    }
  }
  return 0.0;
}

double tail_mass_expansion(const KernelParams& params, double t, double R,
                           double rel_tol, bool& ok) {
  ok = false;
  if (!(R > 0.0) || !(t > 0.0)) return 0.0;
  const double alpha = params.alpha;
  const double beta = params.beta_index;
  const double ab = params.a > 0.0 ? std::pow(params.a, beta) : 0.0;
  const double log_R = std::log(R);

  double sum = 0.0;
  double prev_nonzero = HUGE_VAL;
  int small_streak = 0;
  double tk = 1.0;
  for (int k = 1; k <= kMaxExpansionOrder; ++k) {
    tk *= t / k;
    double term = 0.0;
    const int jmax = ab > 0.0 ? k : 0;
    double abj = 1.0;
    for (int j = 0; j <= jmax; ++j) {
      const double gamma = k * alpha - j * (alpha - beta);
      const double trig = std::sin(0.5 * kPi * gamma);
      if (trig != 0.0) {
        term += binom(k, j) * abj * std::tgamma(gamma + 1.0) * trig *
                std::exp(-gamma * log_R) / (gamma * kPi);
      }
      abj *= ab;
    }
    const double signed_term = (k % 2 == 1 ? term : -term) * tk;
    sum += signed_term;
    const double mag = std::abs(term) * tk;
    small_streak = (mag <= rel_tol * std::abs(sum)) ? small_streak + 1 : 0;
    if (small_streak >= 2 && sum > 0.0) {
      ok = true;
      return sum;
    }
    if (mag > 0.0) {
      if (mag > prev_nonzero && k > 2) return 0.0;
      prev_nonzero = mag;
    }
  }
  return 0.0;
}

double density_direct(const KernelParams& params, int dim, double t, double r,
                      double rel_tol) {
  if (t <= 0.0) return 0.0;
  r = std::abs(r);
  const double S = truncation_radius(params, dim, t);

  std::function<double(double)> integrand;
  if (dim == 1) {
    integrand = [&params, t, r](double s) {
      return std::exp(-t * params.psi(s)) * std::cos(r * s) / kPi;
    };
  } else {
    integrand = [&params, t, r](double s) {
      return std::exp(-t * params.psi(s)) * s * s * sinc(r * s) /
             (2.0 * kPi * kPi);
    };
  }

  const double half_period = r > 0.0 ? kPi / r : HUGE_VAL;
  if (S <= half_period) {
    Integrate1dOptions opts;
    opts.max_subdivisions = 2000;
    opts.abs_floor = 1e-305;
    return integrate_1d(integrand, 0.0, S, rel_tol, opts).value;
  }

  const double n_panels_d = S / half_period;
  if (n_panels_d > 250000.0)
    throw NumericalNonConvergence(
        "density_direct: " + std::to_string(n_panels_d) +
        " oscillation panels needed; tail expansion not applicable");
  const int n_panels = static_cast<int>(n_panels_d);

  double total = 0.0, err = 0.0, abs_total = 0.0;
  double a = 0.0;
  std::vector<double> boundaries;
  boundaries.reserve(static_cast<std::size_t>(n_panels) + 2);
  boundaries.push_back(0.0);
  for (int k = 1; k <= n_panels; ++k) {
    const double b = k * half_period;
    PanelResult p = gk15(integrand, a, b);
    total += p.value;
    err += p.error;
    abs_total += std::abs(p.value);
    a = b;
    boundaries.push_back(b);
  }
  if (a < S) {
    PanelResult p = gk15(integrand, a, S);
    total += p.value;
    err += p.error;
    abs_total += std::abs(p.value);
  }
  boundaries.push_back(S);

  if (std::abs(total) < 1e-13 * abs_total)
    throw NumericalNonConvergence(
        "density_direct: catastrophic cancellation in the oscillatory sum");

  if (err <= rel_tol * std::abs(total)) return total;

  // Slow path: hand the half-period panels to the adaptive engine.
  if (n_panels > 8000)
    throw NumericalNonConvergence(
        "density_direct: oscillatory sum did not meet tolerance");
  Integrate1dOptions opts;
  opts.max_subdivisions = 4000;
  opts.abs_floor = 1e-305;
  opts.breakpoints.assign(boundaries.begin() + 1, boundaries.end() - 1);
  return integrate_1d(integrand, 0.0, S, rel_tol, opts).value;
}

}  // namespace kp::detail
