#include "kp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kp/errors.hpp"

namespace kp {

PartitionResult greedy_partition(const MonotoneFn& F, double s, double t,
                                 double theta) {
  if (!(theta > 0.0))
    throw std::invalid_argument("greedy_partition: theta must be positive");
  if (!(s < t)) throw std::invalid_argument("greedy_partition: need s < t");

  const double base = F.right_limit(s);
  const double span = F.left_limit(t) - base;
  if (!std::isfinite(span))
    throw std::invalid_argument("greedy_partition: F variation not finite");

  PartitionResult out;
  out.theta = theta;
  out.k = span <= 0.0 ? 0 : static_cast<int>(std::ceil(span / theta - 1e-12));

  int l = std::max(out.k, 1);
  std::vector<double> pts;
  pts.push_back(s);
  for (int i = 1; i < l; ++i)
    pts.push_back(F.sup_leq(s, t, base + i * theta));
  pts.push_back(t);

  // Deduplicate while keeping strict increase.
  std::vector<double> dedup;
  for (double u : pts)
    if (dedup.empty() || u > dedup.back()) dedup.push_back(u);
  if (dedup.back() < t) dedup.push_back(t);
  out.points = std::move(dedup);
  out.m = static_cast<int>(out.points.size()) - 1;

  // Certify the one-sided condition on every deduplicated part.
  const double slack = 1e-9 * (std::abs(span) + theta) + 1e-12;
  for (int i = 0; i < out.m; ++i) {
    const double jump =
        F.left_limit(out.points[i + 1]) - F.right_limit(out.points[i]);
    if (jump > theta + slack)
      throw JumpTooLarge("greedy_partition: part " + std::to_string(i) +
                         " carries variation " + std::to_string(jump) +
                         " > theta = " + std::to_string(theta));
  }
  out.certified = true;
  return out;
}

double upper_bound_factor(double eta, double q_value) {
  if (eta < 0.0 || eta >= 0.5)
    throw EtaOutOfRange("upper_bound_factor: eta must be in [0, 1/2)");
  if (q_value < 0.0)
    throw std::invalid_argument("upper_bound_factor: q must be >= 0");
  if (eta == 0.0) return std::exp(q_value);
  return std::pow(1.0 / (1.0 - 2.0 * eta), 1.0 + q_value / eta);
}

double lower_bound_factor(double eta, double q_value) {
  if (eta < 0.0 || eta >= 0.5)
    throw EtaOutOfRange("lower_bound_factor: eta must be in [0, 1/2)");
  if (q_value < 0.0)
    throw std::invalid_argument("lower_bound_factor: q must be >= 0");

  const double width = 0.5 - eta;
  auto objective = [&](double delta) {
    const double b = 4.0 * delta / (1.0 + 2.0 * delta);
    return std::pow(b, 1.0 + q_value / (width - delta));
  };

  // Golden-section search on (0, width); the objective vanishes at both ends
  // and is unimodal in between.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 1e-6 * width, b = width - 1e-6 * width;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int i = 0; i < 60; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = objective(d);
    }
  }
  return std::min(1.0, std::max(fc, fd));
}

ClassPBounds classP_bounds(double eta, double rate, double elapsed) {
  if (!(eta > 0.0) || eta >= 0.5)
    throw EtaOutOfRange("classP_bounds: eta must be in (0, 1/2)");
  if (rate < 0.0 || !(elapsed > 0.0))
    throw std::invalid_argument("classP_bounds: need rate >= 0, elapsed > 0");
  const double expo = 1.0 + rate * elapsed / eta;
  ClassPBounds out;
  out.upper = std::pow(1.0 / (1.0 - eta), expo);
  out.lower = std::pow((1.0 - 2.0 * eta) / (1.0 - eta), expo);
  return out;
}

double binomial_term_bound(int n, int k, double theta) {
  if (n < 0 || k < 1)
    throw std::invalid_argument("binomial_term_bound: need n >= 0, k >= 1");
  if (theta < 0.0)
    throw std::invalid_argument("binomial_term_bound: theta must be >= 0");
  if (n == 0) return 1.0;
  if (theta == 0.0) return 0.0;
  const double log_binom = std::lgamma(n + k) - std::lgamma(k) -
                           std::lgamma(n + 1.0);
  return std::exp(log_binom + n * std::log(theta));
}

BoundVerdict verify_bounds(const std::vector<BoundSample>& samples, double eta,
                           double q_value, BoundMode mode, double elapsed,
                           double tol) {
  double lower, upper;
  if (mode == BoundMode::kClassP) {
    const double rate = elapsed > 0.0 ? q_value / elapsed : 0.0;
    if (eta == 0.0) {
      lower = upper = 1.0;  // zero perturbation budget
    } else {
      const ClassPBounds b = classP_bounds(eta, rate, elapsed);
      lower = b.lower;
      upper = b.upper;
    }
  } else {
    lower = lower_bound_factor(eta, q_value);
    upper = upper_bound_factor(eta, q_value);
  }
  const double inflate = 1.0 + 5.0 * tol;
  const double lo_adj = lower / inflate;
  const double hi_adj = upper * inflate;

  BoundVerdict verdict;
  verdict.pass = true;
  std::size_t worst_index = 0;
  double worst_margin = 0.0;
  for (const auto& sm : samples) {
    SampleMargin m;
    m.sample = sm;
    m.lower = lo_adj;
    m.upper = hi_adj;
    if (!(sm.base > 0.0)) {
      m.margin = 0.0;
      verdict.margins.push_back(m);
      continue;
    }
    const double ratio = sm.perturbed / sm.base;
    m.margin = std::min((ratio - lo_adj) / hi_adj, (hi_adj - ratio) / hi_adj);
    verdict.margins.push_back(m);
    if (m.margin < 0.0) {
      verdict.pass = false;
      if (m.margin < worst_margin) {
        worst_margin = m.margin;
        worst_index = verdict.margins.size() - 1;
      }
    }
  }
  if (!verdict.pass) {
    const auto& w = verdict.margins[worst_index];
    throw BoundViolation(
        "verify_bounds: density ratio " +
            std::to_string(w.sample.perturbed / w.sample.base) +
            " outside [" + std::to_string(lo_adj) + ", " +
            std::to_string(hi_adj) + "]",
        w.sample.s, w.sample.x, w.sample.t, w.sample.y, w.margin);
  }
  return verdict;
}

}  // namespace kp
