#include "kp/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kp/errors.hpp"
#include "kp/log.hpp"

namespace kp {

SampleSet SampleSet::default_grid() {
  SampleSet s;
  const double pts[7] = {-3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0};
  for (double x : pts)
    for (double y : pts) s.pairs.emplace_back(x, y);
  return s;
}

ConditionsEngine::ConditionsEngine(const KernelParams& params,
                                   DriftField drift, GridSpec grid)
    : params_(params), drift_(std::move(drift)), grid_(grid) {
  params_.validate(ParamGrade::kPerturbation);
  if (params_.dim != 1)
    throw UnsupportedDimension("ConditionsEngine: dim 1 only");
  grid_.validate();
  KernelOptions ko;
  ko.fast = true;
  ko.rel_tol = 1e-9;
  ko.slice_nodes = 240;
  kernel_ = std::make_shared<MixedStableKernel>(params_, ko);
}

double ConditionsEngine::kato_numerator(double s, double x, double t,
                                        double y) const {
  const MixedStableKernel& k = *kernel_;
  const double alpha = params_.alpha;
  const double pole = drift_.singular_point();

  auto f = [&](double u, double z) -> double {
    const double bv = drift_.magnitude(u, z);
    if (bv == 0.0) return 0.0;
    const double p1 = k.density(u - s, std::abs(z - x));
    if (p1 == 0.0) return 0.0;
    const double g = std::abs(k.gradient_signed(t - u, y - z));
    return p1 * bv * g;
  };
  auto features = [&](double u) {
    std::vector<SpaceFeature> fs;
    fs.push_back({x, std::pow(std::max(u - s, 1e-300), 1.0 / alpha)});
    fs.push_back({y, std::pow(std::max(t - u, 1e-300), 1.0 / alpha)});
    if (!std::isnan(pole)) fs.push_back({pole, 1e-3 * grid_.L});
    return fs;
  };
  const double center = 0.5 * (x + y);
  GridSpec g = grid_;
  g.n_time *= 2;
  g.n_space *= 2;
  return spacetime_pass(f, s, t, center, g, SingularWeight(1.0 / alpha),
                        features);
}

double ConditionsEngine::kato_functional(double s, double x, double t,
                                         double y) const {
  if (!(s < t)) throw std::invalid_argument("kato_functional: need s < t");
  if (drift_.is_zero()) return 0.0;
  const double denom = kernel_->density(t - s, std::abs(y - x));
  if (!(denom > 0.0))
    throw NumericalNonConvergence("kato_functional: vanishing denominator");
  return kato_numerator(s, x, t, y) / denom;
}

ConditionsEngine::ClassPEstimate ConditionsEngine::estimate_class_P(
    double eta_target, const SampleSet& samples) const {
  if (!(eta_target > 0.0))
    throw std::invalid_argument("estimate_class_P: eta_target must be > 0");

  auto max_functional = [&](double h) {
    double worst = 0.0;
    for (const auto& [x, y] : samples.pairs) {
      worst = std::max(worst, kato_functional(0.0, x, h, y));
      if (worst > eta_target) break;  // early reject
    }
    return worst;
  };

  ClassPEstimate out;
  double lo = std::log(1e-4), hi = std::log(1e2);
  if (max_functional(std::exp(hi)) <= eta_target) {
    out.h = std::exp(hi);
    out.found = true;
    out.unbounded = true;
    out.measured = max_functional(std::exp(hi));
    return out;
  }
  if (max_functional(std::exp(lo)) > eta_target) {
    out.found = false;
    return out;
  }
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (max_functional(std::exp(mid)) <= eta_target ? lo : hi) = mid;
  }
  out.h = std::exp(lo);
  out.found = true;
  out.measured = max_functional(out.h);
  return out;
}

ConditionsEngine::SplitBound ConditionsEngine::split_bound(double s, double x,
                                                           double t,
                                                           double y) const {
  if (!(s < t)) throw std::invalid_argument("split_bound: need s < t");
  SplitBound out;
  if (drift_.is_zero()) return out;

  const MixedStableKernel& k = *kernel_;
  const double alpha = params_.alpha;
  const double pole = drift_.singular_point();

  auto f = [&](double u, double z) -> double {
    const double bv = drift_.magnitude(u, z);
    if (bv == 0.0) return 0.0;
    const double h1 = k.hat(u - s, std::abs(z - x));
    const double h2 = k.hat(t - u, std::abs(y - z));
    return (h1 + h2) * bv;
  };
  auto features = [&](double u) {
    std::vector<SpaceFeature> fs;
    fs.push_back({x, std::pow(std::max(u - s, 1e-300), 1.0 / alpha)});
    fs.push_back({y, std::pow(std::max(t - u, 1e-300), 1.0 / alpha)});
    if (!std::isnan(pole)) fs.push_back({pole, 1e-3 * grid_.L});
    return fs;
  };
  GridSpec g = grid_;
  g.n_time *= 2;
  g.n_space *= 2;
  out.value = spacetime_pass(f, s, t, 0.5 * (x + y), g,
                             SingularWeight(1.0 / alpha), features);
  out.kato = kato_functional(s, x, t, y);
  out.ratio = out.value > 0.0 ? out.kato / out.value : 0.0;
  return out;
}

double ConditionsEngine::certify_class_P(double eta, double h,
                                         const SampleSet& samples) const {
  double worst = 0.0;
  double wx = 0.0, wy = 0.0;
  for (const auto& [x, y] : samples.pairs) {
    const double v = kato_functional(0.0, x, h, y);
    if (v > worst) {
      worst = v;
      wx = x;
      wy = y;
    }
  }
  const double limit = eta * (1.0 + 5.0 * grid_.tol);
  if (worst > limit)
    throw BoundViolation(
        "certify_class_P: functional " + std::to_string(worst) +
            " exceeds eta = " + std::to_string(eta) + " on a window of " +
            std::to_string(h),
        0.0, wx, h, wy, (limit - worst) / limit);
  return worst;
}

ControlPair to_class_N(double eta, double h) {
  if (!(eta > 0.0) || !(h > 0.0))
    throw std::invalid_argument("to_class_N: need eta > 0 and h > 0");
  return ControlPair::rate_form(eta, eta / h);
}

double time_integrated_hat(double t, double x, const KernelParams& params,
                           double tol) {
  params.validate();
  if (!(t > 0.0) || x == 0.0)
    throw std::invalid_argument("time_integrated_hat: need t > 0, x != 0");
  if (params.a != 1.0)
    throw std::invalid_argument("time_integrated_hat: defined at unit weight");
  KernelOptions ko;
  ko.fast = true;
  MixedStableKernel k(params, ko);
  const double r = std::abs(x);
  auto f = [&](double u) { return k.hat(u, r); };
  Integrate1dOptions opts;
  opts.left = SingularWeight(1.0 / params.alpha);
  // Mass concentrates where the kernel turns over, around u ~ |x|^beta and
  // |x|^alpha.
  const double b1 = std::pow(r, params.alpha);
  const double b2 = std::pow(r, params.beta_index);
  for (double b : {b1, b2})
    if (b > 0.0 && b < t) opts.breakpoints.push_back(b);
  return integrate_1d(f, 0.0, t, tol, opts).value;
}

KatoIndicator kato_class_indicator(const DriftField& drift, double gamma,
                                   const std::vector<double>& probe_radii) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("kato_class_indicator: gamma must be > 1");
  if (!drift.space_only())
    throw std::invalid_argument(
        "kato_class_indicator: drift must be spatial-only");

  KatoIndicator out;
  const double delta = 1e-12;  // inner cutoff for essentially divergent cases
  for (int k = 1; k <= 12; ++k) out.epsilons.push_back(std::pow(2.0, -k));

  for (double eps : out.epsilons) {
    double sup = 0.0;
    for (double x : probe_radii) {
      auto f = [&](double w) {
        return drift.magnitude(0.0, x + w) *
               std::pow(std::abs(w), gamma - 2.0);
      };
      // Steep near the cutoff; geometric breakpoints seed the adaptive split.
      Integrate1dOptions opts;
      for (double d = delta * 10.0; d < eps; d *= 10.0)
        opts.breakpoints.push_back(d);
      double v = integrate_1d(f, delta, eps, 1e-7, opts).value;
      opts.breakpoints.clear();
      for (double d = delta * 10.0; d < eps; d *= 10.0)
        opts.breakpoints.push_back(-d);
      v += integrate_1d(f, -eps, -delta, 1e-7, opts).value;
      sup = std::max(sup, v);
    }
    out.values.push_back(sup);
  }

  const double first = out.values.front();
  const double last = out.values.back();
  bool nonincreasing = true;
  for (std::size_t i = 1; i < out.values.size(); ++i)
    if (out.values[i] > 1.05 * out.values[i - 1]) nonincreasing = false;
  out.decay_ratio = first > 0.0 ? last / first : 0.0;
  out.decays = first == 0.0 || (nonincreasing && out.decay_ratio <= 0.6);
  return out;
}

}  // namespace kp
