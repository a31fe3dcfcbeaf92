#include "kp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kp/errors.hpp"
#include "kp/log.hpp"

namespace kp {

namespace {

constexpr double kPi = MixedStableKernel::kPi;
constexpr double kDensityClamp = 1e-300;

double clamp_density(double v) {
  if (!(v > kDensityClamp)) return 0.0;
  return v;
}

}  // namespace

ScalingTriple scale_to_unit(const KernelParams& params,
                            const SpaceTimeArg& arg) {
  params.validate();
  if (params.a <= 0.0)
    throw DegenerateScaling("scale_to_unit: requires a > 0");
  const double alpha = params.alpha, beta = params.beta_index;
  const double e = beta / (alpha - beta);
  const double time_scale = std::pow(params.a, alpha * e);
  const double space_scale = std::pow(params.a, e);
  ScalingTriple out;
  out.unit = params;
  out.unit.a = 1.0;
  out.arg.t = time_scale * arg.t;
  out.arg.x = arg.x;
  for (double& c : out.arg.x) c *= space_scale;
  out.prefactor = std::pow(params.a, e * params.dim);
  return out;
}

MixedStableKernel::MixedStableKernel(const KernelParams& params, Options opts)
    : par_(params), opt_(opts) {
  par_.validate();
  canon_ = par_;
  if (par_.a > 0.0 && par_.a != 1.0) {
    const double e = par_.beta_index / (par_.alpha - par_.beta_index);
    time_scale_ = std::pow(par_.a, par_.alpha * e);
    space_scale_ = std::pow(par_.a, e);
    pref_d_ = std::pow(par_.a, e * par_.dim);
    pref_d2_ = std::pow(par_.a, e * (par_.dim + 2));
    canon_.a = 1.0;
  }

  // Tail-expansion coefficient tables for the canonical parameters.
  {
    const double alpha = canon_.alpha, beta = canon_.beta_index;
    const double ab = canon_.a > 0.0 ? std::pow(canon_.a, beta) : 0.0;
    const int kmax = 16;
    for (int k = 1; k <= kmax; ++k) {
      std::vector<double> c1, c3;
      const int jmax = ab > 0.0 ? k : 0;
      double binom = 1.0, abj = 1.0;
      for (int j = 0; j <= jmax; ++j) {
        const double gamma = k * alpha - j * (alpha - beta);
        const double trig = std::sin(0.5 * kPi * gamma);
        c1.push_back(binom * abj * std::tgamma(gamma + 1.0) * trig / kPi);
        c3.push_back(binom * abj * std::tgamma(gamma + 2.0) * trig /
                     (2.0 * kPi * kPi));
        binom = binom * (k - j) / (j + 1);
        abj *= ab;
      }
      tail_coef_d1_.push_back(std::move(c1));
      tail_coef_d3_.push_back(std::move(c3));
    }
  }

  if (opt_.fast && canon_.a == 0.0) {
    // Self-similar: one unit-time profile per dimension covers all scales.
    auto build_profile = [&](int dim, CubicSpline& spline, double& cut) {
      KernelParams pd = canon_.with_dim(dim == 3 ? 3 : 1);
      double r_cut = 2.0;
      for (; r_cut < 512.0; r_cut *= 1.5) {
        bool ok = false;
        detail::density_tail_expansion(pd, dim, 1.0, r_cut, 1e-11, ok);
        if (ok) break;
      }
      cut = r_cut;
      const int n = std::max(2 * opt_.slice_nodes, 640);
      const double q_max = std::asinh(r_cut);
      std::vector<double> qs(n), ys(n);
      for (int i = 0; i < n; ++i) {
        qs[i] = q_max * i / (n - 1);
        const double r = std::sinh(qs[i]);
        ys[i] = std::log(detail::density_direct(pd, dim, 1.0, r, opt_.rel_tol));
      }
      spline = CubicSpline(std::move(qs), std::move(ys));
    };
    build_profile(par_.dim, profile_d_, profile_cut_d_);
    if (par_.dim == 1) build_profile(3, profile_d2_, profile_cut_d2_);
  }
}

double MixedStableKernel::canonical_density(int dim, double t, double r) const {
  // canon_ has a in {0, 1}.
  if (t <= 0.0) return 0.0;
  r = std::abs(r);
  const KernelParams pd = canon_.with_dim(dim == 3 ? 3 : 1);

  if (opt_.fast) return fast_density(dim, t, r);

  if (r > 0.0) {
    bool ok = false;
    const double v =
        detail::density_tail_expansion(pd, dim, t, r, 0.1 * opt_.rel_tol, ok);
    if (ok) return v;
  }
  return detail::density_direct(pd, dim, t, r, opt_.rel_tol);
}

double MixedStableKernel::tail_fast(int dim, double t, double r,
                                    double rel_tol, bool& ok) const {
  ok = false;
  if (!(r > 0.0)) return 0.0;
  const auto& coef = dim == 3 ? tail_coef_d3_ : tail_coef_d1_;
  const double alpha = canon_.alpha, beta = canon_.beta_index;
  const double r_ma = std::pow(r, -alpha);     // r^{-alpha}
  const double r_ab = std::pow(r, alpha - beta);
  const double offset = dim == 3 ? std::pow(r, -3.0) : 1.0 / r;

  double sum = 0.0;
  double prev_nonzero = HUGE_VAL;
  int small_streak = 0;
  double tk = 1.0;
  double rk = offset;  // r^{-k alpha - offset_exponent}
  for (std::size_t k = 1; k <= coef.size(); ++k) {
    tk *= t / static_cast<double>(k);
    rk *= r_ma;
    double term = 0.0;
    double rj = rk;
    for (double c : coef[k - 1]) {
      term += c * rj;
      rj *= r_ab;
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

double MixedStableKernel::fast_density(int dim, double t, double r) const {
  const KernelParams pd = canon_.with_dim(dim == 3 ? 3 : 1);
  if (canon_.a == 0.0) {
    // p_d(t, r) = t^{-d/alpha} * profile_d(r * t^{-1/alpha})
    const double ts = std::pow(t, -1.0 / canon_.alpha);
    const double w = r * ts;
    const CubicSpline& prof = (dim == 3) ? profile_d2_ : profile_d_;
    const double cut = (dim == 3) ? profile_cut_d2_ : profile_cut_d_;
    if (prof.empty())
      throw std::logic_error("fast_density: profile not built for dim");
    const double vol = std::pow(ts, static_cast<double>(dim));
    if (w <= cut) return vol * std::exp(prof(std::asinh(w)));
    bool ok = false;
    const double v = tail_fast(dim, t, r, 1e-10, ok);
    if (ok) return v;
    return detail::density_direct(pd, dim, t, r, opt_.rel_tol);
  }

  const Slice& sl = slice_for(dim, t);
  if (r <= sl.r_cut) return std::exp(sl.log_density(std::asinh(r / sl.scale)));
  bool ok = false;
  const double v = tail_fast(dim, t, r, 1e-10, ok);
  if (ok) return v;
  return detail::density_direct(pd, dim, t, r, opt_.rel_tol);
}

const MixedStableKernel::Slice& MixedStableKernel::slice_for(int dim,
                                                             double t) const {
  const auto key = std::make_pair(dim, t);
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = slice_cache_.find(key);
    if (it != slice_cache_.end()) return *it->second;
  }

  const KernelParams pd = canon_.with_dim(dim == 3 ? 3 : 1);
  const double scale = std::min(std::pow(t, 1.0 / canon_.alpha),
                                std::pow(t, 1.0 / canon_.beta_index));
  double r_cut = 2.0 * scale;
  for (; r_cut < 1e6; r_cut *= 1.5) {
    bool ok = false;
    detail::density_tail_expansion(pd, dim, t, r_cut, 1e-11, ok);
    if (ok) break;
  }
  auto sl = std::make_shared<Slice>();
  sl->scale = scale;
  sl->r_cut = r_cut;
  const int n = std::max(opt_.slice_nodes, 64);
  const double q_max = std::asinh(r_cut / scale);
  std::vector<double> qs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    qs[i] = q_max * i / (n - 1);
    const double r = scale * std::sinh(qs[i]);
    ys[i] = std::log(detail::density_direct(pd, dim, t, r, opt_.rel_tol));
  }
  sl->log_density = CubicSpline(std::move(qs), std::move(ys));

  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (slice_cache_.size() > 8192) slice_cache_.clear();
  auto [it, inserted] = slice_cache_.emplace(key, std::move(sl));
  return *it->second;
}

double MixedStableKernel::density(double t, double r) const {
  if (t <= 0.0) return 0.0;
  if (canon_.a == par_.a)
    return clamp_density(canonical_density(par_.dim, t, r));
  return clamp_density(pref_d_ * canonical_density(par_.dim, t * time_scale_,
                                                   r * space_scale_));
}

double MixedStableKernel::density_shifted(double t, double r) const {
  if (par_.dim != 1)
    throw UnsupportedDimension(
        "density_shifted: dimension-shift companion only available for dim 1");
  if (t <= 0.0) return 0.0;
  if (canon_.a == par_.a) return clamp_density(canonical_density(3, t, r));
  return clamp_density(
      pref_d2_ * canonical_density(3, t * time_scale_, r * space_scale_));
}

double MixedStableKernel::gradient_radial(double t, double r) const {
  if (t <= 0.0) return 0.0;
  return -2.0 * kPi * r * density_shifted(t, r);
}

double MixedStableKernel::hat_factor(double t) const {
  if (!(t > 0.0))
    throw std::invalid_argument("hat_factor: requires t > 0");
  const double fa = std::pow(t, -1.0 / par_.alpha);
  if (par_.a <= 0.0) return fa;
  const double fb =
      std::pow(std::pow(par_.a, par_.beta_index) * t, -1.0 / par_.beta_index);
  return std::min(fa, fb);
}

double MixedStableKernel::hat(double t, double r) const {
  return hat_factor(t) * density(t, r);
}

double MixedStableKernel::envelope(double t, double r) const {
  if (!(t > 0.0))
    throw std::invalid_argument("envelope: requires t > 0");
  const double d = static_cast<double>(par_.dim);
  const double on_diag_a = std::pow(t, -d / par_.alpha);
  double on_diag = on_diag_a;
  if (par_.a > 0.0) {
    const double ab = std::pow(par_.a, par_.beta_index);
    on_diag = std::min(on_diag, std::pow(ab * t, -d / par_.beta_index));
  }
  r = std::abs(r);
  if (r <= 0.0) return on_diag;
  double tail = t / std::pow(r, d + par_.alpha);
  if (par_.a > 0.0)
    tail += std::pow(par_.a, par_.beta_index) * t /
            std::pow(r, d + par_.beta_index);
  return std::min(on_diag, tail);
}

double MixedStableKernel::tail_mass(double t, double R) const {
  if (par_.dim != 1)
    throw UnsupportedDimension("tail_mass: implemented for dim 1");
  if (t <= 0.0) return 0.0;
  double tt = t, RR = R;
  if (canon_.a != par_.a) {
    tt = t * time_scale_;
    RR = R * space_scale_;
  }
  bool ok = false;
  const double v = detail::tail_mass_expansion(canon_, tt, RR, 1e-8, ok);
  if (ok) return v;
  // Fall back to a crude bound from the envelope tail.
  const double alpha = canon_.alpha;
  double bound = tt / (alpha * std::pow(RR, alpha));
  if (canon_.a > 0.0)
    bound += tt / (canon_.beta_index * std::pow(RR, canon_.beta_index));
  log::debug("tail_mass: expansion rejected at R=", RR,
             ", returning envelope bound");
  return bound;
}

double eval_density(const KernelParams& params, const SpaceTimeArg& arg) {
  params.validate();
  if (static_cast<int>(arg.x.size()) != params.dim)
    throw std::invalid_argument("eval_density: arg dimension mismatch");
  if (!std::isfinite(arg.t))
    throw std::invalid_argument("eval_density: t must be finite");
  MixedStableKernel k(params);
  return k.density(arg.t, arg.radius());
}

std::vector<double> eval_gradient(const KernelParams& params,
                                  const SpaceTimeArg& arg) {
  params.validate();
  if (params.dim != 1)
    throw UnsupportedDimension(
        "eval_gradient: only dim 1 is supported (its dim+2 companion is 3)");
  if (static_cast<int>(arg.x.size()) != params.dim)
    throw std::invalid_argument("eval_gradient: arg dimension mismatch");
  MixedStableKernel k(params);
  std::vector<double> g(arg.x.size(), 0.0);
  if (arg.t <= 0.0) return g;
  const double p3 = k.density_shifted(arg.t, arg.radius());
  for (std::size_t i = 0; i < arg.x.size(); ++i)
    g[i] = -2.0 * kPi * arg.x[i] * p3;
  return g;
}

double envelope(const KernelParams& params, const SpaceTimeArg& arg) {
  params.validate();
  MixedStableKernel k(params);
  return k.envelope(arg.t, arg.radius());
}

double hat_kernel(const KernelParams& params, const SpaceTimeArg& arg) {
  params.validate();
  MixedStableKernel k(params);
  return k.hat(arg.t, arg.radius());
}

}  // namespace kp
