#include "kp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "kp/errors.hpp"
#include "kp/kernel.hpp"
#include "kp/series.hpp"
#include "kp/spline.hpp"

namespace kp {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double generator_constant(int dim, double gamma) {
  // Gamma((d-gamma)/2) / (2^gamma pi^{d/2} |Gamma(gamma/2)|); std::lgamma is
  // log|Gamma|, which is exactly what the denominator needs. The numerator is
  // positive for every use here (gamma < dim or gamma < 0).
  const double log_num = std::lgamma(0.5 * (dim - gamma));
  const double log_den_abs = std::lgamma(0.5 * gamma);
  return std::exp(log_num - gamma * std::log(2.0) -
                  0.5 * dim * std::log(kPi) - log_den_abs);
}

double fractional_laplacian_profile(const std::function<double(double)>& f,
                                    const std::function<double(double)>& f_dd,
                                    double support_radius, double center,
                                    double gamma, double z, double tol) {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw std::invalid_argument("fractional_laplacian: gamma must be in (0,2)");
  const double A = generator_constant(1, -gamma);

  const double eps = 1e-3 * support_radius;
  // Second-order Taylor correction on the excluded interval: the odd term
  // cancels by symmetry.
  const double inner = f_dd(z) * std::pow(eps, 2.0 - gamma) / (2.0 - gamma);

  // W covers the support from z, so f(z + w) = 0 beyond it.
  const double W =
      std::abs(z - center) + support_radius + 1.0;
  const double fz = f(z);
  auto g = [&](double w) {
    return (f(z + w) - fz) * std::pow(std::abs(w), -1.0 - gamma);
  };
  Integrate1dOptions opts;
  opts.breakpoints = {center - support_radius - z, center + support_radius - z};
  const double mid =
      integrate_1d(g, eps, W, tol, opts).value +
      integrate_1d(g, -W, -eps, tol, opts).value;

  const double outer = fz == 0.0 ? 0.0 : -fz * 2.0 * std::pow(W, -gamma) / gamma;
  return A * (inner + mid + outer);
}

double fractional_laplacian(const TestFunction& phi, double gamma, double u,
                            double z, double tol) {
  const double amp = phi.amplitude * phi.time_profile(u);
  if (amp == 0.0) return 0.0;
  auto f = [&phi](double w) { return phi.space_profile(w); };
  auto f_dd = [&phi](double w) { return phi.space_profile_d2(w); };
  return amp * fractional_laplacian_profile(f, f_dd, phi.z_radius,
                                            phi.z_center, gamma, z, tol);
}

double weak_generator_residual(double s, double x, const TestFunction& phi,
                               const DriftField& drift,
                               const KernelParams& params, const GridSpec& grid,
                               int N, const WeakGeneratorOptions& opts) {
  params.validate(ParamGrade::kPerturbation);
  if (params.dim != 1)
    throw UnsupportedDimension("weak_generator_residual: dim 1 only");

  const double t0 = phi.t_lo(), t1 = phi.t_hi();
  if (t1 <= s) return std::abs(phi.value(s, x));  // phi dies before s

  // Precompute the nonlocal terms of the spatial profile on the window; they
  // extend far beyond the bump support.
  const double Z = std::max(std::abs(phi.z_center) + phi.z_radius,
                            std::abs(x)) +
                   opts.z_margin;
  const int n_nodes = 1200;
  std::vector<double> zs(n_nodes), fa(n_nodes), fb(n_nodes);
  auto f = [&phi](double w) { return phi.space_profile(w); };
  auto f_dd = [&phi](double w) { return phi.space_profile_d2(w); };
  const bool mixed = params.a > 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    zs[i] = -Z + 2.0 * Z * i / (n_nodes - 1);
    fa[i] = fractional_laplacian_profile(f, f_dd, phi.z_radius, phi.z_center,
                                         params.alpha, zs[i], 1e-9);
    if (mixed)
      fb[i] = fractional_laplacian_profile(f, f_dd, phi.z_radius, phi.z_center,
                                           params.beta_index, zs[i], 1e-9);
  }
  CubicSpline frac_a(zs, fa);
  CubicSpline frac_b = mixed ? CubicSpline(zs, fb) : CubicSpline();
  const double ab = mixed ? std::pow(params.a, params.beta_index) : 0.0;

  // Perturbed kernel source.
  std::shared_ptr<SeriesEngine> engine;
  std::shared_ptr<MixedStableKernel> base_kernel;
  if (opts.source == PerturbedKernelSource::kSeries && !drift.is_zero()) {
    engine = std::make_shared<SeriesEngine>(params, drift, grid, s, x,
                                            t1 + 1e-9 * (t1 - s));
    engine->ensure_orders(std::max(N, 0));
  } else {
    KernelOptions ko;
    ko.fast = true;
    base_kernel = std::make_shared<MixedStableKernel>(params, ko);
  }
  auto ptilde = [&](double u, double z) -> double {
    switch (opts.source) {
      case PerturbedKernelSource::kSeries:
        if (drift.is_zero())
          return base_kernel->density(u - s, std::abs(z - x));
        return engine->ptilde_stored(N, u, z);
      case PerturbedKernelSource::kBase:
        return base_kernel->density(u - s, std::abs(z - x));
      case PerturbedKernelSource::kTranslatedOracle:
        return base_kernel->density(u - s,
                                    std::abs(z - x - opts.oracle_drift * (u - s)));
    }
    return 0.0;
  };

  auto integrand_z = [&](double u, double z) {
    const double tp = phi.amplitude * phi.time_profile(u);
    double psi = phi.dt(u, z) + tp * frac_a(std::clamp(z, -Z, Z));
    if (mixed) psi += ab * tp * frac_b(std::clamp(z, -Z, Z));
    const double bv = drift.component(u, z);
    if (bv != 0.0) psi += bv * phi.dz(u, z);
    if (psi == 0.0) return 0.0;
    const double p = ptilde(u, z);
    return p == 0.0 ? 0.0 : p * psi;
  };

  const double u_lo = std::max(s + 1e-12 * (t1 - s), t0);
  auto slice = [&](double u) {
    Integrate1dOptions zopts;
    zopts.breakpoints = {phi.z_lo(), phi.z_hi(), x};
    auto fz2 = [&](double z) { return integrand_z(u, z); };
    return integrate_1d(fz2, -Z, Z, opts.tol, zopts).value;
  };
  const double integral = integrate_1d(slice, u_lo, t1, opts.tol).value;

  return std::abs(integral + phi.value(s, x));
}

}  // namespace kp
