#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "kp/kernel_params.hpp"
#include "kp/spline.hpp"

namespace kp {

// Result of reducing a mixture weight a > 0 to the unit-weight kernel:
// p^a(t, x) = prefactor * p^1(arg.t, arg.x).
struct ScalingTriple {
  KernelParams unit;
  SpaceTimeArg arg;
  double prefactor = 1.0;
};

ScalingTriple scale_to_unit(const KernelParams& params,
                            const SpaceTimeArg& arg);

struct KernelOptions {
  double rel_tol = 1e-10;
  bool fast = false;      // enable radial-slice memoization / unit profile
  int slice_nodes = 320;  // nodes per memoized radial slice
};

// Isotropic density of the semigroup with symbol exp(-t psi(|xi|)),
// evaluated by radial Fourier inversion (d = 1 cosine / d = 3 sine form)
// with oscillation-aligned panels, switching to the power-tail expansion
// where it is more accurate.
//
// The evaluator is immutable after construction apart from internal
// memoization, which is mutex-protected; all methods are safe to call
// concurrently.
class MixedStableKernel {
 public:
  using Options = KernelOptions;

  explicit MixedStableKernel(const KernelParams& params,
                             Options opts = Options());

  const KernelParams& params() const { return par_; }

  // Radial density value; 0 for t <= 0. r is |x|.
  double density(double t, double r) const;
  // Companion density in dimension dim+2 (defined for dim = 1 only).
  double density_shifted(double t, double r) const;
  // d/dr of the radial profile at r >= 0 (dim = 1 only).
  double gradient_radial(double t, double r) const;
  // Derivative of p(t, w) with respect to the signed displacement w.
  double gradient_signed(double t, double w) const {
    return -2.0 * kPi * w * density_shifted(t, std::abs(w));
  }

  double hat_factor(double t) const;
  double hat(double t, double r) const;
  double envelope(double t, double r) const;

  // Mass of the density on {x > R} (dim = 1), from the tail expansion.
  double tail_mass(double t, double R) const;

  static constexpr double kPi = 3.14159265358979323846;

 private:
  struct Slice;

  double canonical_density(int dim, double t, double r) const;
  double fast_density(int dim, double t, double r) const;
  // Tail expansion with precomputed coefficients; falls back to `ok = false`.
  double tail_fast(int dim, double t, double r, double rel_tol,
                   bool& ok) const;
  const Slice& slice_for(int dim, double t) const;

  KernelParams par_;
  Options opt_;

  // Canonical form: a = 0 kept as-is (self-similar), a > 0 mapped to a = 1.
  KernelParams canon_;
  double time_scale_ = 1.0;
  double space_scale_ = 1.0;
  double pref_d_ = 1.0;    // prefactor for dim
  double pref_d2_ = 1.0;   // prefactor for dim + 2

  // Unit-time profiles for the self-similar (a = 0) fast path.
  CubicSpline profile_d_, profile_d2_;
  double profile_cut_d_ = 0.0, profile_cut_d2_ = 0.0;

  // Tail-expansion coefficients for the canonical parameters:
  // coef[k-1][j] multiplies t^k/k! * r^{-(k alpha - j (alpha-beta)) - offset}.
  std::vector<std::vector<double>> tail_coef_d1_, tail_coef_d3_;

  struct Slice {
    CubicSpline log_density;  // vs asinh(r / scale)
    double scale = 1.0;
    double r_cut = 0.0;
  };
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<int, double>, std::shared_ptr<const Slice>>
      slice_cache_;
};

// Spec-level operations on explicit (params, arg) pairs. These construct a
// direct (table-free) evaluator per call; use MixedStableKernel with
// Options.fast for bulk work.
double eval_density(const KernelParams& params, const SpaceTimeArg& arg);
std::vector<double> eval_gradient(const KernelParams& params,
                                  const SpaceTimeArg& arg);
double envelope(const KernelParams& params, const SpaceTimeArg& arg);
double hat_kernel(const KernelParams& params, const SpaceTimeArg& arg);

namespace detail {

// Direct oscillatory-panel evaluation (no caches). dim in {1, 3}.
double density_direct(const KernelParams& params, int dim, double t, double r,
                      double rel_tol);

// Power-tail expansion; sets ok = false when it cannot reach rel_tol.
double density_tail_expansion(const KernelParams& params, int dim, double t,
                              double r, double rel_tol, bool& ok);

// Tail mass on {x > R} for dim = 1 via the integrated expansion.
double tail_mass_expansion(const KernelParams& params, double t, double R,
                           double rel_tol, bool& ok);

// Truncation radius: smallest S with exp(-t psi(S)) * S^{dim-1} below the
// integrand floor.
double truncation_radius(const KernelParams& params, int dim, double t);

}  // namespace detail

}  // namespace kp
