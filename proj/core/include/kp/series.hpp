#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "kp/bounds.hpp"
#include "kp/drift.hpp"
#include "kp/kernel.hpp"
#include "kp/quadrature.hpp"

namespace kp {

struct SeriesOptions {
  bool early_stop = true;  // stop once |p_n| < tol * |sum| twice in a row
  int tail_start = 1;      // first ratio index entering the tail diagnostic
};

struct SeriesResult {
  std::vector<double> terms;         // p_n at the query point, n = 0..
  std::vector<double> partial_sums;  // running sums of terms
  double tail_ratio = 0.0;           // max_{n >= n0} |p_{n+1}| / |p_n|
  double tail_estimate = 0.0;        // geometric tail |p_N| * r / (1 - r)
  bool converged = false;
  std::optional<BoundVerdict> bound_check;

  double sum() const { return partial_sums.empty() ? 0.0 : partial_sums.back(); }
};

// Iterated-integral series for one source point (s, x) and horizon t.
// Order fields p_n(s, x, u, z) are stored on a shared tensor grid as ratios
// to the base kernel; off-grid reads interpolate the ratio and multiply by
// the exactly evaluated base factor, so the kernel's short-time spike never
// passes through the interpolation.
class SeriesEngine {
 public:
  SeriesEngine(const KernelParams& params, DriftField drift, GridSpec grid,
               double s, double x, double t);

  const MixedStableKernel& kernel() const { return *kernel_; }
  std::shared_ptr<const MixedStableKernel> kernel_ptr() const {
    return kernel_;
  }
  double s() const { return s_; }
  double x() const { return x_; }
  double horizon() const { return t_; }

  // Base kernel p(u - s, z - x).
  double base(double u, double z) const;

  // Computes and stores order fields 1..n (idempotent). Throws
  // DivergenceDetected when stored-field magnitudes grow for three
  // consecutive orders.
  void ensure_orders(int n);
  int orders_ready() const { return static_cast<int>(ratio_.size()); }

  // p_n(s, x, T, y) for any T in (s, t], y in the window.
  double term_at(int n, double T, double y);
  double term_at(int n, double y) { return term_at(n, t_, y); }

  // Stored-field reads at interior points (ratio interpolation x exact base).
  double stored_term(int n, double u, double z) const;
  double ptilde_stored(int N, double u, double z) const;

  SeriesResult sum_at(int N, double y, const SeriesOptions& opts = SeriesOptions());

 private:
  double integrate_order(int n, double T, double Y) const;
  double ratio_interp(int n, double u, double z) const;

  KernelParams params_;
  DriftField drift_;
  GridSpec grid_;
  double s_, x_, t_;
  double sigma_;  // 1/alpha
  std::shared_ptr<const MixedStableKernel> kernel_;

  std::vector<double> times_;  // storage rows (graded toward s and t)
  // Storage columns z_j = x + s_ref * sinh(q_j), q uniform: dense at the
  // source where the ratio profiles steepen, geometric far out. Uniform q
  // admits O(1) indexing and cubic interpolation in the column direction.
  std::vector<double> zs_;
  double z_ref_ = 1.0;   // s_ref
  double q_max_ = 1.0;
  double dq_ = 1.0;
  std::vector<std::vector<double>> ratio_;  // ratio_[n-1][i * zs.size() + j]
  std::vector<double> order_magnitude_;     // max |ratio| per stored order
};

// Spec-level one-shot operations.
double series_term(int n, double s, double x, double t, double y,
                   const DriftField& drift, const KernelParams& params,
                   const GridSpec& grid);

SeriesResult series_sum(int N, double s, double x, double t, double y,
                        const DriftField& drift, const KernelParams& params,
                        const GridSpec& grid,
                        const SeriesOptions& opts = SeriesOptions());

// Order-wise Chapman-Kolmogorov residual
// | sum_m int p_m(s,x,u,z) p_{n-m}(u,z,t,y) dz - p_n(s,x,t,y) |.
double check_order_ck(int n, double s, double u, double t, double x, double y,
                      const DriftField& drift, const KernelParams& params,
                      const GridSpec& grid);

// Chapman-Kolmogorov residual for the partial sum ptilde_N.
double check_ck(double s, double u, double t, double x, double y,
                const DriftField& drift, const KernelParams& params,
                const GridSpec& grid, int N);

}  // namespace kp
