#pragma once

#include <string>
#include <vector>

#include "kp/kernel.hpp"

namespace kp {

// Grid-scan estimate of an implicit comparison constant: the supremum of a
// pointwise ratio over a refining grid, accepted only when the last two
// refinement levels agree.
struct RatioScanReport {
  std::string name;
  double sup_ratio = 0.0;
  double inf_ratio = 0.0;              // two-sided scans only, else 0
  std::vector<double> argmax;          // grid point achieving the sup
  std::vector<double> history;         // sup per refinement level
  std::vector<double> history_inf;     // inf per level (two-sided scans)
  bool stable = false;                 // last two levels within 5%
  std::size_t evaluations = 0;
};

struct ScanConfig {
  double t_lo = 1e-2, t_hi = 1e2;   // log-spaced time range
  double x_lo = 1e-2, x_hi = 50.0;  // log-spaced |x| range; x = 0 added
  int n_time = 10;                  // base level resolution per time axis
  int n_space = 10;                 // per space axis (doubled by signs)
  int levels = 3;                   // refinement levels, x1.5 nodes each
  double stability_tol = 0.05;
};

// sup |grad p| / hat_p over (t, x).
RatioScanReport scan_gradient_bound(const KernelParams& params,
                                    const ScanConfig& cfg = ScanConfig());

// sup (hat_p(u,x) ^ hat_p(r,y)) / hat_p(u+r, x+y) over signed 4-tuples.
RatioScanReport scan_3p_hat(const KernelParams& params,
                            const ScanConfig& cfg = ScanConfig());

// Same with plain densities; valid for any 0 < beta < alpha < 2.
RatioScanReport scan_3p_plain(const KernelParams& params,
                              const ScanConfig& cfg = ScanConfig());

// sup p(u,x) hat_p(r,y) / [ p(u+r,x+y) (hat_p(u,x) + hat_p(r,y)) ].
RatioScanReport scan_php(const KernelParams& params,
                         const ScanConfig& cfg = ScanConfig());

// sup and inf of density / envelope over (t, x).
RatioScanReport scan_envelope(const KernelParams& params,
                              const ScanConfig& cfg = ScanConfig());

// Pointwise factor inequality behind the gradient bound:
// |x| (t^{-2/a} ^ t^{-2/b} ^ |x|^{-2}) <= t^{-1/a} ^ t^{-1/b}.
bool gradient_factor_inequality_holds(const KernelParams& params, double t,
                                      double x);

}  // namespace kp
