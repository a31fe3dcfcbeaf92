#pragma once

#include <memory>
#include <vector>

#include "kp/control.hpp"
#include "kp/drift.hpp"
#include "kp/kernel.hpp"
#include "kp/quadrature.hpp"

namespace kp {

// Sample pairs (x, y) over which class membership is probed; suprema over
// all of space are not computable, so certification is per sample set.
struct SampleSet {
  std::vector<std::pair<double, double>> pairs;

  // 7x7 grid spanning near/far regimes plus the diagonal x = y.
  static SampleSet default_grid();
};

// Shared state for the drift-functional evaluations: one fast kernel per
// parameter set, reused across samples and bisection steps.
class ConditionsEngine {
 public:
  ConditionsEngine(const KernelParams& params, DriftField drift,
                   GridSpec grid);

  const MixedStableKernel& kernel() const { return *kernel_; }
  const DriftField& drift() const { return drift_; }
  const GridSpec& grid() const { return grid_; }

  // [ int_s^t int p(s,x,u,z) |b| |grad_z p(u,z,t,y)| dz du ] / p(s,x,t,y).
  double kato_functional(double s, double x, double t, double y) const;

  // Largest h (log-bisection on [1e-4, 1e2], 40 iterations) with
  // max over samples of the functional at t - s = h below eta_target.
  struct ClassPEstimate {
    double h = 0.0;
    bool found = false;
    bool unbounded = false;  // functional never exceeded eta on the bracket
    double measured = 0.0;   // max functional at the returned h
  };
  ClassPEstimate estimate_class_P(double eta_target,
                                  const SampleSet& samples) const;

  // Factorized-bound integral int int (hat_p(s,x,u,z) + hat_p(u,z,t,y)) |b|,
  // with the measured ratio kato/split attached.
  struct SplitBound {
    double value = 0.0;
    double kato = 0.0;
    double ratio = 0.0;
  };
  SplitBound split_bound(double s, double x, double t, double y) const;

  // Throws BoundViolation when the class-P certificate (functional <= eta on
  // windows of length h, inflated by 1 + 5 tol) fails on the samples.
  double certify_class_P(double eta, double h, const SampleSet& samples) const;

 private:
  double kato_numerator(double s, double x, double t, double y) const;

  KernelParams params_;
  DriftField drift_;
  GridSpec grid_;
  std::shared_ptr<const MixedStableKernel> kernel_;
};

// Remark-style conversion: class P data (eta, h) to the rate-form control
// with rate eta / h.
ControlPair to_class_N(double eta, double h);

// int_0^t hat_p^1(u, x) du for the unit-weight kernel.
double time_integrated_hat(double t, double x, const KernelParams& params,
                           double tol = 1e-7);

// Small-ball Kato-class diagnostic: values of
// sup_x int_{|z-x|<eps} |b(z)| |z-x|^{gamma-(d+1)} dz on shrinking eps.
struct KatoIndicator {
  std::vector<double> epsilons;
  std::vector<double> values;
  bool decays = false;
  double decay_ratio = 0.0;  // last / first
};

KatoIndicator kato_class_indicator(const DriftField& drift, double gamma,
                                   const std::vector<double>& probe_radii);

}  // namespace kp
