#pragma once

#include <vector>

#include "kp/control.hpp"

namespace kp {

// Greedy interval partition with the certified per-part variation bound.
struct PartitionResult {
  std::vector<double> points;  // s = t_0 < ... < t_m = t
  int m = 0;                   // part count
  int k = 0;                   // a-priori bound on m
  double theta = 0.0;
  bool certified = false;  // per-part one-sided variation <= theta verified
};

// sup-construction partition of [s, t]: the smallest l with
// F(t^-) - F(s^+) <= l*theta, r_i = sup{u in (s,t): F(u) - F(s^+) <= i*theta},
// deduplicated. Throws JumpTooLarge if the one-sided variation condition
// fails on the resulting points (cannot happen for genuinely nondecreasing F).
PartitionResult greedy_partition(const MonotoneFn& F, double s, double t,
                                 double theta);

// Series/base density ratio bounds for the superadditive-control class:
// (1/(1-2*eta))^{1 + q/eta} for 0 < eta < 1/2, e^q at eta = 0.
double upper_bound_factor(double eta, double q_value);

// max over delta in (0, 1/2-eta) of (4*delta/(1+2*delta))^{1+q/(1/2-eta-delta)},
// located by golden-section search; always in (0, 1].
double lower_bound_factor(double eta, double q_value);

struct ClassPBounds {
  double lower = 1.0;
  double upper = 1.0;
};

// Short-window class bounds: upper (1/(1-eta))^{1+rate*elapsed/eta}, lower
// ((1-2*eta)/(1-eta))^{1+rate*elapsed/eta}.
ClassPBounds classP_bounds(double eta, double rate, double elapsed);

// C(n+k-1, k-1) * theta^n, evaluated in log space.
double binomial_term_bound(int n, int k, double theta);

enum class BoundMode { kClassN, kClassP };

struct BoundSample {
  double s = 0.0, x = 0.0, t = 0.0, y = 0.0;
  double perturbed = 0.0;  // series value at the sample
  double base = 0.0;       // base density at the sample
};

struct SampleMargin {
  BoundSample sample;
  double lower = 0.0, upper = 0.0;
  double margin = 0.0;  // min slack to either bound, relative; negative = violated
};

struct BoundVerdict {
  bool pass = false;
  std::vector<SampleMargin> margins;
};

// Checks lower*p <= ptilde <= upper*p at every sample, with the factors
// deflated/inflated by (1 -+ 5*tol) to absorb quadrature error. Throws
// BoundViolation carrying the worst offending sample.
BoundVerdict verify_bounds(const std::vector<BoundSample>& samples, double eta,
                           double q_value, BoundMode mode, double elapsed,
                           double tol);

}  // namespace kp
