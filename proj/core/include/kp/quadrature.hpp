#pragma once

#include <functional>
#include <vector>

namespace kp {

// Tensor space-time quadrature resolution. Refinement doubles both counts.
struct GridSpec {
  int n_time = 32;
  int n_space = 48;
  double L = 12.0;               // spatial half-width of the window
  double grading_exponent = 3.0; // time-node clustering at interval endpoints
  double tol = 1e-3;             // target relative tolerance
  int max_refine = 3;

  void validate() const;
  GridSpec refined() const {
    GridSpec g = *this;
    g.n_time *= 2;
    g.n_space *= 2;
    return g;
  }
};

// Integrable endpoint singularity (t-u)^{-sigma}, sigma in [0,1).
struct SingularWeight {
  double exponent = 0.0;

  SingularWeight() = default;
  explicit SingularWeight(double sigma);
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool truncation_warning = false;
  int refinements = 0;
};

struct Integrate1dOptions {
  int max_subdivisions = 4000;
  double abs_floor = 1e-14;
  SingularWeight left;   // singularity at the lower endpoint
  SingularWeight right;  // singularity at the upper endpoint
  std::vector<double> breakpoints;  // interior points to split at up front
};

// Globally adaptive Gauss-Kronrod integration of f over [a, b].
// |result - true| <= tol*|result| + abs_floor on convergence; throws
// NumericalNonConvergence when the subdivision budget is exhausted.
IntegralResult integrate_1d(const std::function<double(double)>& f, double a,
                            double b, double tol,
                            const Integrate1dOptions& opts = {});

// Single Gauss-Kronrod 15(7) panel: returns {value, error_estimate, abs_sum}.
struct PanelResult {
  double value;
  double error;
  double abs_sum;
};
PanelResult gk15(const std::function<double(double)>& f, double a, double b);

// Cell boundaries on [a, b], n cells, clustered toward both endpoints as
// (distance)^gamma. gamma = 1 gives a uniform mesh.
std::vector<double> graded_boundaries(double a, double b, int n, double gamma);

// A spatial spike the space mesh must resolve: quadrature cells are split
// geometrically toward `center` down to width ~`scale`.
struct SpaceFeature {
  double center = 0.0;
  double scale = 1.0;
};

using SpaceFeatureFn = std::function<std::vector<SpaceFeature>(double u)>;

// One pass of the tensor-product space-time rule at fixed resolution:
// time = graded composite midpoint with endpoint-cell singularity absorption,
// space = 2-point Gauss on a base mesh refined around the slice features.
double spacetime_pass(const std::function<double(double, double)>& f, double s,
                      double t, double center, const GridSpec& grid,
                      const SingularWeight& weight,
                      const SpaceFeatureFn& features = nullptr);

// Graded-mesh quadrature of f(u, z) over (s, t) x [center-L, center+L] with
// refinement until successive doublings agree to grid.tol. `tail_estimate`,
// when provided, reports the integrand mass outside the window and sets the
// truncation warning if it exceeds grid.tol relative to the result.
IntegralResult integrate_spacetime(
    const std::function<double(double, double)>& f, double s, double t,
    const GridSpec& grid, const SingularWeight& weight, double center = 0.0,
    const SpaceFeatureFn& features = nullptr, double tail_estimate = 0.0);

}  // namespace kp
