#pragma once

#include <functional>

#include "kp/bump.hpp"
#include "kp/drift.hpp"
#include "kp/kernel_params.hpp"
#include "kp/quadrature.hpp"

namespace kp {

// Normalization constant A_{d,gamma} = Gamma((d-gamma)/2) /
// (2^gamma pi^{d/2} |Gamma(gamma/2)|).
double generator_constant(int dim, double gamma);

// Fractional Laplacian Delta^{gamma/2} phi(u, .) at z (d = 1):
// principal-value integral of A_{1,-gamma} |w|^{-1-gamma} against
// phi(u, z+w) - phi(u, z), with symmetric exclusion and second-order Taylor
// correction on the excluded interval.
double fractional_laplacian(const TestFunction& phi, double gamma, double u,
                            double z, double tol = 1e-9);

// Same operator applied to a purely spatial profile.
double fractional_laplacian_profile(const std::function<double(double)>& f,
                                    const std::function<double(double)>& f_dd,
                                    double support_radius, double center,
                                    double gamma, double z, double tol = 1e-9);

enum class PerturbedKernelSource {
  kSeries,            // partial sum ptilde_N from the series engine
  kBase,              // unperturbed kernel (valid for zero drift)
  kTranslatedOracle,  // p(u-s, z-x-c(u-s)) for constant drift c
};

struct WeakGeneratorOptions {
  PerturbedKernelSource source = PerturbedKernelSource::kSeries;
  double oracle_drift = 0.0;  // c for the translated oracle
  double z_margin = 30.0;     // window extension beyond the bump support
  double tol = 1e-7;
};

// Residual of the weak identity
//   int_s^inf int ptilde(s,x,u,z) [d_u phi + L phi + b . grad phi] dz du
//     + phi(s, x),
// with L = Delta^{alpha/2} + a^beta Delta^{beta/2}. Small residual certifies
// the identity on this test function.
double weak_generator_residual(double s, double x, const TestFunction& phi,
                               const DriftField& drift,
                               const KernelParams& params, const GridSpec& grid,
                               int N,
                               const WeakGeneratorOptions& opts =
                                   WeakGeneratorOptions());

}  // namespace kp
