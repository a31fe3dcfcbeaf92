#include <cmath>

#include <doctest.h>

#include "kp/generator.hpp"
#include "kp/quadrature.hpp"
#include "kp/series.hpp"

using namespace kp;

namespace {

// Fourier-symbol route: Delta^{gamma/2} phi(z) =
// -(1/pi) int_0^inf xi^gamma [A(xi) cos(xi z) + B(xi) sin(xi z)] dxi,
// with A, B the cosine/sine transforms of the profile. Independent of the
// principal-value path under test.
double spectral_fractional_laplacian(const TestFunction& phi, double gamma,
                                     double u, double z) {
  const double amp = phi.amplitude * phi.time_profile(u);
  const double lo = phi.z_lo(), hi = phi.z_hi();
  auto transform_pair = [&](double xi, double& A, double& B) {
    auto fc = [&](double w) { return phi.space_profile(w) * std::cos(xi * w); };
    auto fs = [&](double w) { return phi.space_profile(w) * std::sin(xi * w); };
    A = integrate_1d(fc, lo, hi, 1e-10).value;
    B = integrate_1d(fs, lo, hi, 1e-10).value;
  };
  auto outer = [&](double xi) {
    double A, B;
    transform_pair(xi, A, B);
    return std::pow(xi, gamma) *
           (A * std::cos(xi * z) + B * std::sin(xi * z));
  };
  const double xi_max = 260.0;  // bump transforms decay like exp(-c sqrt(xi))
  return -amp / M_PI * integrate_1d(outer, 0.0, xi_max, 1e-8).value;
}

}  // namespace

TEST_CASE("generator constant matches the standard 1-d normalization") {
  // c_{1,gamma} = gamma 2^{gamma-1} Gamma((1+gamma)/2) /
  //               (sqrt(pi) Gamma(1 - gamma/2))
  for (double gamma : {1.2, 1.5, 1.8}) {
    const double want = gamma * std::pow(2.0, gamma - 1.0) *
                        std::tgamma(0.5 * (1.0 + gamma)) /
                        (std::sqrt(M_PI) * std::tgamma(1.0 - 0.5 * gamma));
    CHECK(generator_constant(1, -gamma) ==
          doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("fractional Laplacian is linear and vanishes on the zero function") {
  TestFunction phi{0.5, 0.3, 0.0, 1.0, 0.0};  // zero amplitude
  CHECK(fractional_laplacian(phi, 1.5, 0.5, 0.2) == 0.0);

  TestFunction unit{0.5, 0.3, 0.0, 1.0, 1.0};
  TestFunction twice{0.5, 0.3, 0.0, 1.0, 2.0};
  const double v1 = fractional_laplacian(unit, 1.5, 0.5, 0.2);
  const double v2 = fractional_laplacian(twice, 1.5, 0.5, 0.2);
  CHECK(v2 == doctest::Approx(2.0 * v1).epsilon(1e-12));
}

TEST_CASE("fractional Laplacian is translation-equivariant") {
  const double h = 0.37;
  TestFunction phi{0.5, 0.3, 0.0, 1.0, 1.0};
  TestFunction shifted = phi;
  shifted.z_center += h;
  for (double z : {0.1, 0.6, 1.4}) {
    const double a = fractional_laplacian(shifted, 1.5, 0.5, z);
    const double b = fractional_laplacian(phi, 1.5, 0.5, z - h);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
  }
}

TEST_CASE("fractional Laplacian against the Fourier-symbol oracle") {
  TestFunction phi{0.5, 0.3, 0.1, 0.9, 1.0};
  for (double gamma : {1.2, 1.5}) {
    for (double z : {0.1, 0.55, 1.3}) {  // inside and outside the support
      const double pv = fractional_laplacian(phi, gamma, 0.5, z);
      const double spec = spectral_fractional_laplacian(phi, gamma, 0.5, z);
      CHECK(std::abs(pv - spec) <= 1e-4 * std::max(std::abs(spec), 1e-6));
    }
  }
}

TEST_CASE("weak identity for the unperturbed pure kernel") {
  const KernelParams P = KernelParams::pure(1.5, 1, ParamGrade::kPerturbation);
  GridSpec grid;
  grid.n_time = 16;
  grid.n_space = 24;
  grid.L = 8.0;
  TestFunction phi{0.6, 0.35, 0.2, 0.8, 1.0};
  const double res =
      weak_generator_residual(0.0, 0.1, phi, DriftField::zero(), P, grid, 0);
  CHECK(res <= 1e-3 * phi.sup_norm());
}

TEST_CASE("weak identity for the translated-kernel oracle") {
  const KernelParams P = KernelParams::pure(1.5, 1, ParamGrade::kPerturbation);
  GridSpec grid;
  grid.n_time = 16;
  grid.n_space = 24;
  grid.L = 8.0;
  TestFunction phi{0.6, 0.35, 0.2, 0.8, 1.0};
  WeakGeneratorOptions opts;
  opts.source = PerturbedKernelSource::kTranslatedOracle;
  opts.oracle_drift = 0.3;
  const double res = weak_generator_residual(0.0, 0.1, phi,
                                             DriftField::constant(0.3), P,
                                             grid, 0, opts);
  CHECK(res <= 1e-3 * phi.sup_norm());
}

TEST_CASE("weak identity via the series for a small constant drift") {
  const KernelParams P = KernelParams::pure(1.5, 1, ParamGrade::kPerturbation);
  GridSpec grid;
  grid.n_time = 16;
  grid.n_space = 28;
  grid.L = 8.0;
  TestFunction phi{0.5, 0.25, 0.1, 0.6, 1.0};
  const double res = weak_generator_residual(0.0, 0.1, phi,
                                             DriftField::constant(0.15), P,
                                             grid, 4);
  CHECK(res <= 2e-3 * phi.sup_norm());
}

TEST_CASE("test function dying before s leaves a zero residual") {
  const KernelParams P = KernelParams::pure(1.5, 1, ParamGrade::kPerturbation);
  GridSpec grid;
  TestFunction phi{-1.0, 0.3, 0.0, 1.0, 1.0};  // support in (-1.3, -0.7)
  const double res =
      weak_generator_residual(0.0, 0.1, phi, DriftField::zero(), P, grid, 0);
  CHECK(res == 0.0);
}

TEST_CASE("bump profile derivatives are consistent") {
  for (double r : {0.0, 0.3, 0.7, 0.95}) {
    const double h = 1e-5;
    const double fd1 = (bump_profile(r + h) - bump_profile(r - h)) / (2 * h);
    CHECK(bump_profile_d1(r) == doctest::Approx(fd1).epsilon(1e-5));
    const double fd2 =
        (bump_profile(r + h) - 2 * bump_profile(r) + bump_profile(r - h)) /
        (h * h);
    CHECK(bump_profile_d2(r) == doctest::Approx(fd2).epsilon(1e-4));
  }
  CHECK(bump_profile(1.0) == 0.0);
  CHECK(bump_profile_d1(1.0) == 0.0);
  CHECK(bump_profile(1.5) == 0.0);
}
