#include <cmath>

#include <doctest.h>

#include "kp/errors.hpp"
#include "kp/kernel.hpp"
#include "kp/quadrature.hpp"

using namespace kp;

TEST_CASE("integrate_1d on smooth integrands") {
  auto sq = [](double x) { return x * x; };
  CHECK(integrate_1d(sq, 0.0, 1.0, 1e-10).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  auto s = [](double x) { return std::sin(x); };
  CHECK(integrate_1d(s, 0.0, M_PI, 1e-10).value ==
        doctest::Approx(2.0).epsilon(1e-12));

  // Reversed limits flip the sign.
  CHECK(integrate_1d(sq, 1.0, 0.0, 1e-10).value ==
        doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("Gauss-Kronrod panel is exact on low-degree polynomials") {
  auto f = [](double x) { return 5.0 * std::pow(x, 9) - 2.0 * x * x + 1.0; };
  // Exact: 5/10 - 2/3 + 1
  const PanelResult p = gk15(f, 0.0, 1.0);
  CHECK(p.value == doctest::Approx(0.5 - 2.0 / 3.0 + 1.0).epsilon(1e-14));
  CHECK(p.error < 1e-12);
}

TEST_CASE("integrate_1d with an endpoint singularity") {
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  Integrate1dOptions opts;
  opts.left = SingularWeight(0.5);
  CHECK(integrate_1d(f, 0.0, 1.0, 1e-9, opts).value ==
        doctest::Approx(2.0).epsilon(1e-8));

  auto g = [](double x) { return 1.0 / std::sqrt(1.0 - x); };
  Integrate1dOptions ropts;
  ropts.right = SingularWeight(0.5);
  CHECK(integrate_1d(g, 0.0, 1.0, 1e-9, ropts).value ==
        doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("integrate_1d error reporting is relative-first") {
  auto f = [](double x) { return std::exp(-x * x); };
  const IntegralResult r = integrate_1d(f, -6.0, 6.0, 1e-11);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-11));
  CHECK(r.error_estimate <= 1e-11 * r.value + 1e-14);
}

TEST_CASE("integrate_1d throws when the budget is exhausted") {
  // Highly oscillatory with a one-panel budget.
  auto f = [](double x) { return std::sin(1000.0 * x); };
  Integrate1dOptions opts;
  opts.max_subdivisions = 1;
  CHECK_THROWS_AS(integrate_1d(f, 0.0, 10.0, 1e-12, opts),
                  NumericalNonConvergence);
}

TEST_CASE("SingularWeight validates its exponent") {
  CHECK_THROWS_AS(SingularWeight(1.0), std::invalid_argument);
  CHECK_THROWS_AS(SingularWeight(-0.1), std::invalid_argument);
  CHECK(SingularWeight(0.0).exponent == 0.0);
}

TEST_CASE("graded boundaries cover the interval and cluster at both ends") {
  const auto b = graded_boundaries(2.0, 5.0, 16, 3.0);
  CHECK(b.front() == 2.0);
  CHECK(b.back() == 5.0);
  for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i] > b[i - 1]);
  // First cell much smaller than an interior one.
  CHECK((b[1] - b[0]) < 0.05 * (b[b.size() / 2] - b[b.size() / 2 - 1]));
}

TEST_CASE("integrate_spacetime on a constant") {
  GridSpec grid;
  grid.n_time = 8;
  grid.n_space = 8;
  grid.L = 1.0;
  grid.tol = 1e-9;
  auto f = [](double, double) { return 1.0; };
  const IntegralResult r =
      integrate_spacetime(f, 0.0, 1.0, grid, SingularWeight(0.0));
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("integrate_spacetime with a right-endpoint singular factor") {
  GridSpec grid;
  grid.n_time = 16;
  grid.n_space = 8;
  grid.L = 1.0;
  grid.tol = 1e-6;
  grid.max_refine = 5;
  auto f = [](double u, double) { return 1.0 / std::sqrt(1.0 - u); };
  const IntegralResult r =
      integrate_spacetime(f, 0.0, 1.0, grid, SingularWeight(0.5));
  CHECK(r.value == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("integrate_spacetime matches a refinement-extrapolated oracle") {
  // f(u, z) = p(u, z) d_z p(1-u, y-z): the first iterated-kernel integrand,
  // singular at both time endpoints.
  const KernelParams P = KernelParams::pure(1.5, 1);
  KernelOptions ko;
  ko.fast = true;
  MixedStableKernel k(P, ko);
  const double y = 0.3;
  auto f = [&](double u, double z) {
    return k.density(u, std::abs(z)) * (-k.gradient_signed(1.0 - u, y - z));
  };
  auto features = [&](double u) {
    std::vector<SpaceFeature> fs;
    fs.push_back({0.0, std::pow(std::max(u, 1e-12), 1.0 / 1.5)});
    fs.push_back({y, std::pow(std::max(1.0 - u, 1e-12), 1.0 / 1.5)});
    return fs;
  };

  GridSpec grid;
  grid.n_time = 12;
  grid.n_space = 24;
  grid.L = 10.0;
  const SingularWeight w(1.0 / 1.5);
  const double i1 = spacetime_pass(f, 0.0, 1.0, 0.0, grid, w, features);
  const double i2 =
      spacetime_pass(f, 0.0, 1.0, 0.0, grid.refined(), w, features);
  const double i4 =
      spacetime_pass(f, 0.0, 1.0, 0.0, grid.refined().refined(), w, features);
  // Aitken extrapolation of the refinement sequence as the oracle.
  const double d1 = i2 - i1, d2 = i4 - i2;
  const double oracle = std::abs(d1 - d2) > 0.0 ? i4 + d2 * d2 / (d1 - d2) : i4;
  CHECK(std::isfinite(oracle));
  CHECK(std::abs(i4 - oracle) <= 1e-3 * std::abs(oracle));
  // The convolution identity gives the exact value -G(1, y).
  CHECK(i4 == doctest::Approx(-k.gradient_signed(1.0, y)).epsilon(2e-3));
}

TEST_CASE("refinement convergence claim holds on a smooth integrand") {
  GridSpec grid;
  grid.n_time = 8;
  grid.n_space = 8;
  grid.L = 2.0;
  grid.tol = 1e-5;
  grid.max_refine = 6;
  auto f = [](double u, double z) { return std::exp(-z * z) * (1.0 + u); };
  const IntegralResult r =
      integrate_spacetime(f, 0.0, 1.0, grid, SingularWeight(0.0));
  const double want = 1.5 * std::sqrt(M_PI) * std::erf(2.0);
  CHECK(r.value == doctest::Approx(want).epsilon(1e-4));
  CHECK(r.error_estimate <= grid.tol * std::abs(r.value) + 1e-12);
}

TEST_CASE("GridSpec validation") {
  GridSpec g;
  g.n_time = 2;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = GridSpec();
  g.tol = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = GridSpec();
  g.L = -1.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
