#include <cmath>

#include <doctest.h>

#include "kp/errors.hpp"
#include "kp/series.hpp"

using namespace kp;

namespace {

GridSpec test_grid() {
  GridSpec g;
  g.n_time = 20;
  g.n_space = 36;
  g.L = 10.0;
  g.tol = 1e-3;
  return g;
}

const KernelParams kPure15 =
    KernelParams::pure(1.5, 1, ParamGrade::kPerturbation);

}  // namespace

TEST_CASE("order zero is the base density") {
  SeriesEngine engine(kPure15, DriftField::constant(0.3), test_grid(), 0.0,
                      0.1, 0.5);
  const double got = engine.term_at(0, 0.7);
  CHECK(got == doctest::Approx(engine.kernel().density(0.5, 0.6)));
}

TEST_CASE("order one vanishes for zero drift") {
  SeriesEngine engine(kPure15, DriftField::zero(), test_grid(), 0.0, 0.0, 0.5);
  CHECK(engine.term_at(1, 0.4) == 0.0);
  CHECK(engine.term_at(3, -0.8) == 0.0);
}

TEST_CASE("order one matches the analytic constant-drift value") {
  // p_1(s,x,t,y) = -c (t-s) (grad p)(t-s, y-x) by the convolution identity.
  const double c = 0.3;
  SeriesEngine engine(kPure15, DriftField::constant(c), test_grid(), 0.0, 0.0,
                      0.5);
  for (double y : {-0.8, -0.3, 0.4, 1.0}) {
    const double got = engine.term_at(1, y);
    const double want = -c * 0.5 * engine.kernel().gradient_signed(0.5, y);
    CHECK(std::abs(got - want) <= 1e-3 * std::abs(want));
  }
}

TEST_CASE("zero drift sums to the base kernel exactly") {
  const SeriesResult res =
      series_sum(5, 0.0, 0.0, 0.5, 0.7, DriftField::zero(), kPure15,
                 test_grid());
  CHECK(res.terms.size() >= 2);
  for (std::size_t n = 1; n < res.terms.size(); ++n)
    CHECK(res.terms[n] == 0.0);
  CHECK(res.converged);
  CHECK(res.tail_ratio == 0.0);
}

TEST_CASE("partial sums are cumulative") {
  SeriesEngine engine(kPure15, DriftField::constant(0.3), test_grid(), 0.0,
                      0.0, 0.5);
  SeriesOptions opts;
  opts.early_stop = false;
  const SeriesResult res = engine.sum_at(4, 0.4, opts);
  double acc = 0.0;
  for (std::size_t n = 0; n < res.terms.size(); ++n) {
    acc += res.terms[n];
    CHECK(res.partial_sums[n] == doctest::Approx(acc).epsilon(1e-14));
  }
}

TEST_CASE("constant-drift partial sums approach the translated kernel") {
  const double c = 0.3, t = 0.5;
  SeriesEngine engine(kPure15, DriftField::constant(c), test_grid(), 0.0, 0.0,
                      t);
  SeriesOptions opts;
  opts.early_stop = false;
  for (double y : {-0.8, -0.2, 0.4, 1.0}) {
    const SeriesResult res = engine.sum_at(8, y, opts);
    const double oracle = engine.kernel().density(t, std::abs(y - c * t));
    CHECK(std::abs(res.sum() - oracle) <= 1e-3 * oracle);
    CHECK(res.converged);
  }
}

TEST_CASE("first-order consistency in the drift strength") {
  // (ptilde[c b] - p) / c -> p_1[b] as c -> 0.
  const double c = 1e-3, t = 0.5, y = 0.45;
  GridSpec grid = test_grid();
  SeriesEngine scaled(kPure15, DriftField::constant(c), grid, 0.0, 0.0, t);
  SeriesEngine unit(kPure15, DriftField::constant(1.0), grid, 0.0, 0.0, t);
  SeriesOptions opts;
  opts.early_stop = false;
  const double ptilde = scaled.sum_at(4, y, opts).sum();
  const double p = scaled.kernel().density(t, y);
  const double deriv = (ptilde - p) / c;
  const double p1_unit = unit.term_at(1, y);
  CHECK(std::abs(deriv - p1_unit) <= 1e-2 * std::abs(p1_unit));
}

TEST_CASE("divergence detection fires for an inadmissible drift strength") {
  GridSpec grid = test_grid();
  grid.n_time = 16;
  grid.n_space = 28;
  SeriesEngine engine(kPure15, DriftField::constant(30.0), grid, 0.0, 0.0,
                      1.0);
  SeriesOptions opts;
  opts.early_stop = false;
  CHECK_THROWS_AS(engine.sum_at(8, 0.5, opts), DivergenceDetected);
}

TEST_CASE("order-wise Chapman-Kolmogorov") {
  GridSpec grid = test_grid();
  const DriftField drift = DriftField::constant(0.3);

  SUBCASE("n = 0 reduces to the base identity") {
    const double res =
        check_order_ck(0, 0.0, 0.25, 0.5, 0.0, 0.4, drift, kPure15, grid);
    SeriesEngine whole(kPure15, drift, grid, 0.0, 0.0, 0.5);
    CHECK(res <= 2e-4 * whole.term_at(0, 0.4));
  }

  SUBCASE("n = 1 constant drift") {
    const double res =
        check_order_ck(1, 0.0, 0.25, 0.5, 0.0, 0.4, drift, kPure15, grid);
    SeriesEngine whole(kPure15, drift, grid, 0.0, 0.0, 0.5);
    const double p1 = std::abs(whole.term_at(1, 0.4));
    CHECK(res <= 1e-3 * p1);
  }

  SUBCASE("n = 2 zero drift is identically zero") {
    const double res = check_order_ck(2, 0.0, 0.25, 0.5, 0.0, 0.4,
                                      DriftField::zero(), kPure15, grid);
    CHECK(res == 0.0);
  }
}

TEST_CASE("Chapman-Kolmogorov for the partial sum") {
  GridSpec grid = test_grid();

  SUBCASE("zero drift reduces to the base residual") {
    const double res = check_ck(0.0, 0.25, 0.5, 0.0, 0.4, DriftField::zero(),
                                kPure15, grid, 3);
    const double p = MixedStableKernel(kPure15).density(0.5, 0.4);
    CHECK(res <= 1e-4 * p);
  }

  SUBCASE("constant drift") {
    const DriftField drift = DriftField::constant(0.3);
    const double res =
        check_ck(0.0, 0.25, 0.5, 0.0, 0.4, drift, kPure15, grid, 6);
    const double oracle =
        MixedStableKernel(kPure15).density(0.5, std::abs(0.4 - 0.15));
    CHECK(res <= 2e-3 * oracle);
  }
}

TEST_CASE("series engine rejects invalid configurations") {
  CHECK_THROWS_AS(SeriesEngine(KernelParams::mixed(1.5, 0.8, 1.0, 1),
                               DriftField::zero(), test_grid(), 0.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(SeriesEngine(kPure15, DriftField::zero(), test_grid(), 1.0,
                               0.0, 0.5),
                  std::invalid_argument);
}
