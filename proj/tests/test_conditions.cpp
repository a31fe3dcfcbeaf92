#include <cmath>
#include <random>

#include <doctest.h>

#include "kp/conditions.hpp"
#include "kp/errors.hpp"

using namespace kp;

namespace {

GridSpec cond_grid() {
  GridSpec g;
  g.n_time = 20;
  g.n_space = 32;
  g.L = 8.0;
  g.tol = 1e-3;
  return g;
}

const KernelParams kPure15 =
    KernelParams::pure(1.5, 1, ParamGrade::kPerturbation);
const KernelParams kMixed =
    KernelParams::mixed(1.5, 1.2, 1.0, 1, ParamGrade::kPerturbation);

}  // namespace

TEST_CASE("zero drift has zero functional") {
  ConditionsEngine eng(kPure15, DriftField::zero(), cond_grid());
  CHECK(eng.kato_functional(0.0, 0.3, 0.5, -0.2) == 0.0);
}

TEST_CASE("constant drift scales as 2^{1-1/alpha} at the diagonal") {
  ConditionsEngine eng(kPure15, DriftField::constant(0.3), cond_grid());
  const double T = 0.1;
  const double k1 = eng.kato_functional(0.0, 0.0, T, 0.0);
  const double k2 = eng.kato_functional(0.0, 0.0, 2.0 * T, 0.0);
  const double want = std::pow(2.0, 1.0 - 1.0 / 1.5);
  CHECK(k2 / k1 == doctest::Approx(want).epsilon(0.05));
}

TEST_CASE("functional is 1-homogeneous in the drift magnitude") {
  ConditionsEngine e1(kPure15, DriftField::constant(0.3), cond_grid());
  ConditionsEngine e2(kPure15, DriftField::constant(0.6), cond_grid());
  const double k1 = e1.kato_functional(0.0, 0.2, 0.4, -0.1);
  const double k2 = e2.kato_functional(0.0, 0.2, 0.4, -0.1);
  CHECK(k2 == doctest::Approx(2.0 * k1).epsilon(1e-6));
}

TEST_CASE("power-law drift keeps the functional finite") {
  ConditionsEngine eng(kMixed, DriftField::power_law(1.5, 0.1), cond_grid());
  for (auto [x, y] : {std::pair{0.0, 0.0}, {0.0, 0.5}, {-0.4, 0.4}}) {
    const double v = eng.kato_functional(0.0, x, 0.5, y);
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
}

TEST_CASE("class-P estimation") {
  SampleSet samples;
  samples.pairs = {{0.0, 0.0}, {0.0, 0.3}, {0.5, 0.5}, {-0.3, 0.3}};

  SUBCASE("zero drift is unbounded") {
    ConditionsEngine eng(kPure15, DriftField::zero(), cond_grid());
    const auto est = eng.estimate_class_P(0.25, samples);
    CHECK(est.found);
    CHECK(est.unbounded);
    CHECK(est.h == doctest::Approx(100.0));
  }

  SUBCASE("constant drift yields a finite h at the target") {
    ConditionsEngine eng(kPure15, DriftField::constant(0.3), cond_grid());
    const auto est = eng.estimate_class_P(0.25, samples);
    CHECK(est.found);
    CHECK_FALSE(est.unbounded);
    CHECK(est.h > 0.0);
    CHECK(est.measured == doctest::Approx(0.25).epsilon(0.05));

    // Remark-style consistency: windows shorter than h stay below eta.
    const double tol = cond_grid().tol;
    for (double frac : {0.3, 0.7, 1.0}) {
      double worst = 0.0;
      for (auto [x, y] : samples.pairs)
        worst = std::max(worst,
                         eng.kato_functional(0.0, x, frac * est.h, y));
      CHECK(worst <= 0.25 * (1.0 + 5.0 * tol));
    }
  }
}

TEST_CASE("class-N conversion") {
  const ControlPair c = to_class_N(0.25, 0.5);
  CHECK(c.eta() == 0.25);
  CHECK(c.rate() == doctest::Approx(0.5));
  CHECK(to_class_N(0.1, 1.0).rate() == doctest::Approx(0.1));

  // Superadditivity holds with equality for the rate form.
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    double r = u(rng), m = u(rng), v = u(rng);
    if (r > m) std::swap(r, m);
    if (m > v) std::swap(m, v);
    if (r > m) std::swap(r, m);
    CHECK(c.Q(r, m) + c.Q(m, v) == doctest::Approx(c.Q(r, v)).epsilon(1e-12));
  }
}

TEST_CASE("definition-style bound with the converted control") {
  ConditionsEngine eng(kPure15, DriftField::constant(0.3), cond_grid());
  SampleSet samples;
  samples.pairs = {{0.0, 0.0}, {0.0, 0.3}, {0.5, 0.5}};
  const auto est = eng.estimate_class_P(0.25, samples);
  REQUIRE(est.found);
  const ControlPair control = to_class_N(0.25, est.h);
  const double tol = cond_grid().tol;
  for (double horizon : {est.h, 2.0 * est.h, 3.0 * est.h}) {
    for (auto [x, y] : samples.pairs) {
      const double k = eng.kato_functional(0.0, x, horizon, y);
      CHECK(k <= (0.25 + control.Q(0.0, horizon)) * (1.0 + 5.0 * tol));
    }
  }
}

TEST_CASE("split bound dominates and stays stable across horizons") {
  ConditionsEngine eng(kPure15, DriftField::constant(0.3), cond_grid());

  SUBCASE("zero drift gives zero") {
    ConditionsEngine zero(kPure15, DriftField::zero(), cond_grid());
    const auto sb = zero.split_bound(0.0, 0.1, 0.5, -0.1);
    CHECK(sb.value == 0.0);
    CHECK(sb.kato == 0.0);
  }

  SUBCASE("ratio kato/split is stable within 20 percent across horizons") {
    const auto a = eng.split_bound(0.0, 0.0, 0.25, 0.0);
    const auto b = eng.split_bound(0.0, 0.0, 0.5, 0.0);
    CHECK(a.value > 0.0);
    CHECK(b.value > 0.0);
    CHECK(std::abs(a.ratio - b.ratio) <= 0.2 * std::max(a.ratio, b.ratio));
  }

  SUBCASE("power-law drift stays finite") {
    ConditionsEngine pl(kMixed, DriftField::power_law(1.5, 0.1), cond_grid());
    const auto sb = pl.split_bound(0.0, 0.0, 0.5, 0.3);
    CHECK(std::isfinite(sb.value));
    CHECK(sb.value > 0.0);
  }
}

TEST_CASE("time-integrated hat kernel") {
  CHECK_THROWS_AS(time_integrated_hat(1.0, 0.0, kMixed), std::invalid_argument);
  CHECK_THROWS_AS(time_integrated_hat(1.0, 1.0, kPure15), std::invalid_argument);

  // Monotone in t.
  const double v1 = time_integrated_hat(0.5, 1.0, kMixed);
  const double v2 = time_integrated_hat(1.0, 1.0, kMixed);
  const double v3 = time_integrated_hat(2.0, 1.0, kMixed);
  CHECK(v1 > 0.0);
  CHECK(v2 >= v1);
  CHECK(v3 >= v2);

  // Small-|x| slope approaches alpha - (d+1) = -0.5.
  const double w1 = time_integrated_hat(1.0, 0.08, kMixed);
  const double w2 = time_integrated_hat(1.0, 0.2, kMixed);
  const double slope = std::log(w2 / w1) / std::log(0.2 / 0.08);
  CHECK(std::abs(slope - (-0.5)) <= 0.15);
}

TEST_CASE("Kato-class indicator") {
  const std::vector<double> probes = {0.0, 0.25, 0.5, 1.0, 2.0};

  SUBCASE("bounded drift decays at any admissible gamma") {
    const KatoIndicator ki =
        kato_class_indicator(DriftField::constant(0.7), 1.5, probes);
    CHECK(ki.decays);
    CHECK(ki.values.front() > ki.values.back());
  }

  SUBCASE("power-law drift separates gamma = alpha from gamma = beta") {
    const DriftField b = DriftField::power_law(1.5, 0.1);
    const KatoIndicator at_alpha = kato_class_indicator(b, 1.5, probes);
    const KatoIndicator at_beta = kato_class_indicator(b, 1.2, probes);
    CHECK(at_alpha.decays);
    CHECK_FALSE(at_beta.decays);
  }

  SUBCASE("membership at beta implies membership at alpha on the probe set") {
    for (const DriftField& b :
         {DriftField::constant(0.7), DriftField::power_law(1.5, 0.1)}) {
      const bool at_beta = kato_class_indicator(b, 1.2, probes).decays;
      const bool at_alpha = kato_class_indicator(b, 1.5, probes).decays;
      if (at_beta) CHECK(at_alpha);
    }
  }

  SUBCASE("preconditions") {
    CHECK_THROWS_AS(kato_class_indicator(DriftField::constant(1.0), 0.9,
                                         probes),
                    std::invalid_argument);
  }
}

TEST_CASE("class-P certificate violation") {
  ConditionsEngine eng(kPure15, DriftField::constant(0.3), cond_grid());
  SampleSet samples;
  samples.pairs = {{0.0, 0.0}, {0.0, 0.3}};
  const auto est = eng.estimate_class_P(0.25, samples);
  REQUIRE(est.found);
  CHECK_NOTHROW(eng.certify_class_P(0.25, est.h, samples));
  CHECK_THROWS_AS(eng.certify_class_P(0.125, est.h, samples), BoundViolation);
}
