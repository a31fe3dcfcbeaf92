#include <cmath>
#include <random>

#include <doctest.h>

#include "kp/bounds.hpp"
#include "kp/errors.hpp"

using namespace kp;

TEST_CASE("greedy partition worked examples") {
  SUBCASE("linear control, theta = 0.4") {
    RateFn F(1.0, 0.0);
    const auto part = greedy_partition(F, 0.0, 1.0, 0.4);
    REQUIRE(part.points.size() == 4);
    CHECK(part.points[0] == doctest::Approx(0.0));
    CHECK(part.points[1] == doctest::Approx(0.4));
    CHECK(part.points[2] == doctest::Approx(0.8));
    CHECK(part.points[3] == doctest::Approx(1.0));
    CHECK(part.m == 3);
    CHECK(part.k == 3);
    CHECK(part.certified);
  }

  SUBCASE("constant control collapses to the trivial partition") {
    RateFn F(0.0, 0.0);
    const auto part = greedy_partition(F, 0.0, 1.0, 0.4);
    CHECK(part.m == 1);
    CHECK(part.points.front() == 0.0);
    CHECK(part.points.back() == 1.0);
    CHECK(part.k == 0);
  }

  SUBCASE("interior step within theta via one-sided limits") {
    StepFn F({0.5}, {0.5}, 0.0);
    const auto part = greedy_partition(F, 0.0, 1.0, 0.6);
    CHECK(part.m == 1);
    CHECK(part.points.front() == 0.0);
    CHECK(part.points.back() == 1.0);
  }

  SUBCASE("rate 0.5 on [0, 2] with theta 0.4") {
    RateFn F(0.5, 0.0);
    const auto part = greedy_partition(F, 0.0, 2.0, 0.4);
    REQUIRE(part.points.size() == 4);
    CHECK(part.points[1] == doctest::Approx(0.8));
    CHECK(part.points[2] == doctest::Approx(1.6));
    CHECK(part.m == 3);
  }

  SUBCASE("a step larger than theta is legal when isolated") {
    StepFn F({0.5}, {0.8}, 0.0);
    const auto part = greedy_partition(F, 0.0, 1.0, 0.5);
    CHECK(part.certified);
    for (int i = 0; i < part.m; ++i) {
      const double jump = F.left_limit(part.points[i + 1]) -
                          F.right_limit(part.points[i]);
      CHECK(jump <= 0.5 + 1e-9);
    }
  }
}

TEST_CASE("randomized tabulated partitions satisfy the lemma conclusions") {
  std::mt19937 rng(20240814u);
  std::uniform_int_distribution<int> n_steps(1, 10);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = n_steps(rng);
    std::vector<double> nodes, values;
    double level = 0.0;
    for (int i = 0; i < n; ++i) {
      nodes.push_back(0.05 + 0.9 * unif(rng));
      level += unif(rng);
      values.push_back(level);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    values.resize(nodes.size());
    StepFn F(nodes, values, 0.0);
    const double theta = 0.25 + unif(rng);
    const auto part = greedy_partition(F, 0.0, 1.0, theta);
    CHECK(part.m <= std::max(part.k, 1));
    CHECK(part.points.front() == 0.0);
    CHECK(part.points.back() == 1.0);
    for (int i = 0; i < part.m; ++i)
      CHECK(F.left_limit(part.points[i + 1]) -
                F.right_limit(part.points[i]) <=
            theta + 1e-9);
  }
}

namespace {
// Malicious control whose one-sided limits are inconsistent with eval; the
// open-limit certificate must reject it.
class BrokenFn : public MonotoneFn {
 public:
  double eval(double) const override { return 0.0; }
  double left_limit(double u) const override { return u > 0.9 ? 100.0 : 0.0; }
  double right_limit(double) const override { return 0.0; }
};
}  // namespace

TEST_CASE("JumpTooLarge fires when the open-limit condition fails") {
  BrokenFn F;
  CHECK_THROWS_AS(greedy_partition(F, 0.0, 1.0, 1.0), JumpTooLarge);
}

TEST_CASE("upper bound factor") {
  CHECK(upper_bound_factor(0.25, 0.0) == doctest::Approx(2.0));
  CHECK(upper_bound_factor(0.0, 1.0) == doctest::Approx(std::exp(1.0)));
  CHECK(upper_bound_factor(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(upper_bound_factor(0.1, 0.5) ==
        doctest::Approx(std::pow(1.25, 1.0 + 5.0)));
  CHECK_THROWS_AS(upper_bound_factor(0.5, 0.0), EtaOutOfRange);
  CHECK_THROWS_AS(upper_bound_factor(-0.1, 0.0), EtaOutOfRange);
}

TEST_CASE("lower bound factor") {
  // q = 0: the objective increases toward delta -> width, so the optimum sits
  // at the right edge, value 4 delta/(1+2 delta) at delta ~ 1/2 - eta.
  for (double eta : {0.0, 0.1, 0.25}) {
    const double width = 0.5 - eta;
    const double edge = 4.0 * width / (1.0 + 2.0 * width);
    CHECK(lower_bound_factor(eta, 0.0) == doctest::Approx(edge).epsilon(1e-3));
  }

  // Dense-scan oracle for q > 0.
  for (double eta : {0.1, 0.3}) {
    for (double q : {0.5, 2.0}) {
      const double width = 0.5 - eta;
      double best = 0.0;
      for (int i = 1; i < 20000; ++i) {
        const double delta = width * i / 20000.0;
        best = std::max(best, std::pow(4.0 * delta / (1.0 + 2.0 * delta),
                                       1.0 + q / (width - delta)));
      }
      CHECK(lower_bound_factor(eta, q) == doctest::Approx(best).epsilon(1e-4));
    }
  }

  // Monotone nonincreasing in q; always in (0, 1].
  double prev = lower_bound_factor(0.2, 0.0);
  CHECK(prev <= 1.0);
  for (double q : {0.5, 1.0, 2.0, 4.0}) {
    const double cur = lower_bound_factor(0.2, q);
    CHECK(cur <= prev + 1e-12);
    CHECK(cur > 0.0);
    prev = cur;
  }
  CHECK(lower_bound_factor(0.499, 1.0) < 1e-2);
  CHECK_THROWS_AS(lower_bound_factor(0.5, 0.0), EtaOutOfRange);
}

TEST_CASE("class-P bound factors") {
  const auto b = classP_bounds(0.25, 0.0, 1.0);
  CHECK(b.upper == doctest::Approx(4.0 / 3.0));
  CHECK(b.lower == doctest::Approx(2.0 / 3.0));

  for (double rate : {0.0, 0.3, 1.0})
    for (double elapsed : {0.1, 1.0, 5.0}) {
      const auto f = classP_bounds(0.2, rate, elapsed);
      CHECK(f.upper >= 1.0);
      CHECK(f.lower <= 1.0);
      CHECK(f.lower > 0.0);
    }

  // Both factors move away from 1 as the horizon grows.
  const auto f1 = classP_bounds(0.2, 0.5, 1.0);
  const auto f2 = classP_bounds(0.2, 0.5, 2.0);
  CHECK(f2.upper > f1.upper);
  CHECK(f2.lower < f1.lower);

  CHECK_THROWS_AS(classP_bounds(0.5, 0.1, 1.0), EtaOutOfRange);
  CHECK_THROWS_AS(classP_bounds(0.0, 0.1, 1.0), EtaOutOfRange);
}

TEST_CASE("binomial term bound") {
  CHECK(binomial_term_bound(0, 3, 0.4) == doctest::Approx(1.0));
  for (int n : {0, 1, 2, 5, 11})
    CHECK(binomial_term_bound(n, 1, 0.3) ==
          doctest::Approx(std::pow(0.3, n)).epsilon(1e-12));

  // Geometric-series identity: sum_n binom(n+1, 1) theta^n = 1/(1-theta)^2.
  const double theta = 0.4;
  double sum = 0.0;
  for (int n = 0; n < 200; ++n) sum += binomial_term_bound(n, 2, theta);
  CHECK(sum == doctest::Approx(1.0 / std::pow(1.0 - theta, 2)).epsilon(1e-10));

  // Large orders stay finite through the log-space evaluation.
  CHECK(std::isfinite(binomial_term_bound(400, 7, 0.9)));
  CHECK(binomial_term_bound(3, 2, 0.0) == 0.0);
}

TEST_CASE("verify_bounds verdicts") {
  std::vector<BoundSample> samples;
  for (double y : {-1.0, 0.0, 1.0}) {
    BoundSample b;
    b.t = 1.0;
    b.y = y;
    b.base = 1.0;
    b.perturbed = 1.0;  // ratio exactly 1
    samples.push_back(b);
  }

  SUBCASE("eta = 0 with no budget collapses to equality") {
    const auto v =
        verify_bounds(samples, 0.0, 0.0, BoundMode::kClassP, 1.0, 1e-3);
    CHECK(v.pass);
    for (const auto& m : v.margins) CHECK(m.margin >= 0.0);
  }

  SUBCASE("violation carries the worst sample") {
    samples[1].perturbed = 10.0;
    samples[1].x = 0.25;
    try {
      verify_bounds(samples, 0.2, 0.1, BoundMode::kClassN, 1.0, 1e-3);
      FAIL("expected BoundViolation");
    } catch (const BoundViolation& e) {
      CHECK(e.x == doctest::Approx(0.25));
      CHECK(e.margin < 0.0);
    }
  }
}

TEST_CASE("control machinery") {
  SUBCASE("rate-form reduction") {
    const ControlPair c = ControlPair::rate_form(0.25, 0.5);
    const auto F = control_to_F(c, 0.0);
    CHECK(F->eval(2.0) == doctest::Approx(1.0));
    CHECK(F->eval(0.0) == 0.0);
    CHECK(F->eval(-3.0) == 0.0);
  }

  SUBCASE("tabulated rebase keeps exact steps") {
    const ControlPair c =
        ControlPair::tabulated_form(0.1, {0.2, 0.5, 0.9}, {1.0, 2.5, 3.0});
    const auto F = control_to_F(c, 0.3);
    CHECK(F->eval(0.3) == 0.0);
    CHECK(F->eval(0.4) == 0.0);            // before the first node past s0
    CHECK(F->eval(0.6) == doctest::Approx(1.5));  // 2.5 - F(0.3) = 2.5 - 1.0
    CHECK(F->eval(1.0) == doctest::Approx(2.0));
    CHECK(F->left_limit(0.5) == 0.0);
    CHECK(F->right_limit(0.5) == doctest::Approx(1.5));
  }

  SUBCASE("superadditivity holds with equality for both forms") {
    const ControlPair rate = ControlPair::rate_form(0.1, 0.7);
    const ControlPair tab =
        ControlPair::tabulated_form(0.1, {0.1, 0.4, 0.8}, {0.3, 0.6, 1.4});
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
      double a = u(rng), b = u(rng), d = u(rng);
      if (a > b) std::swap(a, b);
      if (b > d) std::swap(b, d);
      if (a > b) std::swap(a, b);
      for (const ControlPair* c : {&rate, &tab})
        CHECK(c->Q(a, b) + c->Q(b, d) ==
              doctest::Approx(c->Q(a, d)).epsilon(1e-12));
    }
  }

  SUBCASE("step function sup and limits are exact") {
    StepFn F({0.25, 0.5}, {1.0, 3.0}, 0.0);
    CHECK(F.sup_leq(0.0, 1.0, 0.5) == doctest::Approx(0.25));
    CHECK(F.sup_leq(0.0, 1.0, 2.0) == doctest::Approx(0.5));
    CHECK(F.sup_leq(0.0, 1.0, 5.0) == doctest::Approx(1.0));
    CHECK(F.left_limit(0.25) == 0.0);
    CHECK(F.eval(0.25) == 1.0);
  }
}
