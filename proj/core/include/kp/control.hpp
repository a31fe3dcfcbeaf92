#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace kp {

// Nondecreasing function with one-sided limit evaluation, the interface the
// greedy partition construction works against.
class MonotoneFn {
 public:
  virtual ~MonotoneFn() = default;
  virtual double eval(double u) const = 0;
  virtual double left_limit(double u) const = 0;
  virtual double right_limit(double u) const = 0;
  // sup{ v in (u_lo, u_hi) : F(v) <= c }, as a real number (the sup itself
  // need not attain F <= c).
  virtual double sup_leq(double u_lo, double u_hi, double c) const;
};

// F(u) = rate * max(0, u - s0): the rate-form control as a function.
class RateFn : public MonotoneFn {
 public:
  RateFn(double rate, double s0) : rate_(rate), s0_(s0) {}
  double eval(double u) const override {
    return u > s0_ ? rate_ * (u - s0_) : 0.0;
  }
  double left_limit(double u) const override { return eval(u); }
  double right_limit(double u) const override { return eval(u); }
  double sup_leq(double u_lo, double u_hi, double c) const override;

 private:
  double rate_, s0_;
};

// Right-continuous nondecreasing step function from a table:
// F(u) = values[k] for u in [nodes[k], nodes[k+1]), F = value_before left of
// the first node. One-sided limits and sup_leq are exact on the table.
class StepFn : public MonotoneFn {
 public:
  StepFn(std::vector<double> nodes, std::vector<double> values,
         double value_before = 0.0);
  double eval(double u) const override;
  double left_limit(double u) const override;
  double right_limit(double u) const override { return eval(u); }
  double sup_leq(double u_lo, double u_hi, double c) const override;

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> nodes_, values_;
  double value_before_;
};

// Wraps an arbitrary callable; limits taken numerically. Intended for tests
// and ad-hoc controls, not for step functions (use StepFn for exactness).
class GenericFn : public MonotoneFn {
 public:
  explicit GenericFn(std::function<double(double)> f) : f_(std::move(f)) {}
  double eval(double u) const override { return f_(u); }
  double left_limit(double u) const override;
  double right_limit(double u) const override;

 private:
  std::function<double(double)> f_;
};

// Control pair (eta, Q) with Q superadditive; both supported forms satisfy
// Q(r,u) + Q(u,v) = Q(r,v).
class ControlPair {
 public:
  static ControlPair rate_form(double eta, double rate);
  static ControlPair tabulated_form(double eta, std::vector<double> nodes,
                                    std::vector<double> values);

  double eta() const { return eta_; }
  bool is_rate() const { return is_rate_; }
  double rate() const { return rate_; }

  // Q(s, t) for s <= t (0 when s >= t).
  double Q(double s, double t) const;

  // Underlying table for the tabulated form, nullptr for the rate form.
  const StepFn* table() const { return table_.get(); }

 private:
  double eta_ = 0.0;
  bool is_rate_ = true;
  double rate_ = 0.0;
  std::shared_ptr<const StepFn> table_;
};

// Lemma-style reduction: F(u) = Q(s0, u) for u > s0 and 0 otherwise.
std::shared_ptr<MonotoneFn> control_to_F(const ControlPair& control,
                                         double s0);

}  // namespace kp
