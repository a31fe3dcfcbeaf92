#include "kp/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kp {

double MonotoneFn::sup_leq(double u_lo, double u_hi, double c) const {
  // Bisection on a nondecreasing function; returns u_lo if even values just
  // above u_lo exceed c.
  double lo = u_lo, hi = u_hi;
  if (eval(hi) <= c || left_limit(hi) <= c) return u_hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (eval(mid) <= c ? lo : hi) = mid;
  }
  return lo == u_lo ? u_lo : lo;
}

double RateFn::sup_leq(double u_lo, double u_hi, double c) const {
  if (c < 0.0) return u_lo;
  if (rate_ <= 0.0) return u_hi;
  const double u_star = s0_ + c / rate_;
  return std::clamp(u_star, u_lo, u_hi);
}

StepFn::StepFn(std::vector<double> nodes, std::vector<double> values,
               double value_before)
    : nodes_(std::move(nodes)),
      values_(std::move(values)),
      value_before_(value_before) {
  if (nodes_.empty() || nodes_.size() != values_.size())
    throw std::invalid_argument("StepFn: node/value size mismatch");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("StepFn: nodes must be strictly increasing");
  double prev = value_before_;
  for (double v : values_) {
    if (v < prev) throw std::invalid_argument("StepFn: values must be nondecreasing");
    prev = v;
  }
}

double StepFn::eval(double u) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), u);
  if (it == nodes_.begin()) return value_before_;
  return values_[static_cast<std::size_t>(it - nodes_.begin()) - 1];
}

double StepFn::left_limit(double u) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), u);
  if (it == nodes_.begin()) return value_before_;
  return values_[static_cast<std::size_t>(it - nodes_.begin()) - 1];
}

double StepFn::sup_leq(double u_lo, double u_hi, double c) const {
  // {F <= c} = (-inf, u*) with u* the first node whose value exceeds c.
  if (value_before_ > c) return u_lo;
  auto it = std::upper_bound(
      values_.begin(), values_.end(), c,
      [](double cc, double v) { return cc < v; });
  if (it == values_.end()) return u_hi;
  const double u_star = nodes_[static_cast<std::size_t>(it - values_.begin())];
  return std::clamp(u_star, u_lo, u_hi);
}

double GenericFn::left_limit(double u) const {
  const double eps = 1e-9 * (1.0 + std::abs(u));
  return f_(u - eps);
}

double GenericFn::right_limit(double u) const {
  const double eps = 1e-9 * (1.0 + std::abs(u));
  return f_(u + eps);
}

ControlPair ControlPair::rate_form(double eta, double rate) {
  if (eta < 0.0) throw std::invalid_argument("ControlPair: eta must be >= 0");
  if (rate < 0.0) throw std::invalid_argument("ControlPair: rate must be >= 0");
  ControlPair c;
  c.eta_ = eta;
  c.is_rate_ = true;
  c.rate_ = rate;
  return c;
}

ControlPair ControlPair::tabulated_form(double eta, std::vector<double> nodes,
                                        std::vector<double> values) {
  if (eta < 0.0) throw std::invalid_argument("ControlPair: eta must be >= 0");
  ControlPair c;
  c.eta_ = eta;
  c.is_rate_ = false;
  c.table_ = std::make_shared<StepFn>(std::move(nodes), std::move(values));
  return c;
}

double ControlPair::Q(double s, double t) const {
  if (!(t > s)) return 0.0;
  if (is_rate_) return rate_ * (t - s);
  return table_->eval(t) - table_->eval(s);
}

std::shared_ptr<MonotoneFn> control_to_F(const ControlPair& control,
                                         double s0) {
  if (control.is_rate())
    return std::make_shared<RateFn>(control.rate(), s0);
  // Rebase the table: F(u) = Q(s0, u) = F_tab(u) - F_tab(s0) for u > s0,
  // 0 otherwise. Nodes at or before s0 fold into the zero plateau.
  const StepFn* tab = control.table();
  const double base = tab->eval(s0);
  std::vector<double> nodes, values;
  for (std::size_t k = 0; k < tab->nodes().size(); ++k) {
    if (tab->nodes()[k] > s0) {
      nodes.push_back(tab->nodes()[k]);
      values.push_back(std::max(0.0, tab->values()[k] - base));
    }
  }
  if (nodes.empty()) return std::make_shared<RateFn>(0.0, s0);
  return std::make_shared<StepFn>(std::move(nodes), std::move(values), 0.0);
}

}  // namespace kp
