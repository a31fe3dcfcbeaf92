#include "kp/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace kp {

CubicSpline::CubicSpline(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  const std::size_t n = xs_.size();
  if (n < 3 || ys_.size() != n)
    throw std::invalid_argument("CubicSpline: need >= 3 matching nodes");
  for (std::size_t i = 1; i < n; ++i)
    if (!(xs_[i] > xs_[i - 1]))
      throw std::invalid_argument("CubicSpline: nodes must be increasing");

  y2_.assign(n, 0.0);
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double sig = (xs_[i] - xs_[i - 1]) / (xs_[i + 1] - xs_[i - 1]);
    const double p = sig * y2_[i - 1] + 2.0;
    y2_[i] = (sig - 1.0) / p;
    u[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]) -
           (ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1]);
    u[i] = (6.0 * u[i] / (xs_[i + 1] - xs_[i - 1]) - sig * u[i - 1]) / p;
  }
  for (std::size_t k = n - 1; k-- > 0;) y2_[k] = y2_[k] * y2_[k + 1] + u[k];
}

double CubicSpline::operator()(double x) const {
  const std::size_t n = xs_.size();
  std::size_t hi = static_cast<std::size_t>(
      std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
  if (hi == 0) hi = 1;
  if (hi >= n) hi = n - 1;
  const std::size_t lo = hi - 1;
  const double h = xs_[hi] - xs_[lo];
  const double A = (xs_[hi] - x) / h;
  const double B = (x - xs_[lo]) / h;
  return A * ys_[lo] + B * ys_[hi] +
         ((A * A * A - A) * y2_[lo] + (B * B * B - B) * y2_[hi]) * (h * h) /
             6.0;
}

}  // namespace kp
