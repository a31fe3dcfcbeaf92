#include "kp/bump.hpp"

namespace kp {

double bump_profile(double r) {
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r2));
}

double bump_profile_d1(double r) {
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  const double q = 1.0 - r2;
  return bump_profile(r) * (-2.0 * r / (q * q));
}

double bump_profile_d2(double r) {
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  const double q = 1.0 - r2;
  const double g1 = -2.0 * r / (q * q);           // (d/dr) of -1/(1-r^2)
  const double g2 = -2.0 / (q * q) - 8.0 * r2 / (q * q * q);
  return bump_profile(r) * (g1 * g1 + g2);
}

}  // namespace kp
