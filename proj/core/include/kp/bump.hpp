#pragma once

#include <cmath>

namespace kp {

// Smooth compactly supported bump profile exp(-1/(1-r^2)) on |r| < 1.
double bump_profile(double r);
double bump_profile_d1(double r);
double bump_profile_d2(double r);

// Separable space-time test function
//   phi(u, z) = amplitude * B((u - t_center)/t_radius) * B((z - z_center)/z_radius),
// infinitely differentiable with support
// [t_center - t_radius, t_center + t_radius] x [z_center - z_radius, z_center + z_radius].
struct TestFunction {
  double t_center = 0.5;
  double t_radius = 0.3;
  double z_center = 0.0;
  double z_radius = 1.0;
  double amplitude = 1.0;

  double time_profile(double u) const {
    return bump_profile((u - t_center) / t_radius);
  }
  double time_profile_d1(double u) const {
    return bump_profile_d1((u - t_center) / t_radius) / t_radius;
  }
  double space_profile(double z) const {
    return bump_profile((z - z_center) / z_radius);
  }
  double space_profile_d1(double z) const {
    return bump_profile_d1((z - z_center) / z_radius) / z_radius;
  }
  double space_profile_d2(double z) const {
    return bump_profile_d2((z - z_center) / z_radius) / (z_radius * z_radius);
  }

  double value(double u, double z) const {
    return amplitude * time_profile(u) * space_profile(z);
  }
  double dt(double u, double z) const {
    return amplitude * time_profile_d1(u) * space_profile(z);
  }
  double dz(double u, double z) const {
    return amplitude * time_profile(u) * space_profile_d1(z);
  }
  double dzz(double u, double z) const {
    return amplitude * time_profile(u) * space_profile_d2(z);
  }

  double sup_norm() const {
    const double b0 = bump_profile(0.0);
    return std::abs(amplitude) * b0 * b0;
  }

  double t_lo() const { return t_center - t_radius; }
  double t_hi() const { return t_center + t_radius; }
  double z_lo() const { return z_center - z_radius; }
  double z_hi() const { return z_center + z_radius; }
  bool supported_after(double s) const { return t_lo() > s; }
};

}  // namespace kp
