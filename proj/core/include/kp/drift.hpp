#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace kp {

class MixedStableKernel;

// Drift field b(u, z) on R x R (series work is one-dimensional). The class
// conditions depend only on |b|; directions for the radial families are
// inward by convention.
class DriftField {
 public:
  enum class Family { kZero, kConstant, kPowerLaw, kKernelPower, kTabulated };

  static DriftField zero();
  static DriftField constant(double c);
  // |b(z)| = |z|^{1 - alpha + epsilon}, b(0) = 0, pointing toward the origin.
  static DriftField power_law(double alpha, double epsilon);
  // |b(u, z)| = p(0, 0, u, z)^{(alpha-1)/d}, evaluated through the kernel.
  static DriftField kernel_power(std::shared_ptr<const MixedStableKernel> k,
                                 double alpha, int dim);
  // Bilinear interpolation of tabulated values on a (u, z) grid.
  static DriftField tabulated(std::vector<double> u_nodes,
                              std::vector<double> z_nodes,
                              std::vector<double> values);

  Family family() const { return family_; }
  const std::string& name() const { return name_; }

  // Signed value (d = 1 component) and magnitude at (u, z).
  double component(double u, double z) const;
  double magnitude(double u, double z) const { return std::abs(component(u, z)); }

  bool is_zero() const { return family_ == Family::kZero; }
  // b independent of both u and z; enables translation tricks.
  bool translation_invariant() const {
    return family_ == Family::kZero || family_ == Family::kConstant;
  }
  bool space_only() const { return family_ != Family::kTabulated; }

  // Location of any |b| singularity (the power-law pole), or nan.
  double singular_point() const;

 private:
  DriftField() = default;

  Family family_ = Family::kZero;
  std::string name_ = "zero";
  double c_ = 0.0;
  double exponent_ = 0.0;  // power law: 1 - alpha + epsilon
  std::shared_ptr<const MixedStableKernel> kernel_;
  double kp_exponent_ = 0.0;  // kernel power: (alpha-1)/d
  std::vector<double> u_nodes_, z_nodes_, values_;
};

}  // namespace kp
