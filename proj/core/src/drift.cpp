#include "kp/drift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kp/kernel.hpp"

namespace kp {

DriftField DriftField::zero() { return DriftField(); }

DriftField DriftField::constant(double c) {
  DriftField d;
  d.family_ = Family::kConstant;
  d.name_ = "constant";
  d.c_ = c;
  return d;
}

DriftField DriftField::power_law(double alpha, double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("power_law drift: epsilon must be positive");
  DriftField d;
  d.family_ = Family::kPowerLaw;
  d.name_ = "power_law";
  d.exponent_ = 1.0 - alpha + epsilon;
  return d;
}

DriftField DriftField::kernel_power(std::shared_ptr<const MixedStableKernel> k,
                                    double alpha, int dim) {
  if (!k) throw std::invalid_argument("kernel_power drift: null kernel");
  DriftField d;
  d.family_ = Family::kKernelPower;
  d.name_ = "kernel_power";
  d.kernel_ = std::move(k);
  d.kp_exponent_ = (alpha - 1.0) / dim;
  return d;
}

DriftField DriftField::tabulated(std::vector<double> u_nodes,
                                 std::vector<double> z_nodes,
                                 std::vector<double> values) {
  if (u_nodes.size() < 2 || z_nodes.size() < 2 ||
      values.size() != u_nodes.size() * z_nodes.size())
    throw std::invalid_argument("tabulated drift: inconsistent grid");
  DriftField d;
  d.family_ = Family::kTabulated;
  d.name_ = "tabulated";
  d.u_nodes_ = std::move(u_nodes);
  d.z_nodes_ = std::move(z_nodes);
  d.values_ = std::move(values);
  return d;
}

double DriftField::component(double u, double z) const {
  switch (family_) {
    case Family::kZero:
      return 0.0;
    case Family::kConstant:
      return c_;
    case Family::kPowerLaw: {
      if (z == 0.0) return 0.0;
      const double mag = std::pow(std::abs(z), exponent_);
      return z > 0.0 ? -mag : mag;  // inward
    }
    case Family::kKernelPower: {
      if (u <= 0.0) return 0.0;
      const double p = kernel_->density(u, std::abs(z));
      if (p <= 0.0) return 0.0;
      const double mag = std::pow(p, kp_exponent_);
      if (z == 0.0) return mag;  // direction undefined at the pole
      return z > 0.0 ? -mag : mag;
    }
    case Family::kTabulated: {
      const auto& us = u_nodes_;
      const auto& zs = z_nodes_;
      const double uc = std::clamp(u, us.front(), us.back());
      const double zc = std::clamp(z, zs.front(), zs.back());
      auto cell = [](const std::vector<double>& nodes, double v) {
        std::size_t hi = static_cast<std::size_t>(
            std::upper_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
        if (hi == 0) hi = 1;
        if (hi >= nodes.size()) hi = nodes.size() - 1;
        return hi;
      };
      const std::size_t iu = cell(us, uc), iz = cell(zs, zc);
      const double fu = (uc - us[iu - 1]) / (us[iu] - us[iu - 1]);
      const double fz = (zc - zs[iz - 1]) / (zs[iz] - zs[iz - 1]);
      const std::size_t nz = zs.size();
      const double v00 = values_[(iu - 1) * nz + (iz - 1)];
      const double v01 = values_[(iu - 1) * nz + iz];
      const double v10 = values_[iu * nz + (iz - 1)];
      const double v11 = values_[iu * nz + iz];
      return (1 - fu) * ((1 - fz) * v00 + fz * v01) +
             fu * ((1 - fz) * v10 + fz * v11);
    }
  }
  return 0.0;
}

double DriftField::singular_point() const {
  if (family_ == Family::kPowerLaw && exponent_ < 0.0) return 0.0;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace kp
