#pragma once

#include <cmath>
#include <vector>

namespace kp {

// Parameter grade: evaluation-only admits any 0 < beta < alpha < 2 (or a = 0
// with 0 < alpha < 2); the perturbation series additionally requires
// 1 < beta < alpha < 2 (or a = 0 with 1 < alpha < 2).
enum class ParamGrade { kEvaluation, kPerturbation };

// Parameters of the symbol psi(xi) = |xi|^alpha + a^beta |xi|^beta.
struct KernelParams {
  double alpha = 1.5;
  double beta_index = 1.2;
  double a = 0.0;
  int dim = 1;

  static KernelParams pure(double alpha, int dim = 1,
                           ParamGrade grade = ParamGrade::kEvaluation);
  static KernelParams mixed(double alpha, double beta_index, double a,
                            int dim = 1,
                            ParamGrade grade = ParamGrade::kEvaluation);

  void validate(ParamGrade grade = ParamGrade::kEvaluation) const;
  bool perturbation_grade() const;

  double psi(double s) const {
    double v = std::pow(s, alpha);
    if (a > 0.0) v += std::pow(a, beta_index) * std::pow(s, beta_index);
    return v;
  }

  KernelParams with_dim(int d) const {
    KernelParams p = *this;
    p.dim = d;
    return p;
  }

  bool operator==(const KernelParams&) const = default;
};

// Elapsed time and spatial displacement; the kernel is a function of
// (t - s, y - x), so a single space-time argument suffices.
struct SpaceTimeArg {
  double t = 1.0;
  std::vector<double> x;

  SpaceTimeArg() = default;
  SpaceTimeArg(double t, double x1) : t(t), x{x1} {}
  SpaceTimeArg(double t, std::vector<double> xv) : t(t), x(std::move(xv)) {}

  double radius() const {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return std::sqrt(r2);
  }
};

}  // namespace kp
