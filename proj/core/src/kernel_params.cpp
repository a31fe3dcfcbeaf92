#include "kp/kernel_params.hpp"

#include <stdexcept>
#include <string>

#include "kp/errors.hpp"

namespace kp {

KernelParams KernelParams::pure(double alpha, int dim, ParamGrade grade) {
  KernelParams p;
  p.alpha = alpha;
  p.beta_index = 0.5 * alpha;  // unused while a = 0
  p.a = 0.0;
  p.dim = dim;
  p.validate(grade);
  return p;
}

KernelParams KernelParams::mixed(double alpha, double beta_index, double a,
                                 int dim, ParamGrade grade) {
  KernelParams p;
  p.alpha = alpha;
  p.beta_index = beta_index;
  p.a = a;
  p.dim = dim;
  p.validate(grade);
  return p;
}

void KernelParams::validate(ParamGrade grade) const {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("KernelParams: alpha must be in (0,2)");
  if (a < 0.0) throw std::invalid_argument("KernelParams: a must be >= 0");
  if (a > 0.0 && !(beta_index > 0.0 && beta_index < alpha))
    throw std::invalid_argument(
        "KernelParams: need 0 < beta < alpha when a > 0");
  if (dim != 1 && dim != 3)
    throw UnsupportedDimension("KernelParams: dim must be 1 or 3, got " +
                               std::to_string(dim));
  if (grade == ParamGrade::kPerturbation && !perturbation_grade())
    throw std::invalid_argument(
        "KernelParams: perturbation use requires 1 < beta < alpha < 2 "
        "(or a = 0 with 1 < alpha < 2)");
}

bool KernelParams::perturbation_grade() const {
  if (a > 0.0) return beta_index > 1.0 && beta_index < alpha && alpha < 2.0;
  return alpha > 1.0 && alpha < 2.0;
}

}  // namespace kp
