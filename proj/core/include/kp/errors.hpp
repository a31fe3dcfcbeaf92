#pragma once

#include <stdexcept>
#include <string>

namespace kp {

// Quadrature or series evaluation failed to reach the requested tolerance
// within the refinement budget.
class NumericalNonConvergence : public std::runtime_error {
 public:
  explicit NumericalNonConvergence(const std::string& what)
      : std::runtime_error(what) {}
};

// Successive series terms grew for several consecutive orders; the drift is
// effectively outside the admissible class for this configuration.
class DivergenceDetected : public std::runtime_error {
 public:
  explicit DivergenceDetected(const std::string& what)
      : std::runtime_error(what) {}
};

class EtaOutOfRange : public std::invalid_argument {
 public:
  explicit EtaOutOfRange(const std::string& what)
      : std::invalid_argument(what) {}
};

// Two-sided density bound failed at a sample point.
class BoundViolation : public std::runtime_error {
 public:
  BoundViolation(const std::string& what, double s, double x, double t,
                 double y, double margin)
      : std::runtime_error(what), s(s), x(x), t(t), y(y), margin(margin) {}

  double s = 0.0, x = 0.0, t = 0.0, y = 0.0;
  // Signed distance to the violated bound, negative = violated.
  double margin = 0.0;
};

// A single jump of the control function exceeds theta on the deduplicated
// partition points, so no valid partition exists.
class JumpTooLarge : public std::runtime_error {
 public:
  explicit JumpTooLarge(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateScaling : public std::invalid_argument {
 public:
  explicit DegenerateScaling(const std::string& what)
      : std::invalid_argument(what) {}
};

class UnsupportedDimension : public std::invalid_argument {
 public:
  explicit UnsupportedDimension(const std::string& what)
      : std::invalid_argument(what) {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kp
