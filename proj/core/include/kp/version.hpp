#pragma once

namespace kp {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kToolName = "kp";

}  // namespace kp
