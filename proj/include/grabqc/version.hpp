#pragma once

namespace grabqc {

inline constexpr const char* kToolName = "grabqc";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace grabqc
