#pragma once

namespace wurlab {

inline constexpr const char* kToolName = "wurlab";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace wurlab
