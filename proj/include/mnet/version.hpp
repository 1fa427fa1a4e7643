#pragma once

namespace mnet {

inline constexpr const char* kProjectName = "mnetcode";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace mnet
