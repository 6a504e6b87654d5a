#pragma once

namespace uqr {

inline constexpr const char* kProjectName = "uqr";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace uqr
