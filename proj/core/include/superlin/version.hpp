#pragma once

#include <string_view>

namespace superlin {

inline constexpr std::string_view kToolkitName = "superlin";
inline constexpr std::string_view kToolkitVersion = "0.1.0";

}  // namespace superlin
