#pragma once

#include <string_view>

namespace ctqw {

inline constexpr std::string_view kEngineName = "ctqw";
inline constexpr std::string_view kEngineVersion = "0.1.0";

}  // namespace ctqw
