#pragma once

#include <string_view>

namespace netsig {

inline constexpr std::string_view tool_name = "netsig";
inline constexpr std::string_view tool_version = "0.1.0";

}  // namespace netsig
