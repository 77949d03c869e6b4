#pragma once

namespace mbm {

inline constexpr const char* version = "0.1.0";

}  // namespace mbm
