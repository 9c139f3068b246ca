#pragma once

namespace retrade {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace retrade
