#pragma once

namespace colonpose {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace colonpose
