#pragma once

namespace itosynth {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace itosynth
