#pragma once

namespace tdt {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace tdt
