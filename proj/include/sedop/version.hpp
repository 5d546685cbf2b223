#pragma once

namespace sedop {

inline constexpr const char* kVersion = "0.1.0";

} // namespace sedop
