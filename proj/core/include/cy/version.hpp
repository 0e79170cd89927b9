#pragma once

namespace cy {
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kFieldFormatVersion = "1";
}  // namespace cy
