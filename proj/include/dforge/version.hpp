#pragma once

namespace dforge {

inline constexpr const char* kVersion = "0.1.0";

} // namespace dforge
