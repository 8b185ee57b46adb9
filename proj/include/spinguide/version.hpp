#pragma once

namespace spinguide {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spinguide
