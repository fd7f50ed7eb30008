#pragma once

namespace gbflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gbflow
