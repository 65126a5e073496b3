#pragma once

namespace diracwalk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace diracwalk
