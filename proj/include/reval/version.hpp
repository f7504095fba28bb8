#pragma once

namespace reval {

inline constexpr const char* kEngineVersion = "0.1.0";

}  // namespace reval
