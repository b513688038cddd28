#pragma once

namespace mdu {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace mdu
