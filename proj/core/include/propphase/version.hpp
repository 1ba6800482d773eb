#pragma once

namespace propphase {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace propphase
