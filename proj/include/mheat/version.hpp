#pragma once

namespace mheat {
inline constexpr const char* kVersion = "0.1.0";
}
