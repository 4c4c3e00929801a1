#pragma once

namespace bindiag {
inline constexpr const char* kVersion = "1.0.0";
}
