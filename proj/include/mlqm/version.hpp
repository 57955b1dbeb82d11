#pragma once

namespace mlqm {
inline constexpr const char* kVersion = "0.1.0";
}
