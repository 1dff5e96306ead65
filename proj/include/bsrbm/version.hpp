#pragma once

namespace bsrbm {
inline constexpr const char* kVersion = "0.1.0";
}
