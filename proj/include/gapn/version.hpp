#pragma once

namespace gapn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gapn
