#pragma once

namespace nlvol {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nlvol
