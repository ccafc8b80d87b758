#pragma once

namespace stance {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace stance
