#pragma once

namespace phirm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace phirm
