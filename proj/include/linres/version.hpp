#pragma once

namespace linres {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace linres
