#pragma once

namespace propersplit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace propersplit
