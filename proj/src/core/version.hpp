#pragma once

namespace mgpe {

inline constexpr const char* kVersionString = "0.1.0";

}  // namespace mgpe
