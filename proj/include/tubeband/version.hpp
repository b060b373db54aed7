#pragma once

namespace tubeband {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tubeband
