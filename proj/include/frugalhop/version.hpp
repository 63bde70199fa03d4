#pragma once

namespace fhop {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fhop
