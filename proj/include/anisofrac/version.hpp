#pragma once

namespace anisofrac {

inline constexpr const char* kVersion = "0.1.0";

}
