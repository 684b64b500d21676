#pragma once

namespace mclt {

inline constexpr const char* kVersion = "0.1.0";

}
