#pragma once

namespace qsg {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace qsg
