#pragma once

namespace choiexcl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace choiexcl
