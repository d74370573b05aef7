#pragma once

namespace qrec {

inline constexpr const char* kVersion = "0.1.0";

} // namespace qrec
