#pragma once

namespace bq {

inline constexpr const char* kLibraryName = "branequant";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace bq
