#pragma once

namespace qion {

inline constexpr const char* kVersion = "0.1.0";

// Bumped when an on-disk layout changes incompatibly.
inline constexpr int kCsvFormatVersion = 1;
inline constexpr int kJsonFormatVersion = 1;
inline constexpr int kRawMatrixFormatVersion = 1;

} // namespace qion
