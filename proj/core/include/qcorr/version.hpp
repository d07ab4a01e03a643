#pragma once

namespace qcorr {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever the deterministic mode/basis ordering changes.
// Recorded in run manifests so archived CSV output stays interpretable.
inline constexpr const char* kBasisOrderVersion = "lex-1";

}  // namespace qcorr
