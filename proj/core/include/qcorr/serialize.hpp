#pragma once

#include <string>

#include "qcorr/density.hpp"

namespace qcorr {

// Human-inspectable JSON dumps for debugging and golden files. Amplitudes
// are emitted as [re, im] pairs; basis states as occupation arrays in
// registry order; keys are sorted, so the output is deterministic.
std::string to_debug_json(const FockKet& ket, int indent = 2);
std::string to_debug_json(const DensityOperator& rho, int indent = 2);

}  // namespace qcorr
