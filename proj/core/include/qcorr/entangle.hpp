#pragma once

#include <string>
#include <vector>

#include "qcorr/fock.hpp"

namespace qcorr {

// Pointer state of a d-level which-path marker (detector gas, scattered
// residue, apparatus memory...). Amplitudes are kept as given; operations
// that need unit norm validate and throw InvalidEnvironment.
struct EnvironmentState {
  std::vector<cplx> amplitudes;
  std::string label = "env";

  std::size_t dimension() const { return amplitudes.size(); }
  double norm() const;
  void require_unit(double tol = kNormTol) const;

  // |e1> = |0>, |e2> = gamma|0> + sqrt(1-|gamma|^2)|1> (+ padding zeros), so
  // <e1|e2> == gamma exactly.
  static std::pair<EnvironmentState, EnvironmentState> pair_with_overlap(
      cplx gamma, std::size_t dimension = 2);
};

// <a|b> = sum_i conj(a_i) b_i.
cplx overlap(const EnvironmentState& a, const EnvironmentState& b);

// Attaches a fresh ancilla mode and maps (sum_i c_i |s_i>)|ready> to
// sum_i c_i |s_i>|a_i>, one pointer per support basis state of the
// principal, in the principal's deterministic basis order.
FockKet entangle_map(const FockKet& principal,
                     const std::vector<EnvironmentState>& pointers,
                     const ModeLabel& ancilla = {Path::arm1, std::nullopt,
                                                 std::nullopt, Species::environment});

// Same map, but the pointer for each branch is chosen by which of the given
// paths carries the excitation(s) in that branch. Every support state must
// put all of its (non-environment) excitations on exactly one listed path.
FockKet entangle_by_path(const FockKet& principal,
                         const std::vector<std::pair<Path, EnvironmentState>>& pointers,
                         const ModeLabel& ancilla = {Path::arm1, std::nullopt,
                                                     std::nullopt, Species::environment});

}  // namespace qcorr
