#include "qcorr/entangle.hpp"

#include <cmath>

namespace qcorr {

double EnvironmentState::norm() const {
  double n2 = 0.0;
  for (const auto& a : amplitudes) n2 += std::norm(a);
  return std::sqrt(n2);
}

void EnvironmentState::require_unit(double tol) const {
  if (amplitudes.empty())
    throw InvalidEnvironment("environment state " + label + " is empty");
  if (std::abs(norm() - 1.0) > tol)
    throw InvalidEnvironment("environment state " + label + " is not normalized");
}

std::pair<EnvironmentState, EnvironmentState> EnvironmentState::pair_with_overlap(
    cplx gamma, std::size_t dimension) {
  if (dimension < 2) throw InvalidEnvironment("overlap pair needs dimension >= 2");
  if (std::abs(gamma) > 1.0 + kAlgebraTol)
    throw InvalidEnvironment("requested overlap magnitude exceeds 1");
  EnvironmentState e1, e2;
  e1.amplitudes.assign(dimension, 0.0);
  e2.amplitudes.assign(dimension, 0.0);
  e1.amplitudes[0] = 1.0;
  e1.label = "e1";
  e2.amplitudes[0] = gamma;
  e2.amplitudes[1] = std::sqrt(std::max(0.0, 1.0 - std::norm(gamma)));
  e2.label = "e2";
  return {e1, e2};
}

cplx overlap(const EnvironmentState& a, const EnvironmentState& b) {
  if (a.dimension() != b.dimension())
    throw InvalidEnvironment("overlap between different environment dimensions");
  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < a.dimension(); ++i)
    acc += std::conj(a.amplitudes[i]) * b.amplitudes[i];
  return acc;
}

namespace {

FockKet attach_pointers(const FockKet& principal,
                        const std::vector<const EnvironmentState*>& pointer_of_branch,
                        const ModeLabel& ancilla) {
  if (ancilla.species != Species::environment)
    throw InvalidEnvironment("ancilla mode must have environment species");
  std::size_t dim = 0;
  for (const auto* p : pointer_of_branch) {
    p->require_unit();
    if (dim == 0) dim = p->dimension();
    if (p->dimension() != dim)
      throw BranchPointerMismatch("pointer states differ in dimension");
  }
  if (dim < 1) throw InvalidEnvironment("pointer states are empty");

  auto anc_reg = ModeRegistry::make(
      {{ancilla, static_cast<int>(dim) - 1}}, principal.registry()->max_excitations(),
      principal.registry()->grid());
  auto super = ModeRegistry::merged(*principal.registry(), *anc_reg);
  const std::size_t anc_idx = super->index_of(ancilla);

  FockKet base = principal.extended(super);
  FockKet out = FockKet::vacuum(super).scaled(0.0);
  std::size_t branch = 0;
  for (const auto& [state, amp] : base.amplitudes()) {
    const EnvironmentState& e = *pointer_of_branch[branch++];
    for (std::size_t level = 0; level < dim; ++level) {
      if (e.amplitudes[level] == cplx(0.0, 0.0)) continue;
      FockBasisState s = state;
      s.occ[anc_idx] = static_cast<std::uint16_t>(level);
      out.accumulate(std::move(s), amp * e.amplitudes[level]);
    }
  }
  return out;
}

}  // namespace

FockKet entangle_map(const FockKet& principal,
                     const std::vector<EnvironmentState>& pointers,
                     const ModeLabel& ancilla) {
  if (pointers.size() != principal.support_size())
    throw BranchPointerMismatch(
        "need one pointer per principal basis state: " +
        std::to_string(principal.support_size()) + " branches, " +
        std::to_string(pointers.size()) + " pointers");
  std::vector<const EnvironmentState*> by_branch;
  by_branch.reserve(pointers.size());
  for (const auto& p : pointers) by_branch.push_back(&p);
  return attach_pointers(principal, by_branch, ancilla);
}

FockKet entangle_by_path(const FockKet& principal,
                         const std::vector<std::pair<Path, EnvironmentState>>& pointers,
                         const ModeLabel& ancilla) {
  const auto& reg = *principal.registry();
  std::vector<const EnvironmentState*> by_branch;
  by_branch.reserve(principal.support_size());
  for (const auto& [state, amp] : principal.amplitudes()) {
    const EnvironmentState* chosen = nullptr;
    for (std::size_t i = 0; i < reg.size(); ++i) {
      if (state.occ[i] == 0 || !reg.counts_toward_cap(i)) continue;
      const Path p = reg.mode(i).label.path;
      const EnvironmentState* match = nullptr;
      for (const auto& [path, env] : pointers)
        if (path == p) { match = &env; break; }
      if (!match)
        throw BranchPointerMismatch("branch occupies path " + to_string(p) +
                                    " which has no pointer state");
      if (chosen && chosen != match)
        throw BranchPointerMismatch("branch spreads over several pointer paths");
      chosen = match;
    }
    if (!chosen)
      throw BranchPointerMismatch("branch carries no excitation on any pointer path");
    by_branch.push_back(chosen);
  }
  return attach_pointers(principal, by_branch, ancilla);
}

}  // namespace qcorr
