#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "qcorr/mode.hpp"

namespace qcorr {

// Occupation-number vector aligned with a registry's mode order. The
// defaulted comparison gives the lexicographic basis ordering used for all
// deterministic output.
struct FockBasisState {
  std::vector<std::uint16_t> occ;
  auto operator<=>(const FockBasisState&) const = default;
};

int total_excitations(const FockBasisState& s, const ModeRegistry& reg);

// Sparse state vector over the truncated Fock space of a registry.
// Amplitudes live in a sorted map so iteration order (and hence every
// downstream number) is reproducible.
class FockKet {
 public:
  static FockKet vacuum(RegistryPtr reg);
  // Single basis state |n_1 n_2 ...> from (label, occupation) pairs; modes
  // not mentioned are empty.
  static FockKet basis(RegistryPtr reg,
                       const std::vector<std::pair<ModeLabel, int>>& occupations);

  const RegistryPtr& registry() const { return reg_; }
  const std::map<FockBasisState, cplx>& amplitudes() const { return amp_; }
  cplx amplitude(const FockBasisState& s) const;
  std::size_t support_size() const { return amp_.size(); }
  std::vector<FockBasisState> support() const;

  double norm() const;
  FockKet normalized() const;  // throws ZeroState on (numerically) zero input
  cplx inner(const FockKet& rhs) const;
  FockKet scaled(cplx factor) const;
  FockKet plus(const FockKet& rhs) const;

  // Accumulates amp into the given basis state, enforcing per-mode level
  // caps and the registry excitation cap.
  void accumulate(FockBasisState s, cplx amp);

  // Embeds this ket into a superset registry (added modes empty).
  FockKet extended(RegistryPtr super) const;

  double number_expectation(std::size_t mode) const;

 private:
  explicit FockKet(RegistryPtr reg) : reg_(std::move(reg)) {}
  RegistryPtr reg_;
  std::map<FockBasisState, cplx> amp_;

  friend FockKet tensor(const FockKet&, const FockKet&);
};

// |a x b> on the disjoint union of the two registries.
FockKet tensor(const FockKet& a, const FockKet& b);

// |s> as a single-term ket over reg.
FockKet unit_ket(RegistryPtr reg, const FockBasisState& s);

// |<a|b>|^2 for normalized kets.
double fidelity(const FockKet& a, const FockKet& b);

// One summand of a creation-operator image: coeff * prod_k adag(modes[k]).
struct CreationTerm {
  std::vector<std::size_t> modes;
  cplx coeff;
};

// adag(source mode) -> sum of CreationTerms. Applying a table rewrites every
// quantum in each source mode through its image polynomial, which induces
// the bosonic homomorphism on the whole truncated Fock space. Non-unitary
// tables (projections) are allowed; the result is then sub-normalized.
using SubstitutionTable = std::map<std::size_t, std::vector<CreationTerm>>;

FockKet apply_creation_substitution(const FockKet& in, const SubstitutionTable& table);

// (sum_k coeff_k a(mode_k)) |in>, lowering occupations with bosonic factors.
FockKet apply_annihilators(const FockKet& in,
                           const std::vector<std::pair<std::size_t, cplx>>& sum);

cplx vacuum_amplitude(const FockKet& in);

// Projects onto the subspace where, for every (mode set, n) constraint, the
// total occupation over the set equals n. Returns the projection weight and
// the renormalized ket; probability 0 leaves the ket empty.
std::pair<double, FockKet> project_total_counts(
    const FockKet& in,
    const std::vector<std::pair<std::vector<std::size_t>, int>>& constraints);

// Every basis state of the truncated space, lexicographically sorted.
std::vector<FockBasisState> enumerate_basis(const ModeRegistry& reg);

}  // namespace qcorr
