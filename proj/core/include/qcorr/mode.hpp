#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/common.hpp"
#include "qcorr/grid.hpp"

namespace qcorr {

enum class Path : std::uint8_t { arm1, arm2, out1, out2 };
enum class Polarization : std::uint8_t { H, V };
// `environment` marks a d-level ancilla (its "occupation" is a level index,
// bounded by the mode's level cap and exempt from the excitation cap) used to
// carry which-path pointer states alongside the bosonic modes.
enum class Species : std::uint8_t { photon, phonon, environment };

std::string to_string(Path p);
std::string to_string(Polarization p);
std::string to_string(Species s);

// A mode is addressed by (path, polarization?, frequency_bin?, species).
// The defaulted three-way comparison realizes the documented deterministic
// ordering: lexicographic in exactly that field order, absent optionals first.
struct ModeLabel {
  Path path = Path::arm1;
  std::optional<Polarization> polarization;
  std::optional<int> frequency_bin;
  Species species = Species::photon;

  auto operator<=>(const ModeLabel&) const = default;
  std::string str() const;
};

// level_cap < 0 means "inherit the registry excitation cap".
// Environment modes must set an explicit cap of dimension-1 levels.
struct ModeDescriptor {
  ModeLabel label;
  int level_cap = -1;
};

// Immutable, sorted mode table shared by every state in an experiment.
// Holds the excitation cap and (optionally) the frequency grid that gives
// binned modes their physical frequencies.
class ModeRegistry {
 public:
  static std::shared_ptr<const ModeRegistry> make(
      std::vector<ModeDescriptor> modes, int max_excitations = 2,
      std::shared_ptr<const ModeGrid> grid = nullptr);

  // Disjoint union of two registries; the excitation cap is the larger of
  // the two and the grid is taken from whichever side has one.
  static std::shared_ptr<const ModeRegistry> merged(const ModeRegistry& a,
                                                    const ModeRegistry& b);

  std::size_t size() const { return modes_.size(); }
  const ModeDescriptor& mode(std::size_t i) const { return modes_[i]; }
  const std::vector<ModeDescriptor>& modes() const { return modes_; }
  int max_excitations() const { return max_excitations_; }
  const std::shared_ptr<const ModeGrid>& grid() const { return grid_; }

  std::size_t index_of(const ModeLabel& label) const;  // throws UnknownMode
  std::optional<std::size_t> find(const ModeLabel& label) const;
  bool counts_toward_cap(std::size_t i) const {
    return modes_[i].label.species != Species::environment;
  }
  int level_cap(std::size_t i) const {
    return modes_[i].level_cap < 0 ? max_excitations_ : modes_[i].level_cap;
  }

  std::vector<std::size_t> indices_where(
      const std::function<bool(const ModeLabel&)>& pred) const;

  // Registry over the kept mode subset (indices into this registry).
  std::shared_ptr<const ModeRegistry> subset(std::vector<std::size_t> keep) const;

  bool same_modes(const ModeRegistry& other) const;

 private:
  ModeRegistry() = default;
  std::vector<ModeDescriptor> modes_;
  int max_excitations_ = 2;
  std::shared_ptr<const ModeGrid> grid_;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

}  // namespace qcorr
