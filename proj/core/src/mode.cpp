#include "qcorr/mode.hpp"

#include <algorithm>

namespace qcorr {

std::string to_string(Path p) {
  switch (p) {
    case Path::arm1: return "arm1";
    case Path::arm2: return "arm2";
    case Path::out1: return "out1";
    case Path::out2: return "out2";
  }
  return "?";
}

std::string to_string(Polarization p) {
  return p == Polarization::H ? "H" : "V";
}

std::string to_string(Species s) {
  switch (s) {
    case Species::photon: return "photon";
    case Species::phonon: return "phonon";
    case Species::environment: return "env";
  }
  return "?";
}

std::string ModeLabel::str() const {
  std::string out = to_string(path);
  if (polarization) out += ":" + to_string(*polarization);
  if (frequency_bin) out += ":b" + std::to_string(*frequency_bin);
  out += ":" + to_string(species);
  return out;
}

std::shared_ptr<const ModeRegistry> ModeRegistry::make(
    std::vector<ModeDescriptor> modes, int max_excitations,
    std::shared_ptr<const ModeGrid> grid) {
  if (modes.empty()) throw EmptySubsystem("registry needs at least one mode");
  if (max_excitations < 1)
    throw TruncationOverflow("excitation cap must be at least 1");
  std::sort(modes.begin(), modes.end(),
            [](const ModeDescriptor& a, const ModeDescriptor& b) { return a.label < b.label; });
  for (std::size_t i = 1; i < modes.size(); ++i) {
    if (modes[i].label == modes[i - 1].label)
      throw ModeCollision("duplicate mode " + modes[i].label.str());
  }
  for (const auto& m : modes) {
    if (m.label.species == Species::environment && m.level_cap < 1)
      throw InvalidEnvironment("environment mode " + m.label.str() +
                               " needs an explicit level cap >= 1");
    if (m.label.frequency_bin) {
      if (grid && (*m.label.frequency_bin < 0 || *m.label.frequency_bin >= grid->count()))
        throw GridMismatch("mode " + m.label.str() + " indexes past the grid");
      if (*m.label.frequency_bin < 0)
        throw GridMismatch("mode " + m.label.str() + " has a negative bin");
    }
  }
  auto reg = std::shared_ptr<ModeRegistry>(new ModeRegistry());
  reg->modes_ = std::move(modes);
  reg->max_excitations_ = max_excitations;
  reg->grid_ = std::move(grid);
  return reg;
}

std::shared_ptr<const ModeRegistry> ModeRegistry::merged(const ModeRegistry& a,
                                                         const ModeRegistry& b) {
  std::vector<ModeDescriptor> modes = a.modes_;
  modes.insert(modes.end(), b.modes_.begin(), b.modes_.end());
  auto grid = a.grid_ ? a.grid_ : b.grid_;
  if (a.grid_ && b.grid_ && !(*a.grid_ == *b.grid_))
    throw GridMismatch("cannot merge registries with different grids");
  return make(std::move(modes), std::max(a.max_excitations_, b.max_excitations_), grid);
}

std::size_t ModeRegistry::index_of(const ModeLabel& label) const {
  auto idx = find(label);
  if (!idx) throw UnknownMode("no mode " + label.str() + " in registry");
  return *idx;
}

std::optional<std::size_t> ModeRegistry::find(const ModeLabel& label) const {
  auto it = std::lower_bound(
      modes_.begin(), modes_.end(), label,
      [](const ModeDescriptor& m, const ModeLabel& l) { return m.label < l; });
  if (it == modes_.end() || !(it->label == label)) return std::nullopt;
  return static_cast<std::size_t>(it - modes_.begin());
}

std::vector<std::size_t> ModeRegistry::indices_where(
    const std::function<bool(const ModeLabel&)>& pred) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < modes_.size(); ++i)
    if (pred(modes_[i].label)) out.push_back(i);
  return out;
}

std::shared_ptr<const ModeRegistry> ModeRegistry::subset(
    std::vector<std::size_t> keep) const {
  if (keep.empty()) throw EmptySubsystem("subset keeps no modes");
  std::sort(keep.begin(), keep.end());
  std::vector<ModeDescriptor> modes;
  modes.reserve(keep.size());
  for (std::size_t i : keep) {
    if (i >= modes_.size()) throw UnknownMode("subset index out of range");
    modes.push_back(modes_[i]);
  }
  return make(std::move(modes), max_excitations_, grid_);
}

bool ModeRegistry::same_modes(const ModeRegistry& other) const {
  if (modes_.size() != other.modes_.size()) return false;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (!(modes_[i].label == other.modes_[i].label)) return false;
    if (modes_[i].level_cap != other.modes_[i].level_cap) return false;
  }
  return max_excitations_ == other.max_excitations_;
}

}  // namespace qcorr
