#include "qcorr/elements.hpp"

#include <algorithm>
#include <cmath>

namespace qcorr {

namespace {

FockKet empty_ket(const RegistryPtr& reg) { return FockKet::vacuum(reg).scaled(0.0); }

}  // namespace

BeamSplitter::BeamSplitter(cplx transmission, cplx reflection, std::pair<Path, Path> in,
                           std::pair<Path, Path> out)
    : alpha_(transmission), beta_(reflection), in_(in), out_(out) {
  const double r2 = std::norm(alpha_) + std::norm(beta_);
  if (std::abs(r2 - 1.0) > kAlgebraTol)
    throw NonUnitaryElement("beam splitter amplitudes give |t|^2+|r|^2 = " +
                            std::to_string(r2));
  if (in_.first == in_.second || out_.first == out_.second)
    throw ModeCollision("beam splitter ports must be two distinct paths");
}

BeamSplitter BeamSplitter::balanced(std::pair<Path, Path> in, std::pair<Path, Path> out) {
  const double s = 1.0 / std::sqrt(2.0);
  return BeamSplitter(cplx(s, 0.0), cplx(0.0, s), in, out);
}

BeamSplitter BeamSplitter::from_magnitudes(double t, double r, std::pair<Path, Path> in,
                                           std::pair<Path, Path> out) {
  if (t < 0.0 || r < 0.0)
    throw NonUnitaryElement("beam splitter magnitudes must be non-negative");
  return BeamSplitter(cplx(t, 0.0), cplx(0.0, r), in, out);
}

Eigen::Matrix2cd BeamSplitter::mode_matrix() const {
  Eigen::Matrix2cd m;
  m << alpha_, -std::conj(beta_), beta_, std::conj(alpha_);
  return m;
}

bool BeamSplitter::balanced_ratio() const {
  return std::abs(std::abs(alpha_) - std::abs(beta_)) < 1e-9;
}

namespace {

SubstitutionTable beam_splitter_table(const ModeRegistry& reg, const BeamSplitter& bs) {
  SubstitutionTable table;
  auto add_port = [&](Path from, cplx to_first, cplx to_second) {
    const auto inputs = reg.indices_where([&](const ModeLabel& l) {
      return l.path == from && l.species == Species::photon;
    });
    for (std::size_t i : inputs) {
      ModeLabel l1 = reg.mode(i).label;
      ModeLabel l2 = l1;
      l1.path = bs.output().first;
      l2.path = bs.output().second;
      const auto j1 = reg.find(l1);
      const auto j2 = reg.find(l2);
      if (!j1)
        throw UnknownMode("beam splitter output mode " + l1.str() + " is not in the registry");
      if (!j2)
        throw UnknownMode("beam splitter output mode " + l2.str() + " is not in the registry");
      table[i] = {CreationTerm{{*j1}, to_first}, CreationTerm{{*j2}, to_second}};
    }
  };
  add_port(bs.input().first, bs.transmission(), bs.reflection());
  add_port(bs.input().second, -std::conj(bs.reflection()), std::conj(bs.transmission()));
  if (table.empty())
    throw UnknownMode("no photon modes found on beam splitter input paths");
  return table;
}

}  // namespace

FockKet apply_beam_splitter(const FockKet& state, const BeamSplitter& bs) {
  return apply_creation_substitution(state, beam_splitter_table(*state.registry(), bs));
}

DensityOperator apply_beam_splitter(const DensityOperator& state, const BeamSplitter& bs) {
  const auto table = beam_splitter_table(*state.registry(), bs);
  const RegistryPtr reg = state.registry();
  return state.transform([&](const FockBasisState& b) {
    return apply_creation_substitution(unit_ket(reg, b), table);
  });
}

PhaseElement PhaseElement::fixed(Path path, double phase, std::optional<Polarization> pol) {
  PhaseElement e;
  e.path_ = path;
  e.pol_ = pol;
  e.delay_ = false;
  e.value_ = phase;
  return e;
}

PhaseElement PhaseElement::delay(Path path, double tau, std::optional<Polarization> pol) {
  PhaseElement e;
  e.path_ = path;
  e.pol_ = pol;
  e.delay_ = true;
  e.value_ = tau;
  return e;
}

FockKet apply_phase(const FockKet& state, const PhaseElement& elem) {
  const auto& reg = *state.registry();
  if (elem.delay_ && !reg.grid())
    throw MissingFrequencyGrid("delay element needs a registry with a frequency grid");

  // Phase picked up per quantum in each mode; zero for untouched modes.
  std::vector<double> per_quantum(reg.size(), 0.0);
  bool any = false;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    const ModeLabel& l = reg.mode(i).label;
    if (l.path != elem.path_ || l.species != Species::photon) continue;
    if (elem.pol_ && l.polarization != elem.pol_) continue;
    any = true;
    if (elem.delay_) {
      if (!l.frequency_bin)
        throw MissingFrequencyGrid("delayed mode " + l.str() + " has no frequency bin");
      per_quantum[i] = reg.grid()->value(*l.frequency_bin) * elem.value_;
    } else {
      per_quantum[i] = elem.value_;
    }
  }
  if (!any)
    throw UnknownMode("no photon modes on phased path " + to_string(elem.path_));

  FockKet out = empty_ket(state.registry());
  for (const auto& [s, a] : state.amplitudes()) {
    double phase = 0.0;
    for (std::size_t i = 0; i < s.occ.size(); ++i)
      if (s.occ[i] != 0 && per_quantum[i] != 0.0) phase += s.occ[i] * per_quantum[i];
    out.accumulate(s, a * std::polar(1.0, phase));
  }
  return out;
}

DensityOperator apply_phase(const DensityOperator& state, const PhaseElement& elem) {
  const RegistryPtr reg = state.registry();
  return state.transform([&](const FockBasisState& b) {
    return apply_phase(unit_ket(reg, b), elem);
  });
}

namespace {

// adag(H/V) -> <axis|pol> * (cos adag_H + sin adag_V): every transmitted
// quantum is projected onto the polarizer axis.
SubstitutionTable polarizer_table(const ModeRegistry& reg, const Polarizer& pol) {
  const double c = std::cos(pol.angle);
  const double s = std::sin(pol.angle);
  SubstitutionTable table;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    const ModeLabel& l = reg.mode(i).label;
    if (l.path != pol.path || l.species != Species::photon) continue;
    if (!l.polarization)
      throw UnpolarizedState("mode " + l.str() + " carries no polarization label");
    ModeLabel partner = l;
    partner.polarization =
        (*l.polarization == Polarization::H) ? Polarization::V : Polarization::H;
    const auto j = reg.find(partner);
    if (!j)
      throw UnpolarizedState("mode " + l.str() + " has no orthogonal partner in the registry");
    const double along = (*l.polarization == Polarization::H) ? c : s;
    const std::size_t ih = (*l.polarization == Polarization::H) ? i : *j;
    const std::size_t iv = (*l.polarization == Polarization::H) ? *j : i;
    table[i] = {CreationTerm{{ih}, cplx(along * c, 0.0)},
                CreationTerm{{iv}, cplx(along * s, 0.0)}};
  }
  if (table.empty())
    throw UnpolarizedState("no polarized photon modes on path " + to_string(pol.path));
  return table;
}

}  // namespace

std::pair<FockKet, double> apply_polarizer(const FockKet& state, const Polarizer& pol) {
  const auto table = polarizer_table(*state.registry(), pol);
  const double in_norm = state.norm();
  if (in_norm < 1e-150) throw ZeroState("polarizer applied to a zero state");
  FockKet out = apply_creation_substitution(state, table);
  const double out_norm = out.norm();
  const double pass = (out_norm * out_norm) / (in_norm * in_norm);
  if (pass < 1e-300) return {empty_ket(state.registry()), 0.0};
  return {out.scaled(in_norm / out_norm), pass};
}

std::pair<DensityOperator, double> apply_polarizer(const DensityOperator& state,
                                                   const Polarizer& pol) {
  const auto table = polarizer_table(*state.registry(), pol);
  const RegistryPtr reg = state.registry();
  const double in_trace = state.trace();
  if (in_trace < 1e-300) throw ZeroState("polarizer applied to a zero-trace operator");
  DensityOperator out = state.transform([&](const FockBasisState& b) {
    return apply_creation_substitution(unit_ket(reg, b), table);
  });
  const double pass = out.trace() / in_trace;
  if (pass < 1e-300) return {out, 0.0};
  return {out.scaled(in_trace / out.trace()), pass};
}

namespace {

std::vector<std::vector<std::size_t>> watched_groups(const ModeRegistry& reg,
                                                     const DetectorModel& det) {
  if (det.watched.empty()) throw UnknownMode("detector watches no paths");
  std::vector<std::vector<std::size_t>> groups;
  groups.reserve(det.watched.size());
  for (Path p : det.watched) {
    auto idx = reg.indices_where([&](const ModeLabel& l) {
      return l.path == p && l.species == det.species;
    });
    if (idx.empty())
      throw UnknownMode("no " + to_string(det.species) + " modes on watched path " +
                        to_string(p));
    groups.push_back(std::move(idx));
  }
  return groups;
}

DetectionOutcome outcome_of(const FockBasisState& s,
                            const std::vector<std::vector<std::size_t>>& groups,
                            DetectorResponse response) {
  DetectionOutcome o;
  o.counts.reserve(groups.size());
  for (const auto& g : groups) {
    int n = 0;
    for (std::size_t i : g) n += s.occ[i];
    if (response == DetectorResponse::bucket && n > 1) n = 1;
    o.counts.push_back(n);
  }
  return o;
}

bool outcome_matches(const DetectionOutcome& seen, const DetectionOutcome& want) {
  return seen.counts == want.counts;
}

void check_outcome(const DetectorModel& det, const DetectionOutcome& outcome) {
  if (outcome.counts.size() != det.watched.size())
    throw InvariantViolation("herald outcome lists " + std::to_string(outcome.counts.size()) +
                             " counts for " + std::to_string(det.watched.size()) +
                             " watched paths");
  for (int n : outcome.counts) {
    if (n < 0) throw InvariantViolation("negative detector count");
    if (det.response == DetectorResponse::bucket && n > 1)
      throw InvariantViolation("bucket detectors only report 0 or 1");
  }
}

}  // namespace

DetectionDistribution detect(const FockKet& state, const DetectorModel& det) {
  const auto groups = watched_groups(*state.registry(), det);
  DetectionDistribution dist;
  for (const auto& [s, a] : state.amplitudes())
    dist[outcome_of(s, groups, det.response)] += std::norm(a);
  return dist;
}

DetectionDistribution detect(const DensityOperator& state, const DetectorModel& det) {
  const auto groups = watched_groups(*state.registry(), det);
  DetectionDistribution dist;
  const auto& basis = state.basis();
  for (std::size_t i = 0; i < basis.size(); ++i)
    dist[outcome_of(basis[i], groups, det.response)] += state.matrix()(i, i).real();
  return dist;
}

HeraldResult herald(const FockKet& state, const DetectorModel& det,
                    const DetectionOutcome& outcome) {
  return herald(DensityOperator::from_ket(state), det, outcome);
}

HeraldResult herald(const DensityOperator& state, const DetectorModel& det,
                    const DetectionOutcome& outcome) {
  check_outcome(det, outcome);
  const auto& reg = *state.registry();
  const auto groups = watched_groups(reg, det);

  const double total = state.trace();
  if (total < 1e-300) throw ZeroState("heralding on a zero-trace operator");

  std::vector<std::size_t> matching;
  const auto& basis = state.basis();
  double weight = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!outcome_matches(outcome_of(basis[i], groups, det.response), outcome)) continue;
    matching.push_back(i);
    weight += state.matrix()(i, i).real();
  }
  const double probability = weight / total;
  if (probability < 1e-14) {
    std::string counts;
    for (int n : outcome.counts) counts += (counts.empty() ? "" : ",") + std::to_string(n);
    throw HeraldFailure("herald pattern (" + counts + ") has zero probability");
  }

  std::vector<FockBasisState> sub_basis;
  sub_basis.reserve(matching.size());
  for (std::size_t i : matching) sub_basis.push_back(basis[i]);
  Eigen::MatrixXcd sub(matching.size(), matching.size());
  for (std::size_t r = 0; r < matching.size(); ++r)
    for (std::size_t c = 0; c < matching.size(); ++c)
      sub(r, c) = state.matrix()(matching[r], matching[c]);
  sub /= weight;

  // The detector absorbs what it counted: its modes are traced away.
  std::vector<bool> is_watched(reg.size(), false);
  for (const auto& g : groups)
    for (std::size_t i : g) is_watched[i] = true;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < reg.size(); ++i)
    if (!is_watched[i]) keep.push_back(i);
  if (keep.empty())
    throw EmptySubsystem("herald would trace out every mode");

  DensityOperator projected = DensityOperator::from_matrix(state.registry(),
                                                           std::move(sub_basis), std::move(sub));
  return {probability, projected.partial_trace_keep(keep)};
}

}  // namespace qcorr
