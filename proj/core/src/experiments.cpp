#include "qcorr/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/version.hpp"

namespace qcorr {

namespace {

constexpr double kTinyWeight = 1e-14;

double outcome_probability(const DetectionDistribution& dist, std::vector<int> counts) {
  const auto it = dist.find(DetectionOutcome{std::move(counts)});
  return it == dist.end() ? 0.0 : it->second;
}

void check_unit_total(const DetectionDistribution& dist, const char* where) {
  double total = 0.0;
  for (const auto& [outcome, p] : dist) total += p;
  if (std::abs(total - 1.0) > kNormTol)
    throw InvariantViolation(std::string(where) + ": detection probabilities sum to " +
                             std::to_string(total));
}

// A counter that resolves arrival times finer than the applied delay reads
// which photon was delayed, so no coherence between distinct occupation
// patterns survives: only the diagonal of the operator remains. Detection
// statistics then reduce to the incoherent sum over branches.
DensityOperator dephase_by_arrival(const DensityOperator& rho) {
  Eigen::MatrixXcd m = rho.matrix().diagonal().asDiagonal();
  return DensityOperator::from_matrix(rho.registry(), rho.basis(), std::move(m));
}

std::string format_angle(const std::optional<double>& angle) {
  if (!angle) return "none";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", *angle);
  return buf;
}

}  // namespace

FringeFit fit_fringe(const std::vector<double>& phases, const std::vector<double>& values) {
  if (phases.size() != values.size() || phases.empty())
    throw InvariantViolation("fringe fit needs matching, nonempty phase and value lists");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  cplx c(0.0, 0.0);
  for (std::size_t k = 0; k < values.size(); ++k) {
    mean += values[k];
    c += values[k] * std::polar(1.0, -phases[k]);
  }
  mean /= n;
  c *= 2.0 / n;

  FringeFit fit;
  fit.mean = mean;
  if (mean > 0.0) fit.visibility = std::abs(c) / mean;
  if (std::abs(c) > 1e-12 * std::max(1.0, std::abs(mean))) {
    fit.offset = std::remainder(std::arg(c) - std::numbers::pi, 2.0 * std::numbers::pi);
    if (fit.offset <= -std::numbers::pi) fit.offset += 2.0 * std::numbers::pi;
  }
  return fit;
}

namespace {

struct HomSetup {
  RegistryPtr reg;
  FockKet pair_state;
  BeamSplitter splitter;
  DetectorModel detector;
  std::vector<std::size_t> arm1_modes;
  std::vector<std::size_t> out1_modes;
  std::vector<std::size_t> out2_modes;
};

HomSetup prepare_hom(const HomConfig& config) {
  if (!config.grid)
    throw MissingFrequencyGrid("two-photon interference needs a frequency grid");
  if (config.sweep_points < 1) throw ConfigError("sweep_points must be positive");
  if (config.max_excitations < 2)
    throw ConfigError("max_excitations below 2 cannot hold a photon pair");
  PumpSpectrum pump = config.pump;
  if (pump.center <= 0.0) pump.center = 2.0 * config.grid->center();
  const BiphotonState pair = make_spdc(config.grid, pump, config.type);
  RegistryPtr reg = biphoton_registry(config.grid, config.max_excitations);
  auto on_path = [&](Path p) {
    return reg->indices_where([p](const ModeLabel& l) { return l.path == p; });
  };
  return HomSetup{reg,
                  spdc_to_fock(pair, reg),
                  BeamSplitter::from_magnitudes(config.bs_transmission, config.bs_reflection,
                                                {Path::arm1, Path::arm2},
                                                {Path::out1, Path::out2}),
                  DetectorModel{{Path::out1, Path::out2},
                                DetectorResponse::amplitude_resolving,
                                config.coincidence_window},
                  on_path(Path::arm1), on_path(Path::out1), on_path(Path::out2)};
}

struct HomPoint {
  double coincidence = 0.0;
  double bunched_out1 = 0.0;
  double bunched_out2 = 0.0;
  double pass = 1.0;
  double signal_purity = 0.0;
  bool time_resolved = false;
};

HomPoint hom_point(const HomSetup& s, const HomConfig& config, double tau) {
  HomPoint row;
  const FockKet delayed = apply_phase(s.pair_state, PhaseElement::delay(Path::arm2, tau));
  row.signal_purity =
      DensityOperator::from_ket(delayed).partial_trace_keep(s.arm1_modes).purity();
  const FockKet mixed = apply_beam_splitter(delayed, s.splitter);
  row.time_resolved = std::abs(tau) > config.coincidence_window;

  auto read_counts = [&](const DetectionDistribution& dist) {
    check_unit_total(dist, "two-photon interference");
    row.coincidence = outcome_probability(dist, {1, 1});
    row.bunched_out1 = outcome_probability(dist, {2, 0});
    row.bunched_out2 = outcome_probability(dist, {0, 2});
  };

  if (row.time_resolved) {
    // The counter stamps arrival order: work with the dephased operator.
    DensityOperator rho = dephase_by_arrival(DensityOperator::from_ket(mixed));
    if (config.polarizer1) {
      auto [next, p] = apply_polarizer(rho, Polarizer{Path::out1, *config.polarizer1});
      rho = std::move(next);
      row.pass *= p;
    }
    if (row.pass > 0.0 && config.polarizer2) {
      auto [next, p] = apply_polarizer(rho, Polarizer{Path::out2, *config.polarizer2});
      rho = std::move(next);
      row.pass *= p;
    }
    if (row.pass > 0.0) read_counts(detect(rho, s.detector));
    return row;
  }

  FockKet state = mixed;
  if (config.polarizer1) {
    auto [next, p] = apply_polarizer(state, Polarizer{Path::out1, *config.polarizer1});
    state = std::move(next);
    row.pass *= p;
  }
  if (row.pass > 0.0 && config.polarizer2) {
    auto [next, p] = apply_polarizer(state, Polarizer{Path::out2, *config.polarizer2});
    state = std::move(next);
    row.pass *= p;
  }
  if (row.pass > 0.0) read_counts(detect(state, s.detector));
  return row;
}

}  // namespace

HomConfig default_hom_config() {
  HomConfig config;
  config.grid = std::make_shared<ModeGrid>(2.356e15, 1.0e12, 16);
  return config;
}

ExperimentResult run_hom(const HomConfig& config) {
  const HomSetup setup = prepare_hom(config);
  const int n = config.sweep_points;
  const double span = config.sweep_coherence_times * config.grid->coherence_time();

  std::vector<double> taus(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    taus[static_cast<std::size_t>(k)] =
        (n == 1) ? 0.0 : -span + 2.0 * span * k / (n - 1);

  std::vector<HomPoint> points(taus.size());
  parallel_for_indexed(taus.size(), config.threads, [&](std::size_t k) {
    points[k] = hom_point(setup, config, taus[k]);
  });

  ExperimentResult result;
  result.experiment = "hom";
  result.columns = {"tau",
                    "p_coincidence",
                    "p_bunched_out1",
                    "p_bunched_out2",
                    "pair_pass_probability",
                    "signal_purity",
                    "time_resolved"};
  result.rows.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    const HomPoint& p = points[k];
    result.rows.push_back({taus[k], p.coincidence, p.bunched_out1, p.bunched_out2,
                           p.pass, p.signal_purity, p.time_resolved ? 1.0 : 0.0});
  }

  double dip_min = points.front().coincidence;
  double dip_max = dip_min;
  double purity_min = points.front().signal_purity;
  double purity_max = purity_min;
  double symmetry = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    dip_min = std::min(dip_min, points[k].coincidence);
    dip_max = std::max(dip_max, points[k].coincidence);
    purity_min = std::min(purity_min, points[k].signal_purity);
    purity_max = std::max(purity_max, points[k].signal_purity);
    symmetry = std::max(
        symmetry, std::abs(points[k].coincidence -
                           points[points.size() - 1 - k].coincidence));
  }
  result.metrics["dip_minimum"] = dip_min;
  result.metrics["dip_maximum"] = dip_max;
  result.metrics["dip_symmetry_error"] = symmetry;
  result.metrics["coincidence_first"] = points.front().coincidence;
  result.metrics["coincidence_last"] = points.back().coincidence;
  result.metrics["signal_purity_min"] = purity_min;
  result.metrics["signal_purity_max"] = purity_max;
  for (std::size_t k = 0; k < taus.size(); ++k)
    if (taus[k] == 0.0) result.metrics["coincidence_at_zero_delay"] = points[k].coincidence;

  result.metadata["basis_order"] = kBasisOrderVersion;
  result.metadata["balanced_splitter"] = setup.splitter.balanced_ratio() ? "true" : "false";
  result.metadata["polarizer1"] = format_angle(config.polarizer1);
  result.metadata["polarizer2"] = format_angle(config.polarizer2);
  return result;
}

HomBellState hom_bell_state(const HomConfig& config) {
  const HomSetup setup = prepare_hom(config);
  const FockKet delayed =
      apply_phase(setup.pair_state, PhaseElement::delay(Path::arm2, config.delay));
  const FockKet mixed = apply_beam_splitter(delayed, setup.splitter);
  auto [probability, coincident] =
      project_total_counts(mixed, {{setup.out1_modes, 1}, {setup.out2_modes, 1}});
  if (probability < kTinyWeight)
    throw HeraldFailure("no coincidence amplitude at this delay");

  // Group amplitudes by frequency-bin pair; each group contributes an
  // incoherent polarization block once the bins are traced out.
  std::map<std::pair<int, int>, Eigen::Vector4cd> groups;
  for (const auto& [state, amp] : coincident.amplitudes()) {
    int pol1 = -1;
    int pol2 = -1;
    int bin1 = 0;
    int bin2 = 0;
    for (std::size_t i = 0; i < state.occ.size(); ++i) {
      if (!state.occ[i]) continue;
      const ModeLabel& l = setup.reg->mode(i).label;
      if (l.path != Path::out1 && l.path != Path::out2) continue;
      if (!l.polarization)
        throw UnpolarizedState("coincident photon in mode " + l.str() +
                               " carries no polarization label");
      const int p = (*l.polarization == Polarization::V) ? 1 : 0;
      if (l.path == Path::out1) {
        pol1 = p;
        bin1 = l.frequency_bin.value_or(0);
      } else {
        pol2 = p;
        bin2 = l.frequency_bin.value_or(0);
      }
    }
    if (pol1 < 0 || pol2 < 0)
      throw InvariantViolation("coincidence projection kept a non-coincident branch");
    auto& v = groups.try_emplace({bin1, bin2}, Eigen::Vector4cd::Zero()).first->second;
    v(2 * pol1 + pol2) += amp;
  }

  Eigen::Matrix4cd pol_density = Eigen::Matrix4cd::Zero();
  for (const auto& [bins, v] : groups) pol_density += v * v.adjoint();

  const double fidelity_singlet =
      0.5 * (pol_density(1, 1).real() + pol_density(2, 2).real()) -
      pol_density(1, 2).real();
  const double purity_out1 = DensityOperator::from_ket(coincident)
                                 .partial_trace_keep(setup.out1_modes)
                                 .purity();
  return HomBellState{coincident,
                      probability,
                      pol_density,
                      concurrence(pol_density),
                      chsh(pol_density, chsh_singlet_angles()),
                      fidelity_singlet,
                      purity_out1};
}

namespace {

struct MzPrep {
  DensityOperator base;  // after the first splitter and the arm interaction
  BeamSplitter splitter2;
  DetectorModel detector;
  cplx fringe_overlap;  // pointer overlap seen by bare output detection
  cplx herald_overlap;  // pointer overlap recoverable by heralding (raman)
};

// <stokes spectrum of arm1 | stokes spectrum of arm2> for a shared source
// envelope downshifted by m1 and m2 bins.
cplx stokes_autocorrelation(const std::vector<cplx>& envelope, int m1, int m2, int count) {
  cplx acc(0.0, 0.0);
  for (int t = 0; t < count; ++t) {
    const int b1 = t + m1;
    const int b2 = t + m2;
    if (b1 < 0 || b1 >= count || b2 < 0 || b2 >= count) continue;
    acc += std::conj(envelope[static_cast<std::size_t>(b1)]) *
           envelope[static_cast<std::size_t>(b2)];
  }
  return acc;
}

MzPrep prepare_mz(const MzConfig& config) {
  if (config.sweep_points < 1) throw ConfigError("sweep_points must be positive");

  const BeamSplitter splitter2(config.bs2_transmission, config.bs2_reflection,
                               {Path::arm1, Path::arm2}, {Path::out1, Path::out2});
  const DetectorModel detector{{Path::out1, Path::out2},
                               DetectorResponse::amplitude_resolving};

  if (config.interaction == MzInteraction::none ||
      config.interaction == MzInteraction::generic_entangler) {
    std::vector<ModeDescriptor> modes;
    for (Path p : {Path::arm1, Path::arm2, Path::out1, Path::out2})
      modes.push_back({ModeLabel{p, std::nullopt, std::nullopt, Species::photon}, -1});
    const RegistryPtr reg = ModeRegistry::make(std::move(modes), 1);

    FockKet psi = make_single_photon(reg, Path::arm1);
    psi = apply_beam_splitter(
        psi, BeamSplitter(config.bs1_transmission, config.bs1_reflection,
                          {Path::arm1, Path::arm2}, {Path::arm1, Path::arm2}));
    cplx pointer(1.0, 0.0);
    if (config.interaction == MzInteraction::generic_entangler) {
      config.env1.require_unit();
      config.env2.require_unit();
      psi = entangle_by_path(psi, {{Path::arm1, config.env1}, {Path::arm2, config.env2}});
      pointer = overlap(config.env1, config.env2);
    }
    return MzPrep{DensityOperator::from_ket(psi), splitter2, detector, pointer, pointer};
  }

  // Raman chain.
  if (!config.grid) throw MissingFrequencyGrid("Raman scattering needs a frequency grid");
  const ModeGrid& grid = *config.grid;
  auto shift_bins = [&](double shift, const char* which) {
    const double ratio = shift / grid.spacing();
    const long m = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(m)) > 1e-9)
      throw GridMismatch(std::string(which) + " is not a whole number of grid bins");
    if (m < 0) throw GridMismatch(std::string(which) + " must be non-negative");
    return static_cast<int>(m);
  };
  const int m1 = shift_bins(config.raman.stokes_shift_arm1, "arm1 Stokes shift");
  const int m2 = shift_bins(config.raman.stokes_shift_arm2, "arm2 Stokes shift");
  const int max_shift = std::max(m1, m2);

  int source = config.source_bin;
  if (source < 0) source = grid.count() - 1;
  if (source >= grid.count()) throw ConfigError("source_bin lies outside the grid");
  if (source - max_shift < 0)
    throw GridMismatch("Stokes target bin for the source falls below the grid");

  // Source envelope, truncated to the bins whose Stokes targets exist on
  // both arms. Truncation may only remove negligible tails.
  std::vector<cplx> envelope =
      gaussian_envelope(grid, grid.value(source), config.envelope_sigma);
  double dropped = 0.0;
  for (int b = 0; b < max_shift; ++b) {
    dropped += std::norm(envelope[static_cast<std::size_t>(b)]);
    envelope[static_cast<std::size_t>(b)] = cplx(0.0, 0.0);
  }
  if (dropped > 1e-9)
    throw GridMismatch("source envelope leaks below the reachable Stokes bins");
  if (dropped > 0.0) {
    double remaining = 0.0;
    for (const cplx& a : envelope) remaining += std::norm(a);
    const double scale = 1.0 / std::sqrt(remaining);
    for (cplx& a : envelope) a *= scale;
  }

  std::vector<ModeDescriptor> modes;
  for (Path p : {Path::arm1, Path::arm2, Path::out1, Path::out2})
    for (int b = 0; b < grid.count(); ++b)
      modes.push_back({ModeLabel{p, std::nullopt, b, Species::photon}, -1});
  modes.push_back({ModeLabel{Path::arm1, std::nullopt, std::nullopt, Species::phonon}, -1});
  modes.push_back({ModeLabel{Path::arm2, std::nullopt, std::nullopt, Species::phonon}, -1});
  const RegistryPtr reg = ModeRegistry::make(std::move(modes), 2, config.grid);

  FockKet psi = make_single_photon(reg, Path::arm1, envelope);
  psi = apply_beam_splitter(
      psi, BeamSplitter(config.bs1_transmission, config.bs1_reflection,
                        {Path::arm1, Path::arm2}, {Path::arm1, Path::arm2}));

  // Photon in bin b on an arm -> Stokes photon m bins lower + one phonon of
  // that arm's scatterer.
  SubstitutionTable scattering;
  for (const auto& [arm, m] : {std::pair{Path::arm1, m1}, std::pair{Path::arm2, m2}}) {
    const std::size_t phonon =
        reg->index_of({arm, std::nullopt, std::nullopt, Species::phonon});
    for (int b = max_shift; b < grid.count(); ++b) {
      const std::size_t from = reg->index_of({arm, std::nullopt, b, Species::photon});
      const std::size_t to = reg->index_of({arm, std::nullopt, b - m, Species::photon});
      scattering[from] = {CreationTerm{{to, phonon}, cplx(1.0, 0.0)}};
    }
  }
  psi = apply_creation_substitution(psi, scattering);

  config.env1.require_unit();
  config.env2.require_unit();
  psi = entangle_by_path(psi, {{Path::arm1, config.env1}, {Path::arm2, config.env2}});

  const cplx residue = overlap(config.env1, config.env2);
  const cplx spectral = stokes_autocorrelation(envelope, m1, m2, grid.count());

  DensityOperator base = DensityOperator::from_ket(psi);
  if (config.raman.markovian_trace) {
    // No-memory variant: the scatterers (phonons and emission residue)
    // decohere immediately, leaving the photon correlated with nothing.
    const auto& full = *base.registry();
    const auto photons = full.indices_where(
        [](const ModeLabel& l) { return l.species == Species::photon; });
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < full.size(); ++i)
      if (full.mode(i).label.species != Species::photon) rest.push_back(i);
    base = DensityOperator::tensor(base.partial_trace_keep(photons),
                                   base.partial_trace_keep(rest));
  }

  // Bare output detection never sees a fringe here: the phonon itself is a
  // perfect which-path marker. Heralding restores the product of the two
  // tunable distinguishability factors.
  const cplx herald_overlap = config.raman.markovian_trace ? cplx(0.0, 0.0)
                                                           : residue * spectral;
  return MzPrep{std::move(base), splitter2, detector, cplx(0.0, 0.0), herald_overlap};
}

DensityOperator interfere(const MzPrep& prep, double phase) {
  return apply_beam_splitter(apply_phase(prep.base, PhaseElement::fixed(Path::arm2, phase)),
                             prep.splitter2);
}

}  // namespace

MzConfig default_mz_config() { return MzConfig{}; }

MzConfig default_gedanken_config() {
  MzConfig config;
  config.interaction = MzInteraction::raman;
  config.grid = std::make_shared<ModeGrid>(2.356e15, 1.0e12, 8);
  config.source_bin = 6;
  config.raman.stokes_shift_arm1 = 4.0e12;
  config.raman.stokes_shift_arm2 = 4.0e12;
  return config;
}

ExperimentResult run_mz(const MzConfig& config) {
  const MzPrep prep = prepare_mz(config);
  const std::size_t n = static_cast<std::size_t>(config.sweep_points);

  std::vector<double> phases(n);
  for (std::size_t k = 0; k < n; ++k)
    phases[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);

  std::vector<double> p_d1(n);
  std::vector<double> p_d2(n);
  parallel_for_indexed(n, config.threads, [&](std::size_t k) {
    const DetectionDistribution dist = detect(interfere(prep, phases[k]), prep.detector);
    check_unit_total(dist, "interferometer output");
    p_d1[k] = outcome_probability(dist, {1, 0});
    p_d2[k] = outcome_probability(dist, {0, 1});
  });

  const FringeFit fit = fit_fringe(phases, p_d1);

  ExperimentResult result;
  result.experiment = "mz";
  result.columns = {"phi", "p_d1", "p_d2"};
  result.rows.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    result.rows.push_back({phases[k], p_d1[k], p_d2[k]});
  result.metrics["visibility"] = fit.visibility;
  result.metrics["phase_offset"] = fit.offset;
  result.metrics["mean_d1"] = fit.mean;
  result.metrics["expected_visibility"] = std::abs(prep.fringe_overlap);
  result.metrics["expected_offset"] =
      std::abs(prep.fringe_overlap) > 0.0 ? std::arg(prep.fringe_overlap) : 0.0;

  result.metadata["basis_order"] = kBasisOrderVersion;
  switch (config.interaction) {
    case MzInteraction::none:
      result.metadata["interaction"] = "none";
      break;
    case MzInteraction::generic_entangler:
      result.metadata["interaction"] = "generic_entangler";
      break;
    case MzInteraction::raman:
      result.metadata["interaction"] = "raman";
      result.metadata["markovian_trace"] =
          config.raman.markovian_trace ? "true" : "false";
      break;
  }
  return result;
}

namespace {

struct HeraldedPhonons {
  double probability;
  DensityOperator state;
  double concurrence_value;
  cplx offdiag;
};

HeraldedPhonons herald_phonons(const MzPrep& prep, const DetectionOutcome& want,
                               double phase) {
  const HeraldResult h = herald(interfere(prep, phase), prep.detector, want);
  const std::vector<ModeLabel> phonons = {
      {Path::arm1, std::nullopt, std::nullopt, Species::phonon},
      {Path::arm2, std::nullopt, std::nullopt, Species::phonon}};
  DensityOperator rho = h.state.partial_trace_keep(phonons);
  const double c = concurrence(rho, OccupationQubit{0}, OccupationQubit{1});
  const cplx off = rho.element(FockBasisState{{1, 0}}, FockBasisState{{0, 1}});
  return HeraldedPhonons{h.probability, std::move(rho), c, off};
}

}  // namespace

GedankenResult run_gedanken(const MzConfig& config) {
  if (config.interaction != MzInteraction::raman)
    throw ConfigError("the heralded-phonon chain requires the raman interaction");
  if (config.herald_port != Path::out1 && config.herald_port != Path::out2)
    throw ConfigError("herald_port must be out1 or out2");

  const MzPrep prep = prepare_mz(config);
  const DetectionOutcome want{config.herald_port == Path::out1 ? std::vector<int>{1, 0}
                                                               : std::vector<int>{0, 1}};

  const std::size_t n = static_cast<std::size_t>(config.sweep_points);
  std::vector<double> phases(n);
  for (std::size_t k = 0; k < n; ++k)
    phases[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);

  std::vector<double> probs(n);
  std::vector<double> concs(n);
  std::vector<cplx> offs(n);
  parallel_for_indexed(n, config.threads, [&](std::size_t k) {
    const HeraldedPhonons h = herald_phonons(prep, want, phases[k]);
    probs[k] = h.probability;
    concs[k] = h.concurrence_value;
    offs[k] = h.offdiag;
  });

  ExperimentResult sweep;
  sweep.experiment = "gedanken";
  sweep.columns = {"phi", "herald_probability", "concurrence", "re_offdiag", "im_offdiag"};
  sweep.rows.reserve(n);
  double conc_min = concs.front();
  double conc_max = conc_min;
  double prob_mean = 0.0;
  double knob_gap = 0.0;
  const double expected = std::abs(prep.herald_overlap);
  for (std::size_t k = 0; k < n; ++k) {
    sweep.rows.push_back({phases[k], probs[k], concs[k], offs[k].real(), offs[k].imag()});
    conc_min = std::min(conc_min, concs[k]);
    conc_max = std::max(conc_max, concs[k]);
    prob_mean += probs[k];
    knob_gap = std::max(knob_gap, std::abs(concs[k] - expected));
  }
  prob_mean /= static_cast<double>(n);
  sweep.metrics["concurrence_min"] = conc_min;
  sweep.metrics["concurrence_max"] = conc_max;
  sweep.metrics["herald_probability_mean"] = prob_mean;
  sweep.metrics["pointer_overlap_abs"] = expected;
  sweep.metrics["concurrence_overlap_gap"] = knob_gap;
  sweep.metadata["basis_order"] = kBasisOrderVersion;
  sweep.metadata["herald_port"] = to_string(config.herald_port);
  sweep.metadata["markovian_trace"] = config.raman.markovian_trace ? "true" : "false";

  HeraldedPhonons at_phase = herald_phonons(prep, want, config.phase);
  return GedankenResult{std::move(sweep),      std::move(at_phase.state),
                        at_phase.probability,  at_phase.concurrence_value,
                        at_phase.offdiag,      prep.herald_overlap};
}

ExperimentResult run_antistokes_probe(const DensityOperator& phonon_state, int points,
                                      int threads) {
  if (points < 1) throw ConfigError("points must be positive");
  const ModeRegistry& reg = *phonon_state.registry();
  const ModeLabel ph1{Path::arm1, std::nullopt, std::nullopt, Species::phonon};
  const ModeLabel ph2{Path::arm2, std::nullopt, std::nullopt, Species::phonon};
  if (reg.size() != 2 || !reg.find(ph1) || !reg.find(ph2))
    throw UnsupportedState(
        "anti-Stokes readout expects exactly the two arm phonon modes");

  const double p1 =
      phonon_state.element(FockBasisState{{1, 0}}, FockBasisState{{1, 0}}).real();
  const double p2 =
      phonon_state.element(FockBasisState{{0, 1}}, FockBasisState{{0, 1}}).real();
  if (p1 + p2 < 1e-12)
    throw NothingToRead("no single-phonon weight to convert");

  std::vector<ModeDescriptor> photon_modes;
  for (Path p : {Path::arm1, Path::arm2, Path::out1, Path::out2})
    photon_modes.push_back({ModeLabel{p, std::nullopt, std::nullopt, Species::photon}, -1});
  const RegistryPtr photon_reg =
      ModeRegistry::make(std::move(photon_modes), reg.max_excitations());
  const DensityOperator extended = DensityOperator::tensor(
      phonon_state, DensityOperator::from_ket(FockKet::vacuum(photon_reg)));

  const RegistryPtr joint = extended.registry();
  const std::size_t i_ph1 = joint->index_of(ph1);
  const std::size_t i_ph2 = joint->index_of(ph2);
  const std::size_t i_pt1 =
      joint->index_of({Path::arm1, std::nullopt, std::nullopt, Species::photon});
  const std::size_t i_pt2 =
      joint->index_of({Path::arm2, std::nullopt, std::nullopt, Species::photon});

  // The probe pulse converts each phonon into an anti-Stokes photon leaving
  // along its own arm: a pure relabeling of the excitation.
  const DensityOperator converted = extended.transform([&](const FockBasisState& b) {
    FockBasisState t = b;
    t.occ[i_pt1] = static_cast<std::uint16_t>(t.occ[i_pt1] + t.occ[i_ph1]);
    t.occ[i_pt2] = static_cast<std::uint16_t>(t.occ[i_pt2] + t.occ[i_ph2]);
    t.occ[i_ph1] = 0;
    t.occ[i_ph2] = 0;
    return unit_ket(joint, t);
  });

  const BeamSplitter readout =
      BeamSplitter::balanced({Path::arm1, Path::arm2}, {Path::out1, Path::out2});
  const DetectorModel detector{{Path::out1, Path::out2},
                               DetectorResponse::amplitude_resolving};

  const std::size_t n = static_cast<std::size_t>(points);
  std::vector<double> phases(n);
  for (std::size_t k = 0; k < n; ++k)
    phases[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);

  std::vector<double> p_d1(n);
  std::vector<double> p_d2(n);
  std::vector<double> p_none(n);
  parallel_for_indexed(n, threads, [&](std::size_t k) {
    const DensityOperator out = apply_beam_splitter(
        apply_phase(converted, PhaseElement::fixed(Path::arm2, phases[k])), readout);
    const DetectionDistribution dist = detect(out, detector);
    check_unit_total(dist, "anti-Stokes readout");
    p_d1[k] = outcome_probability(dist, {1, 0});
    p_d2[k] = outcome_probability(dist, {0, 1});
    p_none[k] = outcome_probability(dist, {0, 0});
  });

  const FringeFit fit = fit_fringe(phases, p_d1);

  ExperimentResult result;
  result.experiment = "antistokes_probe";
  result.columns = {"theta", "p_as_d1", "p_as_d2", "p_no_conversion"};
  result.rows.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    result.rows.push_back({phases[k], p_d1[k], p_d2[k], p_none[k]});
  result.metrics["visibility"] = fit.visibility;
  result.metrics["phase_offset"] = fit.offset;
  result.metrics["mean_d1"] = fit.mean;
  result.metrics["single_excitation_weight"] = p1 + p2;
  result.metadata["basis_order"] = kBasisOrderVersion;
  return result;
}

}  // namespace qcorr
