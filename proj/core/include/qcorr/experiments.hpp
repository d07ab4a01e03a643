#pragma once

#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>

#include "qcorr/elements.hpp"
#include "qcorr/entangle.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/sources.hpp"

namespace qcorr {

// Tabular sweep output: one row per sweep point, scalar summaries in
// metrics, free-form flags in metadata. The first column is always the
// sweep variable.
struct ExperimentResult {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, double> metrics;
  std::map<std::string, std::string> metadata;
};

// First-harmonic decomposition of a fringe sampled uniformly over one full
// period: values(k) ~= mean * (1 - visibility * cos(phase_k + offset)).
// On such grids the projection is exact, so visibility equals the
// (max-min)/(max+min) contrast of the underlying continuous fringe even when
// no sample lands exactly on an extremum.
struct FringeFit {
  double mean = 0.0;
  double visibility = 0.0;
  double offset = 0.0;  // in (-pi, pi]
};
FringeFit fit_fringe(const std::vector<double>& phases, const std::vector<double>& values);

// Two-photon interference at a two-output splitter fed by a down-conversion
// pair, with a variable delay on the idler arm and analyzers in the output
// arms. Analyzer angles are optional; absent means bare (polarization-
// distinguishable) detection.
struct HomConfig {
  std::shared_ptr<const ModeGrid> grid;
  PumpSpectrum pump{};  // center <= 0 selects twice the grid center
  SpdcType type = SpdcType::type_ii;
  double bs_transmission = std::numbers::sqrt2 / 2.0;
  double bs_reflection = std::numbers::sqrt2 / 2.0;
  std::optional<double> polarizer1 = std::numbers::pi / 4.0;
  std::optional<double> polarizer2 = std::numbers::pi / 4.0;
  // Arrival-time resolution of the coincidence counter: delays beyond this
  // stamp the photons and remove the cross-bin coherence.
  double coincidence_window = std::numeric_limits<double>::infinity();
  double delay = 0.0;  // seconds; used by the single-shot analyses
  int sweep_points = 81;
  double sweep_coherence_times = 4.0;  // sweep spans +- this many 2pi/bandwidth
  int max_excitations = 2;  // Fock-space truncation of the pair registry
  int threads = 1;
};

// 16 bins of 1e12 rad/s around 2.356e15 rad/s, CW pump, balanced splitter,
// parallel analyzers at pi/4.
HomConfig default_hom_config();

// Sweeps the delay and reports, per point, the coincidence probability
// (conditioned on every photon surviving the analyzers), the bunched-output
// probabilities, the analyzer pass probability, and the spectral purity of
// the reduced signal-arm state.
ExperimentResult run_hom(const HomConfig& config);

// Coincidence post-selection at config.delay, without analyzers: the
// two-photon polarization sector of the post-selected state.
struct HomBellState {
  FockKet state;       // normalized coincidence-sector ket
  double probability;  // post-selection weight
  // Polarization density of the (out1, out2) photon pair, basis order
  // |HH>, |HV>, |VH>, |VV| with the out1 photon first; frequency bins traced.
  Eigen::Matrix4cd polarization_density;
  double concurrence;
  double chsh_s;            // at the singlet-optimal angles
  double singlet_fidelity;  // against (|HV> - |VH>)/sqrt(2)
  double reduced_purity_out1;
};
HomBellState hom_bell_state(const HomConfig& config);

enum class MzInteraction { none, generic_entangler, raman };

struct RamanParams {
  // Per-arm Stokes downshifts; must be whole numbers of grid bins.
  double stokes_shift_arm1 = 0.0;  // rad/s
  double stokes_shift_arm2 = 0.0;
  // Discards scatterer-photon correlations immediately after emission by
  // replacing the joint state with the product of its marginals: the
  // no-memory alternative to keeping the scatterers in the state.
  bool markovian_trace = false;
};

// One photon through a two-arm interferometer. The interaction inside the
// arms is either nothing, a generic which-path entangler writing |E1>/|E2>
// pointer states, or Raman scattering (photon -> Stokes photon + phonon,
// with the per-arm emission residue as the pointer state).
struct MzConfig {
  cplx bs1_transmission{std::numbers::sqrt2 / 2.0, 0.0};
  cplx bs1_reflection{0.0, std::numbers::sqrt2 / 2.0};
  cplx bs2_transmission{std::numbers::sqrt2 / 2.0, 0.0};
  cplx bs2_reflection{0.0, std::numbers::sqrt2 / 2.0};
  double phase = 0.0;  // arm2 phase for the single-shot analyses
  MzInteraction interaction = MzInteraction::none;
  EnvironmentState env1{{cplx(1.0, 0.0), cplx(0.0, 0.0)}, "env1"};
  EnvironmentState env2{{cplx(1.0, 0.0), cplx(0.0, 0.0)}, "env2"};
  // Raman bookkeeping: the frequency grid, the source photon bin (< 0 picks
  // the highest bin compatible with the shifts) and an optional Gaussian
  // source envelope in rad/s (0 = single bin).
  std::shared_ptr<const ModeGrid> grid;
  int source_bin = -1;
  double envelope_sigma = 0.0;
  RamanParams raman;
  Path herald_port = Path::out1;
  int sweep_points = 64;
  int threads = 1;
};

MzConfig default_mz_config();
// 8 bins of 1e12 rad/s around 2.356e15 rad/s, source bin 6, both arms
// downshifting by 4 bins, herald on out1.
MzConfig default_gedanken_config();

// Sweeps the arm phase and reports P(D1), P(D2) plus the fitted fringe
// visibility and offset. The visibility equals the magnitude of the
// which-path pointer overlap; its phase appears as the fringe offset.
ExperimentResult run_mz(const MzConfig& config);

// Full chain: photon -> splitter -> per-arm Raman scattering -> splitter ->
// herald one Stokes photon at the chosen port -> joint phonon state of the
// two arms. Requires interaction == raman.
struct GedankenResult {
  ExperimentResult sweep;
  DensityOperator phonon_state;  // heralded two-mode phonon state at config.phase
  double herald_probability;
  double concurrence;
  cplx phonon_offdiag;    // <1,0|rho|0,1>
  cplx pointer_overlap;   // emission overlap x Stokes spectral autocorrelation
};
GedankenResult run_gedanken(const MzConfig& config);

// Reads the stored phonon coherence back out: a probe converts each arm's
// phonon into an anti-Stokes photon, the arms are recombined on a balanced
// splitter behind a readout phase, and the detection fringe is fitted. The
// fitted visibility equals twice the phonon off-diagonal magnitude (the
// heralded coherence, for a unit single-excitation weight).
ExperimentResult run_antistokes_probe(const DensityOperator& phonon_state,
                                      int points = 64, int threads = 1);

}  // namespace qcorr
