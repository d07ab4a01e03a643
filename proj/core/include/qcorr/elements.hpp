#pragma once

#include <limits>
#include <map>
#include <optional>

#include "qcorr/density.hpp"

namespace qcorr {

// Two-port splitter acting on every photon mode of a path pair, identity on
// all internal labels (polarization, frequency bin). The single-photon map is
//   |1>_in1 -> alpha |1>_out1 + beta |1>_out2,
//   |1>_in2 -> -conj(beta) |1>_out1 + conj(alpha) |1>_out2,
// an SU(2) completion that is unitary for any |alpha|^2+|beta|^2 = 1. With
// real magnitudes the reflected amplitude carries the conventional factor i,
// which makes the matrix symmetric between the two ports.
class BeamSplitter {
 public:
  BeamSplitter(cplx transmission, cplx reflection, std::pair<Path, Path> in,
               std::pair<Path, Path> out);

  static BeamSplitter balanced(std::pair<Path, Path> in, std::pair<Path, Path> out);
  // Real magnitudes t, r; the factor i is attached to r here.
  static BeamSplitter from_magnitudes(double t, double r, std::pair<Path, Path> in,
                                      std::pair<Path, Path> out);

  cplx transmission() const { return alpha_; }
  cplx reflection() const { return beta_; }
  std::pair<Path, Path> input() const { return in_; }
  std::pair<Path, Path> output() const { return out_; }
  Eigen::Matrix2cd mode_matrix() const;  // columns are the port images
  bool balanced_ratio() const;

 private:
  cplx alpha_, beta_;
  std::pair<Path, Path> in_, out_;
};

FockKet apply_beam_splitter(const FockKet& state, const BeamSplitter& bs);
DensityOperator apply_beam_splitter(const DensityOperator& state, const BeamSplitter& bs);

// Phase retarder on the photon modes of one path: either a fixed phase
// (e^{i n phi} per basis state with n quanta on the path) or a group delay
// tau, which acts as e^{i w_k tau} per frequency bin and therefore needs the
// registry to carry a grid.
class PhaseElement {
 public:
  static PhaseElement fixed(Path path, double phase,
                            std::optional<Polarization> pol = std::nullopt);
  static PhaseElement delay(Path path, double tau,
                            std::optional<Polarization> pol = std::nullopt);

  Path path() const { return path_; }
  bool is_delay() const { return delay_; }
  double value() const { return value_; }

 private:
  PhaseElement() = default;
  Path path_{};
  std::optional<Polarization> pol_;
  bool delay_ = false;
  double value_ = 0.0;

  friend FockKet apply_phase(const FockKet&, const PhaseElement&);
};

FockKet apply_phase(const FockKet& state, const PhaseElement& elem);
DensityOperator apply_phase(const DensityOperator& state, const PhaseElement& elem);

// Linear polarizer on a path: transmits the cos(theta) H + sin(theta) V
// component of every photon on that path and absorbs the orthogonal one.
// Applying it is a projection; the pass probability comes back alongside the
// renormalized state (an empty ket when the probability vanishes).
struct Polarizer {
  Path path;
  double angle;
};

std::pair<FockKet, double> apply_polarizer(const FockKet& state, const Polarizer& pol);
std::pair<DensityOperator, double> apply_polarizer(const DensityOperator& state,
                                                   const Polarizer& pol);

enum class DetectorResponse { amplitude_resolving, bucket };

// A bank of detectors, one per watched path, seeing a single species.
// coincidence_window is the timing resolution used by experiments that pair
// it with delay elements: delay mismatches beyond the window mark arrival
// order and make branches distinguishable by a hard cutoff.
struct DetectorModel {
  std::vector<Path> watched;
  DetectorResponse response = DetectorResponse::amplitude_resolving;
  double coincidence_window = std::numeric_limits<double>::infinity();
  Species species = Species::photon;
};

// Counts per watched path, in the order the paths were listed;
// bucket detectors clamp each count to {0, 1}.
struct DetectionOutcome {
  std::vector<int> counts;
  auto operator<=>(const DetectionOutcome&) const = default;
};

using DetectionDistribution = std::map<DetectionOutcome, double>;

DetectionDistribution detect(const FockKet& state, const DetectorModel& det);
DetectionDistribution detect(const DensityOperator& state, const DetectorModel& det);

struct HeraldResult {
  double probability;
  DensityOperator state;  // watched modes projected out (absorbed)
};

// Conditions on an exact outcome at the detectors and absorbs the detected
// quanta: the outcome's modes are projected and traced away. Throws
// HeraldFailure when the outcome has (numerically) zero probability and
// EmptySubsystem when nothing would remain.
HeraldResult herald(const FockKet& state, const DetectorModel& det,
                    const DetectionOutcome& outcome);
HeraldResult herald(const DensityOperator& state, const DetectorModel& det,
                    const DetectionOutcome& outcome);

}  // namespace qcorr
