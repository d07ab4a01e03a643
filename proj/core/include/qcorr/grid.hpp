#pragma once

#include <optional>
#include <vector>

#include "qcorr/common.hpp"

namespace qcorr {

// Uniform discretization of a frequency (rad/s) or wavenumber (1/m) axis.
// Bin k sits at center + (k - (count-1)/2) * spacing, so the grid is always
// symmetric about its center; with an even bin count no bin lies exactly on
// the center.
class ModeGrid {
 public:
  ModeGrid(double center, double spacing, int count);

  // Builds a grid from explicit bin values; they must be uniformly spaced
  // and strictly increasing.
  static ModeGrid from_values(const std::vector<double>& values);

  int count() const { return count_; }
  double spacing() const { return spacing_; }
  double center() const { return center_; }
  double value(int k) const;
  std::vector<double> values() const;

  double bandwidth() const { return spacing_ * count_; }
  // Inverse bandwidth sets the scale on which per-bin phases e^{i w tau}
  // dephase; used as the natural unit for delay sweeps.
  double coherence_time() const;

  bool operator==(const ModeGrid&) const = default;

 private:
  double center_;
  double spacing_;
  int count_;
};

// Pump spectral amplitude for parametric sources. sigma == 0 selects a
// monochromatic (CW) pump: only bin pairs whose values sum exactly to
// `center` are populated. sigma > 0 uses a Gaussian amplitude profile
// A(w) ~ exp(-(w - center)^2 / (4 sigma^2)).
struct PumpSpectrum {
  double center = 0.0;
  double sigma = 0.0;

  bool cw() const { return sigma <= 0.0; }
  // Amplitude table over the sums reachable as value(i)+value(j) on `grid`,
  // normalized so the squared magnitudes sum to one.
  std::vector<double> discretized_amplitudes(const ModeGrid& grid) const;
};

// Normalized Gaussian spectral envelope sampled on grid bins. sigma == 0
// collapses to a single bin at (the bin nearest to) `center`.
std::vector<cplx> gaussian_envelope(const ModeGrid& grid, double center,
                                    double sigma);

}  // namespace qcorr
