#include "qcorr/grid.hpp"

#include <cmath>
#include <numbers>

namespace qcorr {

ModeGrid::ModeGrid(double center, double spacing, int count)
    : center_(center), spacing_(spacing), count_(count) {
  if (count < 2) throw DegenerateGrid("grid needs at least 2 bins, got " + std::to_string(count));
  if (!(spacing > 0.0)) throw DegenerateGrid("grid spacing must be positive");
}

ModeGrid ModeGrid::from_values(const std::vector<double>& values) {
  if (values.size() < 2) throw DegenerateGrid("grid needs at least 2 bins");
  const double spacing = values[1] - values[0];
  if (!(spacing > 0.0)) throw DegenerateGrid("grid values must be strictly increasing");
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double step = values[k] - values[k - 1];
    if (std::abs(step - spacing) > 1e-9 * std::abs(spacing))
      throw DegenerateGrid("grid values must be uniformly spaced");
  }
  const double center = 0.5 * (values.front() + values.back());
  return ModeGrid(center, spacing, static_cast<int>(values.size()));
}

double ModeGrid::value(int k) const {
  if (k < 0 || k >= count_)
    throw GridMismatch("bin " + std::to_string(k) + " outside grid of " + std::to_string(count_) + " bins");
  return center_ + (k - 0.5 * (count_ - 1)) * spacing_;
}

std::vector<double> ModeGrid::values() const {
  std::vector<double> v(count_);
  for (int k = 0; k < count_; ++k) v[k] = value(k);
  return v;
}

double ModeGrid::coherence_time() const {
  return 2.0 * std::numbers::pi / bandwidth();
}

std::vector<double> PumpSpectrum::discretized_amplitudes(const ModeGrid& grid) const {
  // Reachable sums value(i)+value(j) form a uniform grid of 2*count-1 points
  // spaced by the bin spacing and centered on 2*grid.center().
  const int n = 2 * grid.count() - 1;
  std::vector<double> amp(n, 0.0);
  double norm2 = 0.0;
  for (int m = 0; m < n; ++m) {
    const double sum = 2.0 * grid.center() + (m - (grid.count() - 1)) * grid.spacing();
    double a;
    if (cw()) {
      a = (std::abs(sum - center) <= 1e-9 * grid.spacing()) ? 1.0 : 0.0;
    } else {
      const double d = sum - center;
      a = std::exp(-d * d / (4.0 * sigma * sigma));
    }
    amp[m] = a;
    norm2 += a * a;
  }
  if (norm2 <= 0.0)
    throw GridMismatch("pump center not representable as a sum of two grid bins");
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& a : amp) a *= inv;
  return amp;
}

std::vector<cplx> gaussian_envelope(const ModeGrid& grid, double center, double sigma) {
  std::vector<cplx> env(grid.count(), 0.0);
  double norm2 = 0.0;
  if (sigma <= 0.0) {
    int best = 0;
    double dist = std::abs(grid.value(0) - center);
    for (int k = 1; k < grid.count(); ++k) {
      const double d = std::abs(grid.value(k) - center);
      if (d < dist) { dist = d; best = k; }
    }
    env[best] = 1.0;
    return env;
  }
  for (int k = 0; k < grid.count(); ++k) {
    const double d = grid.value(k) - center;
    const double a = std::exp(-d * d / (4.0 * sigma * sigma));
    env[k] = a;
    norm2 += a * a;
  }
  if (norm2 <= 0.0) throw GridMismatch("envelope vanishes on every grid bin");
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : env) a *= inv;
  return env;
}

}  // namespace qcorr
