#pragma once

#include <functional>
#include <memory>

#include "qcorr/density.hpp"

namespace qcorr {

// Spatial profile of the detected field: the positive-frequency operator at
// position x decomposes as E(x) = sum_q f(x; q) a_q over the source modes q.
// The default model is far-field plane waves f(x; q) = e^{i q x} / sqrt(N),
// which keeps sum_q |f|^2 = 1 at every position.
class SpatialField {
 public:
  // bin is the grid index of q; the profile returns f(x; q) before any
  // normalization.
  using Profile = std::function<cplx(int bin, double q, double x)>;

  static SpatialField plane_waves();
  // Arbitrary propagation model; normalize divides by sqrt(bin count).
  static SpatialField custom(Profile profile, bool normalize = false);

  // f(x; q) evaluated on every bin of the source grid.
  std::vector<cplx> coefficients(const ModeGrid& q_grid, double x) const;

 private:
  SpatialField(Profile profile, bool normalize)
      : profile_(std::move(profile)), normalize_(normalize) {}
  Profile profile_;
  bool normalize_;
};

// Double sum over ordered source-mode pairs (q, q') of the symmetrized pair
// amplitude |f2(x2;q) f1(x1;q') + f2(x2;q') f1(x1;q)|^2, including q == q'.
// Equals 2 * g2_via_g1(...).g2 identically; the operator route fixes the
// absolute scale (see g2_from_density).
double g2_direct(const ModeGrid& q_grid, const SpatialField& field, double x1, double x2);
double g2_direct(const ModeGrid& q_grid, const SpatialField& field1,
                 const SpatialField& field2, double x1, double x2);

// The same quantity decomposed into first-order coherences:
// g11 = sum_q |f1(x1;q)|^2, g22 = sum_q |f2(x2;q)|^2,
// g12 = sum_q conj(f1(x1;q)) f2(x2;q), g2 = g11 g22 + |g12|^2.
struct G1Decomposition {
  double g11 = 0.0;
  double g22 = 0.0;
  cplx g12{0.0, 0.0};
  double g2 = 0.0;
};
G1Decomposition g2_via_g1(const ModeGrid& q_grid, const SpatialField& field, double x1,
                          double x2);
G1Decomposition g2_via_g1(const ModeGrid& q_grid, const SpatialField& field1,
                          const SpatialField& field2, double x1, double x2);

// Operator-level route: Tr[rho E1' E2' E2 E1] evaluated by applying the
// annihilation sums to the state (primes denote adjoints). The state must
// live on a registry whose modes are the bins of its grid, and may hold at
// most two photons; vacuum and single-photon states give 0. For the
// equal-weight pair mixture over N modes (diagonal pairs included),
// g2_direct = N (N + 1) * g2_from_density pointwise.
double g2_from_density(const DensityOperator& rho, const SpatialField& field1,
                       const SpatialField& field2, double x1, double x2);
double g2_from_density(const DensityOperator& rho, const SpatialField& field, double x1,
                       double x2);

struct G2Result {
  double x1 = 0.0;
  std::vector<double> x2;
  std::vector<double> direct;
  std::vector<double> g11;
  std::vector<double> g22;
  std::vector<cplx> g12;
  std::vector<double> via_g1;
  std::vector<double> from_density;
  // Contrast of the G2 trace quoted against its peak: the constant g11*g22
  // floor cannot exceed the interference term (Cauchy-Schwarz), which caps
  // this at 1/2. The symmetric (max-min)/(max+min) variant is reported
  // alongside for reference.
  double visibility = 0.0;
  double visibility_symmetric = 0.0;
  // (max-min)/(max+min) of the |g12|^2 fringe alone: 1 when the scan passes
  // through a zero of g12.
  double dc_subtracted_visibility = 0.0;
  double cauchy_schwarz_max = 0.0;  // max |g12|^2 / (g11 g22) over the scan
  double direct_over_via_g1 = 0.0;  // route ratios, constant across the scan
  double direct_over_density = 0.0;
};

// Holds detector 1 at x1 and sweeps detector 2 over one spatial beat period
// 2 pi / dq starting at x1. points <= 0 selects 8 N samples, a multiple of N
// so the interference fringe passes exactly through its zeros.
G2Result g2_scan(std::shared_ptr<const ModeGrid> q_grid, const SpatialField& field,
                 double x1 = 0.0, int points = 0, int threads = 1);

}  // namespace qcorr
