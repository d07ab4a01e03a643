#include "qcorr/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcorr/sources.hpp"

namespace qcorr {

SpatialField SpatialField::plane_waves() {
  return SpatialField([](int, double q, double x) { return std::polar(1.0, q * x); },
                      true);
}

SpatialField SpatialField::custom(Profile profile, bool normalize) {
  if (!profile) throw InvariantViolation("spatial field needs a profile function");
  return SpatialField(std::move(profile), normalize);
}

std::vector<cplx> SpatialField::coefficients(const ModeGrid& q_grid, double x) const {
  std::vector<cplx> f(static_cast<std::size_t>(q_grid.count()));
  const double scale =
      normalize_ ? 1.0 / std::sqrt(static_cast<double>(q_grid.count())) : 1.0;
  for (int b = 0; b < q_grid.count(); ++b)
    f[static_cast<std::size_t>(b)] = scale * profile_(b, q_grid.value(b), x);
  return f;
}

namespace {

double direct_sum(const std::vector<cplx>& f1, const std::vector<cplx>& f2) {
  double acc = 0.0;
  for (std::size_t q = 0; q < f1.size(); ++q)
    for (std::size_t r = 0; r < f1.size(); ++r)
      acc += std::norm(f2[q] * f1[r] + f2[r] * f1[q]);
  return acc;
}

G1Decomposition g1_decomposition(const std::vector<cplx>& f1, const std::vector<cplx>& f2) {
  G1Decomposition d;
  for (std::size_t q = 0; q < f1.size(); ++q) {
    d.g11 += std::norm(f1[q]);
    d.g22 += std::norm(f2[q]);
    d.g12 += std::conj(f1[q]) * f2[q];
  }
  d.g2 = d.g11 * d.g22 + std::norm(d.g12);
  return d;
}

double density_route(const DensityOperator& rho, const std::vector<cplx>& f1,
                     const std::vector<cplx>& f2) {
  const auto& reg = *rho.registry();
  if (f1.size() != reg.size() || f2.size() != reg.size())
    throw GridMismatch("field coefficient count does not match the registry");
  for (const auto& b : rho.basis())
    if (total_excitations(b, reg) > 2)
      throw UnsupportedState("pair detection is defined for at most two photons");

  std::vector<std::pair<std::size_t, cplx>> e1, e2;
  e1.reserve(reg.size());
  e2.reserve(reg.size());
  for (std::size_t q = 0; q < reg.size(); ++q) {
    e1.emplace_back(q, f1[q]);
    e2.emplace_back(q, f2[q]);
  }

  const auto& basis = rho.basis();
  std::vector<FockKet> images;
  images.reserve(basis.size());
  for (const auto& b : basis)
    images.push_back(
        apply_annihilators(apply_annihilators(unit_ket(rho.registry(), b), e1), e2));

  cplx acc(0.0, 0.0);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const cplx v = rho.matrix()(i, j);
      if (v == cplx(0.0, 0.0)) continue;
      // Tr[rho A'A] picks up <A b_j | A b_i> against rho_ij.
      acc += v * images[j].inner(images[i]);
    }
  return acc.real();
}

}  // namespace

double g2_direct(const ModeGrid& q_grid, const SpatialField& field1,
                 const SpatialField& field2, double x1, double x2) {
  return direct_sum(field1.coefficients(q_grid, x1), field2.coefficients(q_grid, x2));
}

double g2_direct(const ModeGrid& q_grid, const SpatialField& field, double x1, double x2) {
  return g2_direct(q_grid, field, field, x1, x2);
}

G1Decomposition g2_via_g1(const ModeGrid& q_grid, const SpatialField& field1,
                          const SpatialField& field2, double x1, double x2) {
  return g1_decomposition(field1.coefficients(q_grid, x1),
                          field2.coefficients(q_grid, x2));
}

G1Decomposition g2_via_g1(const ModeGrid& q_grid, const SpatialField& field, double x1,
                          double x2) {
  return g2_via_g1(q_grid, field, field, x1, x2);
}

double g2_from_density(const DensityOperator& rho, const SpatialField& field1,
                       const SpatialField& field2, double x1, double x2) {
  const auto& grid = rho.registry()->grid();
  if (!grid)
    throw MissingFrequencyGrid("state registry carries no source mode grid");
  return density_route(rho, field1.coefficients(*grid, x1),
                       field2.coefficients(*grid, x2));
}

double g2_from_density(const DensityOperator& rho, const SpatialField& field, double x1,
                       double x2) {
  return g2_from_density(rho, field, field, x1, x2);
}

G2Result g2_scan(std::shared_ptr<const ModeGrid> q_grid, const SpatialField& field,
                 double x1, int points, int threads) {
  if (!q_grid) throw MissingFrequencyGrid("separation scan needs a source mode grid");
  const int n = q_grid->count();
  if (points <= 0) points = 8 * n;

  const DensityOperator rho = make_thermal_pair_mixture(q_grid);
  const double period = 2.0 * std::numbers::pi / q_grid->spacing();

  G2Result out;
  out.x1 = x1;
  const std::size_t m = static_cast<std::size_t>(points);
  out.x2.resize(m);
  out.direct.resize(m);
  out.g11.resize(m);
  out.g22.resize(m);
  out.g12.resize(m);
  out.via_g1.resize(m);
  out.from_density.resize(m);
  parallel_for_indexed(m, threads, [&](std::size_t k) {
    const double x2 = x1 + period * static_cast<double>(k) / static_cast<double>(points);
    out.x2[k] = x2;
    out.direct[k] = g2_direct(*q_grid, field, x1, x2);
    const G1Decomposition d = g2_via_g1(*q_grid, field, x1, x2);
    out.g11[k] = d.g11;
    out.g22[k] = d.g22;
    out.g12[k] = d.g12;
    out.via_g1[k] = d.g2;
    out.from_density[k] = g2_from_density(rho, field, x1, x2);
  });
  for (std::size_t k = 0; k < m; ++k)
    out.cauchy_schwarz_max =
        std::max(out.cauchy_schwarz_max, std::norm(out.g12[k]) / (out.g11[k] * out.g22[k]));

  const auto [lo, hi] = std::minmax_element(out.direct.begin(), out.direct.end());
  if (*hi > 0.0) out.visibility = (*hi - *lo) / *hi;
  if (*hi + *lo > 0.0) out.visibility_symmetric = (*hi - *lo) / (*hi + *lo);

  std::vector<double> fringe(out.g12.size());
  for (std::size_t i = 0; i < out.g12.size(); ++i) fringe[i] = std::norm(out.g12[i]);
  const auto [flo, fhi] = std::minmax_element(fringe.begin(), fringe.end());
  if (*fhi + *flo > 0.0) out.dc_subtracted_visibility = (*fhi - *flo) / (*fhi + *flo);

  const std::size_t peak = static_cast<std::size_t>(
      std::max_element(out.direct.begin(), out.direct.end()) - out.direct.begin());
  out.direct_over_via_g1 = out.direct[peak] / out.via_g1[peak];
  out.direct_over_density = out.direct[peak] / out.from_density[peak];
  return out;
}

}  // namespace qcorr
