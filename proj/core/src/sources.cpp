#include "qcorr/sources.hpp"

#include <cmath>

namespace qcorr {

double BiphotonState::frequency_correlation() const {
  const int n = grid->count();
  double total = 0.0, ms = 0.0, mi = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double p = std::norm(psi(j, k));
      total += p;
      ms += p * grid->value(j);
      mi += p * grid->value(k);
    }
  if (total <= 0.0) throw ZeroState("empty joint spectral amplitude");
  ms /= total;
  mi /= total;
  double vs = 0.0, vi = 0.0, cov = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double p = std::norm(psi(j, k)) / total;
      const double ds = grid->value(j) - ms;
      const double di = grid->value(k) - mi;
      vs += p * ds * ds;
      vi += p * di * di;
      cov += p * ds * di;
    }
  const double denom = std::sqrt(vs * vi);
  if (denom <= 0.0) return 0.0;
  return cov / denom;
}

double BiphotonState::reduced_purity() const {
  const double n2 = psi.squaredNorm();
  if (n2 <= 0.0) throw ZeroState("empty joint spectral amplitude");
  const Eigen::MatrixXcd rho = psi * psi.adjoint() / n2;
  return (rho * rho).trace().real();
}

BiphotonState make_spdc(std::shared_ptr<const ModeGrid> grid, const PumpSpectrum& pump,
                        SpdcType type) {
  if (!grid) throw MissingFrequencyGrid("parametric source needs a frequency grid");
  const int n = grid->count();
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(n, n);
  double norm2 = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double sum = grid->value(j) + grid->value(k);
      double a;
      if (pump.cw()) {
        a = (std::abs(sum - pump.center) <= 1e-9 * grid->spacing()) ? 1.0 : 0.0;
      } else {
        const double d = sum - pump.center;
        a = std::exp(-d * d / (4.0 * pump.sigma * pump.sigma));
      }
      psi(j, k) = a;
      norm2 += a * a;
    }
  if (norm2 <= 0.0)
    throw GridMismatch("pump center not representable as a sum of two grid bins");
  psi /= std::sqrt(norm2);

  BiphotonState b;
  b.grid = std::move(grid);
  b.psi = std::move(psi);
  if (type == SpdcType::type_i) b.idler_pol = b.signal_pol;
  return b;
}

RegistryPtr biphoton_registry(std::shared_ptr<const ModeGrid> grid, int max_excitations) {
  if (!grid) throw MissingFrequencyGrid("biphoton registry needs a frequency grid");
  std::vector<ModeDescriptor> modes;
  modes.reserve(static_cast<std::size_t>(8) * grid->count());
  for (Path p : {Path::arm1, Path::arm2, Path::out1, Path::out2})
    for (Polarization pol : {Polarization::H, Polarization::V})
      for (int k = 0; k < grid->count(); ++k)
        modes.push_back({ModeLabel{p, pol, k, Species::photon}, -1});
  return ModeRegistry::make(std::move(modes), max_excitations, std::move(grid));
}

FockKet spdc_to_fock(const BiphotonState& b, RegistryPtr reg) {
  if (!reg->grid() || !(*reg->grid() == *b.grid))
    throw GridMismatch("registry grid does not match the biphoton grid");
  FockKet out = FockKet::vacuum(reg).scaled(0.0);
  const int n = b.grid->count();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const cplx a = b.psi(j, k);
      if (a == cplx(0.0, 0.0)) continue;
      const std::size_t is =
          reg->index_of(ModeLabel{b.signal_path, b.signal_pol, j, Species::photon});
      const std::size_t ii =
          reg->index_of(ModeLabel{b.idler_path, b.idler_pol, k, Species::photon});
      FockBasisState s;
      s.occ.assign(reg->size(), 0);
      s.occ[is] = 1;
      s.occ[ii] = static_cast<std::uint16_t>(s.occ[ii] + 1);
      // adag adag |0> = sqrt(2) |2> when both quanta land in one mode.
      out.accumulate(std::move(s), (is == ii) ? a * std::sqrt(2.0) : a);
    }
  return out.normalized();
}

FockKet make_single_photon(RegistryPtr reg, Path path,
                           const std::optional<std::vector<cplx>>& envelope) {
  const auto idx = reg->indices_where([&](const ModeLabel& l) {
    return l.path == path && l.species == Species::photon;
  });
  if (idx.empty())
    throw UnknownMode("no photon modes on source path " + to_string(path));

  FockKet out = FockKet::vacuum(reg).scaled(0.0);
  if (!envelope) {
    if (idx.size() != 1)
      throw GridMismatch("path " + to_string(path) +
                         " holds several photon modes; a spectral envelope is required");
    FockBasisState s;
    s.occ.assign(reg->size(), 0);
    s.occ[idx[0]] = 1;
    out.accumulate(std::move(s), cplx(1.0, 0.0));
    return out;
  }

  if (!reg->grid())
    throw MissingFrequencyGrid("spectral envelope needs a registry with a frequency grid");
  if (static_cast<int>(envelope->size()) != reg->grid()->count())
    throw GridMismatch("envelope has " + std::to_string(envelope->size()) +
                       " entries for a grid of " + std::to_string(reg->grid()->count()) +
                       " bins");
  std::vector<bool> seen(envelope->size(), false);
  for (std::size_t i : idx) {
    const ModeLabel& l = reg->mode(i).label;
    if (!l.frequency_bin)
      throw GridMismatch("mode " + l.str() + " has no frequency bin for the envelope");
    if (seen[static_cast<std::size_t>(*l.frequency_bin)])
      throw GridMismatch("several photon modes on " + to_string(path) + " share bin " +
                         std::to_string(*l.frequency_bin));
    seen[static_cast<std::size_t>(*l.frequency_bin)] = true;
    const cplx a = (*envelope)[static_cast<std::size_t>(*l.frequency_bin)];
    if (a == cplx(0.0, 0.0)) continue;
    FockBasisState s;
    s.occ.assign(reg->size(), 0);
    s.occ[i] = 1;
    out.accumulate(std::move(s), a);
  }
  return out.normalized();
}

RegistryPtr thermal_registry(std::shared_ptr<const ModeGrid> grid) {
  if (!grid) throw MissingFrequencyGrid("source field registry needs a grid");
  std::vector<ModeDescriptor> modes;
  modes.reserve(static_cast<std::size_t>(grid->count()));
  for (int k = 0; k < grid->count(); ++k)
    modes.push_back({ModeLabel{Path::arm1, std::nullopt, k, Species::photon}, -1});
  return ModeRegistry::make(std::move(modes), 2, std::move(grid));
}

DensityOperator make_thermal_pair_mixture(std::shared_ptr<const ModeGrid> grid,
                                          bool include_diagonal) {
  RegistryPtr reg = thermal_registry(std::move(grid));
  const int n = static_cast<int>(reg->size());
  std::vector<std::pair<FockBasisState, double>> weights;
  for (int q1 = 0; q1 < n; ++q1)
    for (int q2 = q1; q2 < n; ++q2) {
      if (!include_diagonal && q1 == q2) continue;
      FockBasisState s;
      s.occ.assign(reg->size(), 0);
      if (q1 == q2) {
        s.occ[q1] = 2;
      } else {
        s.occ[q1] = 1;
        s.occ[q2] = 1;
      }
      weights.emplace_back(std::move(s), 1.0);
    }
  if (weights.empty())
    throw DegenerateGrid("no photon pairs available on this source grid");
  const double w = 1.0 / static_cast<double>(weights.size());
  for (auto& [s, v] : weights) v = w;
  return DensityOperator::diagonal_mixture(std::move(reg), weights);
}

}  // namespace qcorr
