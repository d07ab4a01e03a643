#pragma once

#include <memory>
#include <optional>

#include "qcorr/density.hpp"

namespace qcorr {

// Type II emits signal and idler with orthogonal polarizations; type I with
// parallel ones. Both place the signal on arm1 and the idler on arm2.
enum class SpdcType { type_i, type_ii };

// Photon pair from parametric down-conversion, kept as a joint spectral
// amplitude psi(j, k) over signal bin j and idler bin k.
struct BiphotonState {
  std::shared_ptr<const ModeGrid> grid;
  Eigen::MatrixXcd psi;
  Path signal_path = Path::arm1;
  Path idler_path = Path::arm2;
  Polarization signal_pol = Polarization::H;
  Polarization idler_pol = Polarization::V;

  // Pearson correlation of the joint bin distribution |psi|^2; -1 for a
  // monochromatic pump, 0 for a separable product.
  double frequency_correlation() const;
  // Purity of the signal-side spectral marginal, 1/Schmidt number in the
  // equal-weight case.
  double reduced_purity() const;
};

// A CW pump (sigma == 0) populates exactly the anti-diagonal bin pairs whose
// frequencies sum to the pump frequency; a broadband pump weights each pair
// by the Gaussian pump amplitude at the sum frequency.
BiphotonState make_spdc(std::shared_ptr<const ModeGrid> grid, const PumpSpectrum& pump,
                        SpdcType type = SpdcType::type_ii);

// Standard two-input, two-output interferometer registry: photon modes on
// {arm1, arm2, out1, out2} x {H, V} x all grid bins.
RegistryPtr biphoton_registry(std::shared_ptr<const ModeGrid> grid,
                              int max_excitations = 2);

// Expands the joint amplitude into creation operators on the registry.
FockKet spdc_to_fock(const BiphotonState& b, RegistryPtr reg);

// One excitation on the photon modes of a path. Without an envelope the path
// must hold a single photon mode; with one, amplitudes are assigned by
// frequency bin (envelope indexed like the registry grid).
FockKet make_single_photon(RegistryPtr reg, Path path,
                           const std::optional<std::vector<cplx>>& envelope = std::nullopt);

// Registry for a multimode source field: one photon mode per grid bin on a
// single path, two excitations allowed.
RegistryPtr thermal_registry(std::shared_ptr<const ModeGrid> grid);

// Equal-weight incoherent mixture of all unordered two-photon occupations of
// the source bins; include_diagonal keeps the double occupations |2_q>.
DensityOperator make_thermal_pair_mixture(std::shared_ptr<const ModeGrid> grid,
                                          bool include_diagonal = true);

}  // namespace qcorr
