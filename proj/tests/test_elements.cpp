#include <doctest.h>

#include <cmath>
#include <random>

#include "qcorr/elements.hpp"
#include "qcorr/sources.hpp"

using namespace qcorr;

namespace {

ModeLabel photon(Path p, int bin = 0,
                 std::optional<Polarization> pol = std::nullopt) {
  return ModeLabel{p, pol, bin, Species::photon};
}

RegistryPtr four_port_registry(std::shared_ptr<const ModeGrid> grid = nullptr,
                               int bins = 1, int cap = 2) {
  std::vector<ModeDescriptor> modes;
  for (Path p : {Path::arm1, Path::arm2, Path::out1, Path::out2})
    for (int b = 0; b < bins; ++b) modes.push_back({photon(p, b), -1});
  return ModeRegistry::make(std::move(modes), cap, std::move(grid));
}

}  // namespace

TEST_CASE("beam_splitter_requires_unit_magnitude") {
  CHECK_THROWS_AS(BeamSplitter::from_magnitudes(0.9, 0.9, {Path::arm1, Path::arm2},
                                                {Path::out1, Path::out2}),
                  NonUnitaryElement);
  const BeamSplitter bs = BeamSplitter::balanced({Path::arm1, Path::arm2},
                                                 {Path::out1, Path::out2});
  const Eigen::Matrix2cd u = bs.mode_matrix();
  CHECK((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() < 1e-15);
  CHECK(bs.balanced_ratio());
}

TEST_CASE("random_splitter_matrices_are_unitary") {
  std::mt19937 rng(20240811);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (int trial = 0; trial < 200; ++trial) {
    const double th = angle(rng) / 2.0;
    const cplx t = std::polar(std::cos(th), angle(rng));
    const cplx r = std::polar(std::sin(th), angle(rng));
    const BeamSplitter bs(t, r, {Path::arm1, Path::arm2}, {Path::out1, Path::out2});
    const Eigen::Matrix2cd u = bs.mode_matrix();
    CHECK((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() < 1e-10);
  }
}

TEST_CASE("hom_bunching_on_a_balanced_splitter") {
  auto reg = four_port_registry();
  FockKet in = FockKet::basis(reg, {{photon(Path::arm1), 1}, {photon(Path::arm2), 1}});
  FockKet out = apply_beam_splitter(
      in, BeamSplitter::balanced({Path::arm1, Path::arm2}, {Path::out1, Path::out2}));
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-14));

  const std::size_t o1 = reg->index_of(photon(Path::out1));
  const std::size_t o2 = reg->index_of(photon(Path::out2));
  FockBasisState coincide{{0, 0, 1, 1}};
  CHECK(std::abs(out.amplitude(coincide)) < 1e-15);  // the dip
  CHECK(out.number_expectation(o1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(out.number_expectation(o2) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("splitter_composition_is_the_mode_matrix_product") {
  // Two balanced splitters in series act as their 2x2 product on a single
  // photon: arm1 -> i * arm2 up to global phase with the i convention.
  auto reg = ModeRegistry::make({{photon(Path::arm1), -1}, {photon(Path::arm2), -1}}, 1);
  FockKet in = FockKet::basis(reg, {{photon(Path::arm1), 1}});
  const BeamSplitter bs = BeamSplitter::balanced({Path::arm1, Path::arm2},
                                                 {Path::arm1, Path::arm2});
  FockKet out = apply_beam_splitter(apply_beam_splitter(in, bs), bs);
  const Eigen::Matrix2cd u2 = bs.mode_matrix() * bs.mode_matrix();
  CHECK(std::abs(out.amplitude(FockBasisState{{1, 0}}) - u2(0, 0)) < 1e-14);
  CHECK(std::abs(out.amplitude(FockBasisState{{0, 1}}) - u2(1, 0)) < 1e-14);
}

TEST_CASE("fixed_phase_scales_with_occupation") {
  auto reg = four_port_registry(nullptr, 1, 2);
  FockKet two = FockKet::basis(reg, {{photon(Path::arm1), 2}});
  FockKet phased = apply_phase(two, PhaseElement::fixed(Path::arm1, 0.3));
  const cplx expected = std::exp(cplx(0.0, 2.0 * 0.3));
  CHECK(std::abs(phased.amplitude(FockBasisState{{2, 0, 0, 0}}) - expected) < 1e-14);
}

TEST_CASE("group_delay_needs_a_grid_and_phases_by_bin_frequency") {
  auto bare = four_port_registry();
  FockKet in = FockKet::basis(bare, {{photon(Path::arm1), 1}});
  CHECK_THROWS_AS(apply_phase(in, PhaseElement::delay(Path::arm1, 1.0e-13)),
                  MissingFrequencyGrid);

  auto grid = std::make_shared<ModeGrid>(5.0, 1.0, 2);
  auto reg = four_port_registry(grid, 2);
  const double tau = 0.25;
  FockKet one = FockKet::basis(reg, {{photon(Path::arm1, 1), 1}});
  FockKet delayed = apply_phase(one, PhaseElement::delay(Path::arm1, tau));
  const cplx expected = std::exp(cplx(0.0, grid->value(1) * tau));
  FockBasisState s{{0, 1, 0, 0, 0, 0, 0, 0}};
  CHECK(std::abs(delayed.amplitude(s) - expected) < 1e-14);
}

TEST_CASE("polarizer_projects_and_reports_the_pass_probability") {
  std::vector<ModeDescriptor> modes = {{photon(Path::out1, 0, Polarization::H), -1},
                                       {photon(Path::out1, 0, Polarization::V), -1}};
  auto reg = ModeRegistry::make(std::move(modes), 1);
  FockKet h = FockKet::basis(reg, {{photon(Path::out1, 0, Polarization::H), 1}});

  auto [state, p] = apply_polarizer(h, Polarizer{Path::out1, std::numbers::pi / 3.0});
  CHECK(p == doctest::Approx(0.25).epsilon(1e-12));  // cos^2(60 deg)
  CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // crossed polarizer absorbs everything; the survivor state is empty
  FockKet v = FockKet::basis(reg, {{photon(Path::out1, 0, Polarization::V), 1}});
  auto [gone, p0] = apply_polarizer(v, Polarizer{Path::out1, 0.0});
  CHECK(p0 == 0.0);
  CHECK(gone.support_size() == 0);
}

TEST_CASE("detect_enumerates_count_distributions") {
  auto reg = four_port_registry();
  FockKet in = FockKet::basis(reg, {{photon(Path::arm1), 1}, {photon(Path::arm2), 1}});
  FockKet out = apply_beam_splitter(
      in, BeamSplitter::balanced({Path::arm1, Path::arm2}, {Path::out1, Path::out2}));
  DetectorModel det{{Path::out1, Path::out2}};
  auto dist = detect(out, det);
  CHECK(dist[DetectionOutcome{{2, 0}}] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dist[DetectionOutcome{{0, 2}}] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dist[DetectionOutcome{{1, 1}}] < 1e-15);

  DetectorModel bucket = det;
  bucket.response = DetectorResponse::bucket;
  auto clicks = detect(out, bucket);
  CHECK(clicks[DetectionOutcome{{1, 0}}] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(clicks[DetectionOutcome{{0, 1}}] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("herald_conditions_and_absorbs_the_detected_quanta") {
  auto grid = std::make_shared<ModeGrid>(5.0, 1.0, 2);
  std::vector<ModeDescriptor> modes;
  for (Path p : {Path::out1, Path::out2})
    modes.push_back({photon(p, 0), -1});
  modes.push_back({ModeLabel{Path::arm1, std::nullopt, std::nullopt, Species::phonon}, -1});
  auto reg = ModeRegistry::make(std::move(modes), 2, grid);

  // (|out1, phonon> + |out2, phonon>)/sqrt(2); heralding out1 keeps the phonon
  FockKet k = FockKet::basis(reg, {{photon(Path::out1, 0), 1},
                                   {ModeLabel{Path::arm1, std::nullopt, std::nullopt,
                                              Species::phonon},
                                    1}})
                  .plus(FockKet::basis(reg, {{photon(Path::out2, 0), 1},
                                             {ModeLabel{Path::arm1, std::nullopt,
                                                        std::nullopt, Species::phonon},
                                              1}}))
                  .scaled(std::numbers::sqrt2 / 2.0);
  DetectorModel det{{Path::out1, Path::out2}};
  HeraldResult res = herald(k, det, DetectionOutcome{{1, 0}});
  CHECK(res.probability == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(res.state.registry()->size() == 1);
  CHECK(res.state.trace() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(herald(k, det, DetectionOutcome{{2, 0}}), HeraldFailure);
}

TEST_CASE("density_and_ket_routes_agree_for_unitary_elements") {
  auto reg = four_port_registry();
  FockKet in = FockKet::basis(reg, {{photon(Path::arm1), 1}, {photon(Path::arm2), 1}});
  const BeamSplitter bs = BeamSplitter::balanced({Path::arm1, Path::arm2},
                                                 {Path::out1, Path::out2});
  FockKet out_ket = apply_beam_splitter(in, bs);
  DensityOperator out_rho = apply_beam_splitter(DensityOperator::from_ket(in), bs);
  CHECK(out_rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(out_rho, out_ket.normalized()) == doctest::Approx(1.0).epsilon(1e-12));
}
