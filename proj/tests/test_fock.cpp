#include <doctest.h>

#include <cmath>

#include "qcorr/fock.hpp"

using namespace qcorr;

namespace {

ModeLabel photon(Path p, int bin) {
  return ModeLabel{p, std::nullopt, bin, Species::photon};
}

RegistryPtr two_mode_registry(int cap = 2) {
  return ModeRegistry::make({{photon(Path::arm1, 0), -1}, {photon(Path::arm1, 1), -1}},
                            cap);
}

}  // namespace

TEST_CASE("registry_sorts_modes_and_rejects_duplicates") {
  auto reg = ModeRegistry::make({{photon(Path::arm2, 1), -1},
                                 {photon(Path::arm1, 0), -1},
                                 {photon(Path::arm2, 0), -1}});
  REQUIRE(reg->size() == 3);
  CHECK(reg->mode(0).label == photon(Path::arm1, 0));
  CHECK(reg->mode(1).label == photon(Path::arm2, 0));
  CHECK(reg->mode(2).label == photon(Path::arm2, 1));
  CHECK(reg->index_of(photon(Path::arm2, 0)) == 1);
  CHECK(!reg->find(photon(Path::out1, 0)).has_value());
  CHECK_THROWS_AS(reg->index_of(photon(Path::out1, 0)), UnknownMode);

  CHECK_THROWS_AS(ModeRegistry::make({{photon(Path::arm1, 0), -1},
                                      {photon(Path::arm1, 0), -1}}),
                  ModeCollision);
}

TEST_CASE("mode_label_ordering_is_field_lexicographic") {
  const ModeLabel bare{Path::arm1, std::nullopt, std::nullopt, Species::photon};
  const ModeLabel with_pol{Path::arm1, Polarization::H, std::nullopt, Species::photon};
  const ModeLabel later_path{Path::arm2, std::nullopt, std::nullopt, Species::photon};
  const ModeLabel phonon{Path::arm1, std::nullopt, std::nullopt, Species::phonon};
  CHECK(bare < with_pol);        // absent optional sorts first
  CHECK(with_pol < later_path);  // path dominates everything after it
  CHECK(bare < phonon);          // species is the least significant field
}

TEST_CASE("basis_kets_and_inner_products") {
  auto reg = two_mode_registry();
  FockKet a = FockKet::basis(reg, {{photon(Path::arm1, 0), 1}});
  FockKet b = FockKet::basis(reg, {{photon(Path::arm1, 1), 1}});
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(a.inner(b)) == 0.0);
  FockKet sup = a.plus(b.scaled(cplx(0.0, 1.0)));
  CHECK(sup.norm() == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
  CHECK(sup.inner(a) == cplx(1.0, 0.0));
  // inner is conjugate-linear in the bra
  CHECK(a.inner(sup) == cplx(1.0, 0.0));
  CHECK(b.inner(sup) == cplx(0.0, 1.0));
  CHECK(sup.inner(b) == cplx(0.0, -1.0));
}

TEST_CASE("excitation_cap_is_enforced_and_environment_is_exempt") {
  auto reg = two_mode_registry(2);
  CHECK_THROWS_AS(FockKet::basis(reg, {{photon(Path::arm1, 0), 3}}),
                  TruncationOverflow);
  CHECK_THROWS_AS(FockKet::basis(reg, {{photon(Path::arm1, 0), 2},
                                       {photon(Path::arm1, 1), 1}}),
                  TruncationOverflow);

  const ModeLabel env{Path::arm1, std::nullopt, std::nullopt, Species::environment};
  auto with_env = ModeRegistry::make({{photon(Path::arm1, 0), -1}, {env, 3}}, 2);
  // two photons plus a level-3 pointer: the pointer does not count
  FockKet ok = FockKet::basis(with_env, {{photon(Path::arm1, 0), 2}, {env, 3}});
  CHECK(ok.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(FockKet::basis(with_env, {{env, 4}}), TruncationOverflow);
}

TEST_CASE("tensor_product_multiplies_amplitudes_on_the_union_registry") {
  auto left = ModeRegistry::make({{photon(Path::arm1, 0), -1}});
  auto right = ModeRegistry::make({{photon(Path::arm2, 0), -1}});
  FockKet a = FockKet::basis(left, {{photon(Path::arm1, 0), 1}}).scaled(cplx(0.5, 0.0));
  FockKet b = FockKet::basis(right, {{photon(Path::arm2, 0), 1}}).scaled(cplx(0.0, 2.0));
  FockKet ab = tensor(a, b);
  REQUIRE(ab.registry()->size() == 2);
  FockBasisState s{{1, 1}};
  CHECK(ab.amplitude(s) == cplx(0.0, 1.0));

  CHECK_THROWS_AS(tensor(a, a), ModeCollision);
}

TEST_CASE("unit_ket_and_extension") {
  auto reg = two_mode_registry();
  FockKet k = unit_ket(reg, FockBasisState{{0, 2}});
  CHECK(k.support_size() == 1);
  CHECK(k.amplitude(FockBasisState{{0, 2}}) == cplx(1.0, 0.0));

  auto super = ModeRegistry::make({{photon(Path::arm1, 0), -1},
                                   {photon(Path::arm1, 1), -1},
                                   {photon(Path::out1, 0), -1}},
                                  2);
  FockKet ext = k.extended(super);
  CHECK(ext.amplitude(FockBasisState{{0, 2, 0}}) == cplx(1.0, 0.0));
}

TEST_CASE("accumulate_prunes_cancelled_amplitudes") {
  auto reg = two_mode_registry();
  FockKet k = unit_ket(reg, FockBasisState{{1, 0}});
  FockKet cancelled = k.plus(k.scaled(-1.0));
  CHECK(cancelled.support_size() == 0);
  CHECK(cancelled.norm() == 0.0);
  CHECK_THROWS_AS(cancelled.normalized(), ZeroState);
}

TEST_CASE("annihilators_carry_bosonic_factors") {
  auto reg = two_mode_registry();
  FockKet two = FockKet::basis(reg, {{photon(Path::arm1, 0), 2}});
  FockKet one = apply_annihilators(two, {{0, cplx(1.0, 0.0)}});
  CHECK(one.amplitude(FockBasisState{{1, 0}}).real() ==
        doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
  // a a |2> = sqrt(2) * sqrt(1) |0>
  CHECK(vacuum_amplitude(apply_annihilators(one, {{0, cplx(1.0, 0.0)}})).real() ==
        doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
}

TEST_CASE("creation_substitution_is_the_bosonic_homomorphism") {
  auto reg = two_mode_registry();
  FockKet two = FockKet::basis(reg, {{photon(Path::arm1, 0), 2}});
  const double s = std::numbers::sqrt2 / 2.0;
  SubstitutionTable table;
  table[0] = {{{0}, cplx(s, 0.0)}, {{1}, cplx(s, 0.0)}};
  FockKet out = apply_creation_substitution(two, table);
  // ((a1 + a2)/sqrt(2))^2 |0> / sqrt(2): amplitudes 1/2, 1/sqrt(2), 1/2
  CHECK(out.amplitude(FockBasisState{{2, 0}}).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(out.amplitude(FockBasisState{{1, 1}}).real() ==
        doctest::Approx(s).epsilon(1e-14));
  CHECK(out.amplitude(FockBasisState{{0, 2}}).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("project_total_counts_selects_and_renormalizes") {
  auto reg = two_mode_registry();
  FockKet k = unit_ket(reg, FockBasisState{{2, 0}})
                  .plus(unit_ket(reg, FockBasisState{{1, 1}}))
                  .plus(unit_ket(reg, FockBasisState{{0, 2}}))
                  .scaled(1.0 / std::sqrt(3.0));
  auto [w, projected] = project_total_counts(k, {{{0}, 1}});
  CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(projected.amplitude(FockBasisState{{1, 1}}) == cplx(1.0, 0.0));

  auto [none, empty] = project_total_counts(k, {{{0}, 2}, {{1}, 2}});
  CHECK(none == 0.0);
  CHECK(empty.support_size() == 0);
}

TEST_CASE("enumerate_basis_is_lexicographic_and_complete") {
  auto reg = two_mode_registry(2);
  const auto basis = enumerate_basis(*reg);
  REQUIRE(basis.size() == 6);  // (0,0) (0,1) (0,2) (1,0) (1,1) (2,0)
  for (std::size_t i = 1; i < basis.size(); ++i) CHECK(basis[i - 1] < basis[i]);
  CHECK(basis.front() == FockBasisState{{0, 0}});
  CHECK(basis.back() == FockBasisState{{2, 0}});
}

TEST_CASE("registry_merge_and_subset_carry_the_grid") {
  auto grid = std::make_shared<ModeGrid>(10.0, 1.0, 4);
  auto a = ModeRegistry::make({{photon(Path::arm1, 0), -1}}, 2, grid);
  auto b = ModeRegistry::make({{photon(Path::arm2, 0), -1}}, 3);
  auto m = ModeRegistry::merged(*a, *b);
  CHECK(m->max_excitations() == 3);
  REQUIRE(m->grid() != nullptr);
  CHECK(m->grid()->count() == 4);

  auto sub = m->subset({1});
  CHECK(sub->size() == 1);
  CHECK(sub->mode(0).label == photon(Path::arm2, 0));
  CHECK(sub->grid() != nullptr);
}
