// Acceptance harness: one numbered check per line, [PASS]/[FAIL] verdicts,
// nonzero exit when anything fails. Tolerances are stated inline with each
// check so the output is self-describing.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/config.hpp"
#include "qcorr/experiments.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/sources.hpp"
#include "qcorr/thermal.hpp"
#include "oracles.hpp"

using namespace qcorr;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] %d. %s (%s)\n", ok ? "PASS" : "FAIL", number, what.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

int column(const ExperimentResult& r, const std::string& name) {
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    if (r.columns[i] == name) return static_cast<int>(i);
  std::fprintf(stderr, "missing column %s\n", name.c_str());
  std::exit(1);
}

// ---- 1. HOM dip with parallel analyzers ---------------------------------

void criterion_1() {
  const ExperimentResult r = run_hom(default_hom_config());
  const double dip = r.metrics.at("coincidence_at_zero_delay");
  const double edge1 = std::abs(r.metrics.at("coincidence_first") - 0.5);
  const double edge2 = std::abs(r.metrics.at("coincidence_last") - 0.5);
  const double sym = r.metrics.at("dip_symmetry_error");
  const bool ok = dip < 1e-10 && edge1 <= 1e-3 && edge2 <= 1e-3 && sym <= 1e-12;
  report(1, ok, "HOM dip: zero at zero delay, 1/2 at 4 coherence lengths, symmetric",
         "dip=" + num(dip) + ", edge err=" + num(std::max(edge1, edge2)) +
             ", asymmetry=" + num(sym) + "; tol 1e-10 / 1e-3 / 1e-12");
}

// ---- 2. frequency entanglement without a dip -----------------------------

void criterion_2() {
  HomConfig c = default_hom_config();
  c.polarizer1.reset();
  c.polarizer2.reset();
  const ExperimentResult r = run_hom(c);

  // independent partial-trace oracle on the joint spectral amplitude
  const BiphotonState pair =
      make_spdc(c.grid, PumpSpectrum{2.0 * c.grid->center(), 0.0}, SpdcType::type_ii);
  const Eigen::MatrixXcd reduced = pair.psi * pair.psi.adjoint();
  const double oracle_purity = (reduced * reduced).trace().real();

  const int i_c = column(r, "p_coincidence");
  const int i_p = column(r, "signal_purity");
  double max_purity = 0.0, max_purity_err = 0.0, dip_err = 0.0;
  const int i_tau = column(r, "tau");
  for (const auto& row : r.rows) {
    max_purity = std::max(max_purity, row[i_p]);
    max_purity_err = std::max(max_purity_err, std::abs(row[i_p] - oracle_purity));
    if (row[i_tau] == 0.0) dip_err = std::abs(row[i_c] - 0.5);
  }
  const bool ok = max_purity < 1.0 && max_purity_err <= 1e-12 && dip_err <= 1e-10;
  report(2, ok, "bare pairs: reduced-frequency purity < 1 at all delays, no dip",
         "purity=" + num(max_purity) + " (oracle err " + num(max_purity_err) +
             "), P_c(0)-1/2=" + num(dip_err) + "; tol 1e-12 / 1e-10");
}

// ---- 3. Bell/CHSH on the post-selected pair ------------------------------

void criterion_3() {
  HomConfig c = default_hom_config();
  c.polarizer1.reset();
  c.polarizer2.reset();
  const HomBellState b = hom_bell_state(c);
  const double conc_err = std::abs(b.concurrence - 1.0);
  const double chsh_err = std::abs(b.chsh_s - 2.0 * std::numbers::sqrt2);

  Eigen::Vector4cd product = Eigen::Vector4cd::Zero();
  product(1) = 1.0;
  const double s_product =
      chsh(Eigen::Matrix4cd(product * product.adjoint()), chsh_singlet_angles());
  const double s_mixed =
      chsh(Eigen::Matrix4cd(Eigen::Matrix4cd::Identity() / 4.0), chsh_singlet_angles());

  const bool ok = conc_err <= 1e-10 && chsh_err <= 1e-6 &&
                  s_product <= 2.0 + 1e-12 && std::abs(s_mixed) <= 1e-12;
  report(3, ok, "post-selected pair: concurrence 1, CHSH 2*sqrt(2); classical bounds",
         "|C-1|=" + num(conc_err) + ", |S-2sqrt2|=" + num(chsh_err) +
             ", S_product=" + num(s_product) + ", S_mixed=" + num(s_mixed) +
             "; tol 1e-10 / 1e-6");
}

// ---- 4. MZ visibility equals the pointer overlap -------------------------

void criterion_4() {
  double worst = 0.0;
  for (double gamma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    MzConfig c = default_mz_config();
    c.interaction = MzInteraction::generic_entangler;
    auto [e1, e2] = EnvironmentState::pair_with_overlap(gamma);
    c.env1 = e1;
    c.env2 = e2;
    worst = std::max(worst,
                     std::abs(run_mz(c).metrics.at("visibility") - gamma));
  }

  std::mt19937 rng(365001);
  std::normal_distribution<double> g;
  double worst_random = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    auto random_env = [&](const std::string& name) {
      std::vector<cplx> amps(d);
      double n2 = 0.0;
      for (auto& a : amps) {
        a = cplx(g(rng), g(rng));
        n2 += std::norm(a);
      }
      for (auto& a : amps) a /= std::sqrt(n2);
      return EnvironmentState{std::move(amps), name};
    };
    MzConfig c = default_mz_config();
    c.interaction = MzInteraction::generic_entangler;
    c.env1 = random_env("env1");
    c.env2 = random_env("env2");
    const double expected = std::abs(overlap(c.env1, c.env2));
    worst_random = std::max(
        worst_random, std::abs(run_mz(c).metrics.at("visibility") - expected));
  }
  const bool ok = worst <= 1e-10 && worst_random <= 1e-10;
  report(4, ok,
         "MZ visibility = |<E1|E2>| on the gamma grid and 100 random pairs (d=2,3,4)",
         "grid err=" + num(worst) + ", random err=" + num(worst_random) +
             "; tol 1e-10");
}

// ---- 5. gedanken chain: heralded coherence expansion ----------------------

double spectral_overlap_reference(const ModeGrid& g, int source, double sigma,
                                  int m1, int m2) {
  const int n = g.count();
  std::vector<double> env(n, 0.0);
  if (sigma <= 0.0) {
    env[source] = 1.0;
  } else {
    double n2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = g.value(k) - g.value(source);
      env[k] = std::exp(-d * d / (4.0 * sigma * sigma));
      n2 += env[k] * env[k];
    }
    for (double& a : env) a /= std::sqrt(n2);
  }
  double kept = 0.0;
  for (int b = 0; b < n; ++b) {
    if (b < std::max(m1, m2)) env[b] = 0.0;
    kept += env[b] * env[b];
  }
  for (double& a : env) a /= std::sqrt(kept);
  double corr = 0.0;
  for (int t = 0; t < n; ++t) {
    const int b1 = t + m1, b2 = t + m2;
    if (b1 >= n || b2 >= n) continue;
    corr += env[b1] * env[b2];
  }
  return corr;
}

void criterion_5() {
  const GedankenResult ideal = run_gedanken(default_gedanken_config());
  const double ideal_err = std::abs(ideal.concurrence - 1.0);

  // 21-point overlap sweep: 7 residue overlaps x 3 spectral settings, the
  // expected value recomputed here from the envelope definition alone
  struct Spectral {
    int m2;
    double sigma_bins;
  };
  const Spectral spectra[]{{4, 0.0}, {3, 0.45}, {2, 0.45}};
  double sweep_err = 0.0;
  for (const Spectral& sp : spectra) {
    MzConfig c = default_gedanken_config();
    c.raman.stokes_shift_arm2 = sp.m2 * c.grid->spacing();
    c.envelope_sigma = sp.sigma_bins * c.grid->spacing();
    const double s =
        spectral_overlap_reference(*c.grid, 6, c.envelope_sigma, 4, sp.m2);
    for (int k = 0; k < 7; ++k) {
      const double gamma = k / 6.0;
      auto [e1, e2] = EnvironmentState::pair_with_overlap(gamma);
      c.env1 = e1;
      c.env2 = e2;
      const GedankenResult g = run_gedanken(c);
      sweep_err = std::max(sweep_err, std::abs(g.concurrence - gamma * s));
    }
  }

  // the two distinguishability knobs must agree at matched overlap
  MzConfig spectral_knob = default_gedanken_config();
  spectral_knob.raman.stokes_shift_arm2 = 3.0 * spectral_knob.grid->spacing();
  spectral_knob.envelope_sigma = 0.45 * spectral_knob.grid->spacing();
  const double s0 = spectral_overlap_reference(*spectral_knob.grid, 6,
                                               spectral_knob.envelope_sigma, 4, 3);
  MzConfig residue_knob = default_gedanken_config();
  auto [e1, e2] = EnvironmentState::pair_with_overlap(s0);
  residue_knob.env1 = e1;
  residue_knob.env2 = e2;
  const double knob_gap = std::abs(run_gedanken(spectral_knob).concurrence -
                                   run_gedanken(residue_knob).concurrence);

  MzConfig markov = default_gedanken_config();
  markov.raman.markovian_trace = true;
  const double eager = run_gedanken(markov).concurrence;

  MzConfig partial = default_gedanken_config();
  partial.raman.stokes_shift_arm2 = 3.0 * partial.grid->spacing();
  partial.envelope_sigma = 0.45 * partial.grid->spacing();
  const GedankenResult stored = run_gedanken(partial);
  const ExperimentResult probe = run_antistokes_probe(stored.phonon_state);
  const double readout_err = std::abs(probe.metrics.at("visibility") -
                                      2.0 * std::abs(stored.phonon_offdiag));

  const bool ok = ideal_err <= 1e-10 && sweep_err < 1e-10 && knob_gap <= 1e-10 &&
                  eager < 1e-12 && readout_err <= 1e-10;
  report(5, ok,
         "gedanken chain: heralded concurrence = emission overlap, Markovian kill, "
         "anti-Stokes readout",
         "|C-1|=" + num(ideal_err) + ", sweep err=" + num(sweep_err) +
             ", knob gap=" + num(knob_gap) + ", eager C=" + num(eager) +
             ", readout err=" + num(readout_err) + "; tol 1e-10 / 1e-12");
}

// ---- 6. three-route g2 equivalence ---------------------------------------

void criterion_6() {
  std::mt19937 rng(271828);
  std::uniform_real_distribution<double> pos(-25.0, 25.0);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  int draws = 0;
  for (int n = 2; n <= 16; ++n) {
    auto grid = std::make_shared<ModeGrid>(40.0 + n, 0.25 + 0.05 * n, n);
    const DensityOperator rho = make_thermal_pair_mixture(grid, true);
    for (int trial = 0; trial < 67; ++trial, ++draws) {
      std::vector<double> phases(n);
      for (double& p : phases) p = uni(rng);
      const SpatialField field = SpatialField::custom(
          [phases](int bin, double q, double x) {
            return std::polar(1.0, q * x + phases[static_cast<std::size_t>(bin)]);
          },
          true);
      const double x1 = pos(rng), x2 = pos(rng);
      const double direct = g2_direct(*grid, field, x1, x2);
      const double via = g2_via_g1(*grid, field, x1, x2).g2;
      const double density = g2_from_density(rho, field, x1, x2);
      const double scale = std::max(1.0, direct);
      worst = std::max(worst, std::abs(direct - 2.0 * via) / scale);
      worst = std::max(worst, std::abs(direct - n * (n + 1.0) * density) / scale);
    }
  }
  const bool ok = worst <= 1e-12;
  report(6, ok,
         "g2 routes agree: direct = 2 via-g1 = N(N+1) operator, N=2..16, " +
             std::to_string(draws) + " draws",
         "max relative deviation=" + num(worst) + "; tol 1e-12");
}

// ---- 7. visibility bound --------------------------------------------------

void criterion_7() {
  double worst_bound = 0.0, n2_err = 0.0, dc_err = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const G2Result scan =
        g2_scan(std::make_shared<ModeGrid>(55.0, 0.4, n), SpatialField::plane_waves());
    worst_bound = std::max(worst_bound, scan.visibility - 0.5);
    dc_err = std::max(dc_err, std::abs(scan.dc_subtracted_visibility - 1.0));
    if (n == 2) n2_err = std::abs(scan.visibility - 0.5);
  }
  const bool ok = worst_bound <= 1e-12 && n2_err <= 1e-12 && dc_err <= 1e-12;
  report(7, ok, "thermal scan: visibility <= 1/2, = 1/2 at N=2, DC-subtracted = 1",
         "bound excess=" + num(worst_bound) + ", N=2 err=" + num(n2_err) +
             ", DC err=" + num(dc_err) + "; tol 1e-12");
}

// ---- 8. algebraic hygiene over random circuits ----------------------------

void criterion_8() {
  std::mt19937 rng(141421);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> g;

  double worst_unitarity = 0.0, worst_trace = 0.0, worst_recovery = 0.0;
  double worst_negativity = 0.0;

  auto grid = std::make_shared<ModeGrid>(200.0, 1.0, 2);
  std::vector<ModeDescriptor> modes;
  for (Path p : {Path::arm1, Path::arm2})
    for (int b = 0; b < 2; ++b)
      modes.push_back({ModeLabel{p, std::nullopt, b, Species::photon}, -1});
  auto reg = ModeRegistry::make(std::move(modes), 2, grid);
  const auto basis = enumerate_basis(*reg);

  for (int circuit = 0; circuit < 1000; ++circuit) {
    double n2 = 0.0;
    std::vector<cplx> coeff(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      coeff[i] = cplx(g(rng), g(rng));
      n2 += std::norm(coeff[i]);
    }
    FockKet psi = unit_ket(reg, basis[0]).scaled(coeff[0] / std::sqrt(n2));
    for (std::size_t i = 1; i < basis.size(); ++i)
      psi = psi.plus(unit_ket(reg, basis[i]).scaled(coeff[i] / std::sqrt(n2)));
    DensityOperator rho = DensityOperator::from_ket(psi);

    const int depth = 3 + circuit % 4;
    for (int step = 0; step < depth; ++step) {
      const int kind = static_cast<int>(uni(rng) * 3.0);
      if (kind == 0) {
        const double th = angle(rng) / 2.0;
        const BeamSplitter bs(std::polar(std::cos(th), angle(rng)),
                              std::polar(std::sin(th), angle(rng)),
                              {Path::arm1, Path::arm2}, {Path::arm1, Path::arm2});
        const Eigen::Matrix2cd u = bs.mode_matrix();
        worst_unitarity = std::max(
            worst_unitarity,
            (u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm());
        psi = apply_beam_splitter(psi, bs);
        rho = apply_beam_splitter(rho, bs);
      } else if (kind == 1) {
        const PhaseElement ph =
            PhaseElement::fixed(uni(rng) < 0.5 ? Path::arm1 : Path::arm2, angle(rng));
        psi = apply_phase(psi, ph);
        rho = apply_phase(rho, ph);
      } else {
        const PhaseElement ph =
            PhaseElement::delay(uni(rng) < 0.5 ? Path::arm1 : Path::arm2, uni(rng));
        psi = apply_phase(psi, ph);
        rho = apply_phase(rho, ph);
      }
    }

    worst_unitarity = std::max(worst_unitarity, std::abs(psi.norm() - 1.0));
    worst_trace = std::max(worst_trace, std::abs(rho.trace() - 1.0));
    worst_negativity = std::max(worst_negativity, -rho.min_eigenvalue());

    // product-recovery on a fresh random pair of single-mode states
    auto single = [&](Path p, int bin) {
      auto r1 = ModeRegistry::make(
          {{ModeLabel{p, std::nullopt, bin, Species::photon}, -1}}, 2);
      FockKet k = FockKet::vacuum(r1).scaled(cplx(g(rng), g(rng)));
      k = k.plus(unit_ket(r1, FockBasisState{{1}}).scaled(cplx(g(rng), g(rng))));
      k = k.plus(unit_ket(r1, FockBasisState{{2}}).scaled(cplx(g(rng), g(rng))));
      return DensityOperator::from_ket(k.normalized());
    };
    const DensityOperator rho_a = single(Path::arm1, 0);
    const DensityOperator rho_b = single(Path::arm2, 1);
    const DensityOperator joint = DensityOperator::tensor(rho_a, rho_b);
    const ModeLabel la{Path::arm1, std::nullopt, 0, Species::photon};
    const ModeLabel lb{Path::arm2, std::nullopt, 1, Species::photon};
    const DensityOperator back_a = joint.partial_trace_keep(std::vector<ModeLabel>{la});
    const DensityOperator back_b = joint.partial_trace_keep(std::vector<ModeLabel>{lb});
    for (int n1 = 0; n1 <= 2; ++n1)
      for (int m1 = 0; m1 <= 2; ++m1) {
        FockBasisState r{{static_cast<std::uint16_t>(n1)}};
        FockBasisState c{{static_cast<std::uint16_t>(m1)}};
        worst_recovery = std::max(
            worst_recovery, std::abs(back_a.element(r, c) - rho_a.element(r, c)));
        worst_recovery = std::max(
            worst_recovery, std::abs(back_b.element(r, c) - rho_b.element(r, c)));
      }
  }

  const bool ok = worst_unitarity <= 1e-10 && worst_trace <= 1e-10 &&
                  worst_recovery <= 1e-12 && worst_negativity <= 1e-10;
  report(8, ok, "hygiene over 1000 random circuits",
         "unitarity=" + num(worst_unitarity) + ", trace=" + num(worst_trace) +
             ", recovery=" + num(worst_recovery) +
             ", negativity=" + num(worst_negativity) +
             "; tol 1e-10 / 1e-10 / 1e-12 / 1e-10");
}

// ---- 9. CLI determinism ----------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<missing " + p.string() + ">";
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_9() {
#if !defined(QCORR_CLI_PATH) || !defined(QCORR_CONFIG_DIR)
  report(9, false, "CLI determinism", "harness built without CLI paths");
#else
  const std::string cli = QCORR_CLI_PATH;
  const fs::path configs = QCORR_CONFIG_DIR;
  const fs::path base =
      fs::temp_directory_path() / ("qcorr_accept_" + std::to_string(::getpid()));
  fs::remove_all(base);

  bool all_ok = true;
  std::string detail;
  for (const std::string name : {"hom", "mz", "gedanken", "thermal_g2"}) {
    const fs::path cfg = configs / (name + ".json");
    std::vector<std::pair<std::string, int>> variants{
        {"a", 1}, {"b", 1}, {"c", 4}};
    std::vector<fs::path> dirs;
    for (const auto& [tag, threads] : variants) {
      const fs::path out = base / (name + "_" + tag);
      const std::string cmd = "\"" + cli + "\" run \"" + cfg.string() +
                              "\" --out-dir \"" + out.string() +
                              "\" --threads " + std::to_string(threads) +
                              " >/dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        all_ok = false;
        detail += name + ": run failed; ";
        break;
      }
      dirs.push_back(out);
    }
    if (dirs.size() != variants.size()) continue;

    std::vector<std::string> csvs;
    for (const auto& entry : fs::directory_iterator(dirs[0]))
      if (entry.path().extension() == ".csv")
        csvs.push_back(entry.path().filename().string());
    if (csvs.empty()) {
      all_ok = false;
      detail += name + ": no csv; ";
      continue;
    }
    for (const std::string& csv : csvs) {
      const std::string first = slurp(dirs[0] / csv);
      for (std::size_t i = 1; i < dirs.size(); ++i) {
        if (slurp(dirs[i] / csv) != first) {
          all_ok = false;
          detail += name + "/" + csv + " differs; ";
        }
      }
    }
  }
  fs::remove_all(base);
  if (detail.empty()) detail = "4 configs x {repeat, --threads 4}: byte-identical";
  report(9, all_ok, "CLI determinism across runs and thread counts", detail);
#endif
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures == 0) {
    std::printf("all acceptance checks passed\n");
  } else {
    std::printf("%d acceptance check(s) failed\n", g_failures);
  }
  return g_failures;
}
