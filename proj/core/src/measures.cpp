#include "qcorr/measures.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

namespace qcorr {

namespace {

// Resolves the qubit value of `state` under the spec, or nullopt when the
// occupations don't encode a qubit.
std::optional<int> qubit_value(const FockBasisState& state, const QubitSpec& spec) {
  if (std::holds_alternative<OccupationQubit>(spec)) {
    const auto q = std::get<OccupationQubit>(spec);
    const int n = state.occ[q.mode];
    if (n > 1) return std::nullopt;
    return n;
  }
  const auto q = std::get<DualRailQubit>(spec);
  const int n0 = state.occ[q.zero_mode];
  const int n1 = state.occ[q.one_mode];
  if (n0 == 1 && n1 == 0) return 0;
  if (n0 == 0 && n1 == 1) return 1;
  return std::nullopt;
}

void mark_used(std::vector<bool>& used, const QubitSpec& spec) {
  if (std::holds_alternative<OccupationQubit>(spec)) {
    used[std::get<OccupationQubit>(spec).mode] = true;
  } else {
    const auto q = std::get<DualRailQubit>(spec);
    used[q.zero_mode] = true;
    used[q.one_mode] = true;
  }
}

}  // namespace

Eigen::Matrix4cd two_qubit_matrix(const DensityOperator& rho, const QubitSpec& a,
                                  const QubitSpec& b) {
  const auto& basis = rho.basis();
  std::vector<bool> used(rho.registry()->size(), false);
  mark_used(used, a);
  mark_used(used, b);

  std::vector<int> slot(basis.size());
  std::optional<std::vector<std::uint16_t>> rest_signature;
  std::vector<bool> seen(4, false);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto qa = qubit_value(basis[i], a);
    const auto qb = qubit_value(basis[i], b);
    if (!qa || !qb)
      throw UnsupportedDimension("support state does not encode a qubit pair");
    std::vector<std::uint16_t> rest;
    for (std::size_t m = 0; m < used.size(); ++m)
      if (!used[m]) rest.push_back(basis[i].occ[m]);
    if (!rest_signature)
      rest_signature = rest;
    else if (!(*rest_signature == rest))
      throw UnsupportedDimension("spectator modes vary across the support");
    const int idx = 2 * *qa + *qb;
    if (seen[idx])
      throw UnsupportedDimension("two support states map to the same qubit pair");
    seen[idx] = true;
    slot[i] = idx;
  }

  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      out(slot[i], slot[j]) = rho.matrix()(i, j);
  return out;
}

double concurrence(const Eigen::Matrix4cd& rho_in) {
  Eigen::Matrix4cd rho = rho_in;
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-300) throw ZeroState("concurrence of a zero matrix");
  rho /= tr;

  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;

  // The eigenvalues of rho * (yy rho^* yy) are the squared singular values
  // of sqrt(rho) * yy * conj(sqrt(rho)). Going through the square root keeps
  // a numerically pure state exactly rank one, so the three spurious
  // singular values stay at O(eps) instead of the O(sqrt(eps)) an
  // eigensolver on the product would give.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  if (es.info() != Eigen::Success)
    throw InvariantViolation("concurrence eigensolver failed");
  const Eigen::Vector4d w = es.eigenvalues();
  const double clamp = 1e-14 * std::max(1.0, w.cwiseAbs().maxCoeff());
  Eigen::Matrix4cd root = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    if (w(i) <= clamp) continue;
    root += std::sqrt(w(i)) * es.eigenvectors().col(i) *
            es.eigenvectors().col(i).adjoint();
  }
  const Eigen::Matrix4cd m = root * yy * root.conjugate();
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(m);
  const Eigen::Vector4d s = svd.singularValues();
  return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

double concurrence(const DensityOperator& rho, const QubitSpec& a, const QubitSpec& b) {
  return concurrence(two_qubit_matrix(rho, a, b));
}

ChshAngles chsh_singlet_angles() {
  using std::numbers::pi;
  return {0.0, pi / 2.0, pi / 4.0, 3.0 * pi / 4.0};
}

namespace {
Eigen::Matrix2cd analyzer(double theta) {
  Eigen::Matrix2cd sz, sx;
  sz << 1, 0, 0, -1;
  sx << 0, 1, 1, 0;
  return std::cos(theta) * sz + std::sin(theta) * sx;
}

double correlator(const Eigen::Matrix4cd& rho, double ta, double tb) {
  const Eigen::Matrix2cd A = analyzer(ta);
  const Eigen::Matrix2cd B = analyzer(tb);
  Eigen::Matrix4cd AB = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      AB.block<2, 2>(2 * i, 2 * j) = A(i, j) * B;
  return (rho * AB).trace().real();
}
}  // namespace

double chsh(const Eigen::Matrix4cd& rho_in, const ChshAngles& angles) {
  Eigen::Matrix4cd rho = rho_in;
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-300) throw ZeroState("CHSH of a zero matrix");
  rho /= tr;
  const double s = correlator(rho, angles.a, angles.b) -
                   correlator(rho, angles.a, angles.b_prime) +
                   correlator(rho, angles.a_prime, angles.b) +
                   correlator(rho, angles.a_prime, angles.b_prime);
  return std::abs(s);
}

double chsh(const DensityOperator& rho, const QubitSpec& a, const QubitSpec& b,
            const ChshAngles& angles) {
  return chsh(two_qubit_matrix(rho, a, b), angles);
}

}  // namespace qcorr
