#include "qcorr/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qcorr {

namespace {
std::size_t index_in(const std::vector<FockBasisState>& basis, const FockBasisState& s) {
  auto it = std::lower_bound(basis.begin(), basis.end(), s);
  if (it == basis.end() || !(*it == s)) return basis.size();
  return static_cast<std::size_t>(it - basis.begin());
}
}  // namespace

DensityOperator DensityOperator::from_ket(const FockKet& ket) {
  DensityOperator rho;
  rho.reg_ = ket.registry();
  rho.basis_ = ket.support();
  if (rho.basis_.empty()) throw ZeroState("cannot form a density operator from an empty ket");
  const Eigen::Index d = static_cast<Eigen::Index>(rho.basis_.size());
  Eigen::VectorXcd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = ket.amplitude(rho.basis_[i]);
  rho.m_ = v * v.adjoint();
  return rho;
}

DensityOperator DensityOperator::diagonal_mixture(
    RegistryPtr reg, const std::vector<std::pair<FockBasisState, double>>& weights) {
  DensityOperator rho;
  rho.reg_ = std::move(reg);
  for (const auto& [s, w] : weights) {
    if (w < 0) throw InvariantViolation("negative mixture weight");
    rho.basis_.push_back(s);
  }
  std::sort(rho.basis_.begin(), rho.basis_.end());
  rho.basis_.erase(std::unique(rho.basis_.begin(), rho.basis_.end()), rho.basis_.end());
  const Eigen::Index d = static_cast<Eigen::Index>(rho.basis_.size());
  if (d == 0) throw ZeroState("empty mixture");
  rho.m_ = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [s, w] : weights) {
    const std::size_t i = index_in(rho.basis_, s);
    rho.m_(i, i) += w;
  }
  return rho;
}

DensityOperator DensityOperator::from_matrix(RegistryPtr reg,
                                             std::vector<FockBasisState> basis,
                                             Eigen::MatrixXcd m) {
  if (static_cast<Eigen::Index>(basis.size()) != m.rows() || m.rows() != m.cols())
    throw UnsupportedDimension("matrix does not match basis size");
  if (!std::is_sorted(basis.begin(), basis.end()))
    throw InvariantViolation("density basis must be sorted");
  DensityOperator rho;
  rho.reg_ = std::move(reg);
  rho.basis_ = std::move(basis);
  rho.m_ = std::move(m);
  return rho;
}

double DensityOperator::trace() const { return m_.trace().real(); }

double DensityOperator::purity() const { return (m_ * m_).trace().real(); }

double DensityOperator::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<double> DensityOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

void DensityOperator::validate(double norm_tol, double psd_tol) const {
  if (std::abs(trace() - 1.0) > norm_tol)
    throw InvariantViolation("density trace drifted to " + std::to_string(trace()));
  if (hermiticity_error() > norm_tol)
    throw InvariantViolation("density operator lost Hermiticity");
  if (min_eigenvalue() < -psd_tol)
    throw InvariantViolation("density operator lost positivity");
}

cplx DensityOperator::element(const FockBasisState& row, const FockBasisState& col) const {
  const std::size_t i = index_in(basis_, row);
  const std::size_t j = index_in(basis_, col);
  if (i == basis_.size() || j == basis_.size()) return {0.0, 0.0};
  return m_(i, j);
}

DensityOperator DensityOperator::partial_trace_keep(
    const std::vector<std::size_t>& keep) const {
  if (keep.empty()) throw EmptySubsystem("partial trace must keep at least one mode");
  std::vector<std::size_t> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  keep_sorted.erase(std::unique(keep_sorted.begin(), keep_sorted.end()), keep_sorted.end());
  std::vector<bool> kept(reg_->size(), false);
  for (std::size_t i : keep_sorted) {
    if (i >= reg_->size()) throw UnknownMode("partial trace index out of range");
    kept[i] = true;
  }

  auto split = [&](const FockBasisState& s) {
    FockBasisState k, t;
    k.occ.reserve(keep_sorted.size());
    t.occ.reserve(s.occ.size() - keep_sorted.size());
    for (std::size_t i = 0; i < s.occ.size(); ++i)
      (kept[i] ? k.occ : t.occ).push_back(s.occ[i]);
    return std::make_pair(std::move(k), std::move(t));
  };

  std::vector<FockBasisState> red_basis;
  red_basis.reserve(basis_.size());
  for (const auto& s : basis_) red_basis.push_back(split(s).first);
  std::sort(red_basis.begin(), red_basis.end());
  red_basis.erase(std::unique(red_basis.begin(), red_basis.end()), red_basis.end());

  const Eigen::Index d = static_cast<Eigen::Index>(red_basis.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  // Group rows/cols by traced part; only matching traced parts survive.
  std::map<FockBasisState, std::vector<std::pair<std::size_t, std::size_t>>> groups;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    auto [k, t] = split(basis_[i]);
    groups[std::move(t)].emplace_back(i, index_in(red_basis, k));
  }
  for (const auto& [t, members] : groups)
    for (const auto& [i, ri] : members)
      for (const auto& [j, rj] : members)
        out(ri, rj) += m_(i, j);

  DensityOperator rho;
  rho.reg_ = reg_->subset(keep_sorted);
  rho.basis_ = std::move(red_basis);
  rho.m_ = std::move(out);
  return rho;
}

DensityOperator DensityOperator::partial_trace_keep(
    const std::vector<ModeLabel>& keep) const {
  std::vector<std::size_t> idx;
  idx.reserve(keep.size());
  for (const auto& label : keep) idx.push_back(reg_->index_of(label));
  return partial_trace_keep(idx);
}

DensityOperator DensityOperator::transform(
    const std::function<FockKet(const FockBasisState&)>& f) const {
  std::vector<FockKet> images;
  images.reserve(basis_.size());
  for (const auto& s : basis_) images.push_back(f(s));
  RegistryPtr out_reg = images.empty() ? reg_ : images.front().registry();

  std::vector<FockBasisState> out_basis;
  for (const auto& img : images)
    for (const auto& [s, a] : img.amplitudes()) out_basis.push_back(s);
  std::sort(out_basis.begin(), out_basis.end());
  out_basis.erase(std::unique(out_basis.begin(), out_basis.end()), out_basis.end());

  const Eigen::Index d = static_cast<Eigen::Index>(out_basis.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  std::vector<Eigen::VectorXcd> cols;
  cols.reserve(images.size());
  for (const auto& img : images) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    for (const auto& [s, a] : img.amplitudes())
      v(static_cast<Eigen::Index>(index_in(out_basis, s))) = a;
    cols.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = 0; j < images.size(); ++j)
      if (m_(i, j) != cplx(0.0, 0.0)) m += m_(i, j) * (cols[i] * cols[j].adjoint());

  DensityOperator rho;
  rho.reg_ = out_reg;
  rho.basis_ = std::move(out_basis);
  rho.m_ = std::move(m);
  return rho;
}

DensityOperator DensityOperator::scaled(double w) const {
  DensityOperator rho = *this;
  rho.m_ *= w;
  return rho;
}

DensityOperator DensityOperator::renormalized() const {
  const double t = trace();
  if (t < 1e-300) throw ZeroState("cannot renormalize a zero-trace operator");
  return scaled(1.0 / t);
}

double DensityOperator::number_expectation(std::size_t mode) const {
  if (mode >= reg_->size()) throw UnknownMode("mode index out of range");
  double acc = 0.0;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    acc += basis_[i].occ[mode] * m_(i, i).real();
  return acc;
}

DensityOperator DensityOperator::tensor(const DensityOperator& a, const DensityOperator& b) {
  auto super = ModeRegistry::merged(*a.reg_, *b.reg_);
  std::vector<std::size_t> map_a(a.reg_->size()), map_b(b.reg_->size());
  for (std::size_t i = 0; i < a.reg_->size(); ++i)
    map_a[i] = super->index_of(a.reg_->mode(i).label);
  for (std::size_t i = 0; i < b.reg_->size(); ++i)
    map_b[i] = super->index_of(b.reg_->mode(i).label);

  auto combine = [&](const FockBasisState& sa, const FockBasisState& sb) {
    FockBasisState s;
    s.occ.assign(super->size(), 0);
    for (std::size_t i = 0; i < map_a.size(); ++i) s.occ[map_a[i]] = sa.occ[i];
    for (std::size_t i = 0; i < map_b.size(); ++i)
      s.occ[map_b[i]] = static_cast<std::uint16_t>(s.occ[map_b[i]] + sb.occ[i]);
    return s;
  };

  std::vector<FockBasisState> basis;
  basis.reserve(a.basis_.size() * b.basis_.size());
  for (const auto& sa : a.basis_)
    for (const auto& sb : b.basis_) basis.push_back(combine(sa, sb));
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());

  const Eigen::Index d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t i = 0; i < a.basis_.size(); ++i)
    for (std::size_t j = 0; j < a.basis_.size(); ++j)
      for (std::size_t k = 0; k < b.basis_.size(); ++k)
        for (std::size_t l = 0; l < b.basis_.size(); ++l) {
          const cplx v = a.m_(i, j) * b.m_(k, l);
          if (v == cplx(0.0, 0.0)) continue;
          const std::size_t r = index_in(basis, combine(a.basis_[i], b.basis_[k]));
          const std::size_t c = index_in(basis, combine(a.basis_[j], b.basis_[l]));
          m(r, c) += v;
        }

  DensityOperator rho;
  rho.reg_ = super;
  rho.basis_ = std::move(basis);
  rho.m_ = std::move(m);
  return rho;
}

double fidelity(const DensityOperator& rho, const FockKet& psi) {
  const FockKet embedded =
      rho.registry()->same_modes(*psi.registry()) ? psi : psi.extended(rho.registry());
  cplx acc(0.0, 0.0);
  const auto& basis = rho.basis();
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const cplx v = rho.matrix()(i, j);
      if (v == cplx(0.0, 0.0)) continue;
      acc += std::conj(embedded.amplitude(basis[i])) * v * embedded.amplitude(basis[j]);
    }
  return acc.real();
}

}  // namespace qcorr
