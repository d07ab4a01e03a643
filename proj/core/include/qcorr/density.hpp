#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "qcorr/fock.hpp"

namespace qcorr {

// Density operator stored as a dense Hermitian matrix over an explicit,
// sorted basis of Fock states (its support basis, not the full truncated
// space). All transformations rebuild basis and matrix from scratch, so
// operators stay as small as the states they describe.
class DensityOperator {
 public:
  static DensityOperator from_ket(const FockKet& ket);
  static DensityOperator diagonal_mixture(
      RegistryPtr reg, const std::vector<std::pair<FockBasisState, double>>& weights);
  static DensityOperator from_matrix(RegistryPtr reg,
                                     std::vector<FockBasisState> basis,
                                     Eigen::MatrixXcd m);

  const RegistryPtr& registry() const { return reg_; }
  const std::vector<FockBasisState>& basis() const { return basis_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

  double trace() const;
  double purity() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  std::vector<double> eigenvalues() const;  // ascending

  // Throws InvariantViolation when trace, Hermiticity or positivity drift
  // past the stated tolerances.
  void validate(double norm_tol = kNormTol, double psd_tol = kNormTol) const;

  cplx element(const FockBasisState& row, const FockBasisState& col) const;

  // rho' = Tr_traced rho, keeping exactly the given mode indices.
  DensityOperator partial_trace_keep(const std::vector<std::size_t>& keep) const;
  DensityOperator partial_trace_keep(const std::vector<ModeLabel>& keep) const;

  // rho' = sum_ij rho_ij |f(b_i)><f(b_j)|. With an isometric f this is
  // unitary conjugation; with a projective f the trace drops to the
  // branch weight and the caller decides whether to renormalize.
  DensityOperator transform(const std::function<FockKet(const FockBasisState&)>& f) const;

  DensityOperator scaled(double w) const;
  DensityOperator renormalized() const;  // throws ZeroState on zero trace

  double number_expectation(std::size_t mode) const;

  static DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

 private:
  DensityOperator() = default;
  RegistryPtr reg_;
  std::vector<FockBasisState> basis_;
  Eigen::MatrixXcd m_;
};

// <psi| rho |psi> for a normalized ket.
double fidelity(const DensityOperator& rho, const FockKet& psi);

}  // namespace qcorr
