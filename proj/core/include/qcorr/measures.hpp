#pragma once

#include <variant>

#include "qcorr/density.hpp"

namespace qcorr {

// Two ways a logical qubit can sit inside the mode structure:
//  - OccupationQubit: a single mode holding 0 or 1 quanta.
//  - DualRailQubit: exactly one quantum shared between two modes
//    (|0L> = quantum in zero_mode, |1L> = quantum in one_mode).
struct OccupationQubit {
  std::size_t mode;
};
struct DualRailQubit {
  std::size_t zero_mode;
  std::size_t one_mode;
};
using QubitSpec = std::variant<OccupationQubit, DualRailQubit>;

// Reindexes rho as a 4x4 two-qubit matrix in the |q_a q_b> = |00>,|01>,
// |10>,|11> order. Every basis state of rho must resolve to a valid qubit
// pair and all remaining modes must look identical across the support;
// anything else throws UnsupportedDimension.
Eigen::Matrix4cd two_qubit_matrix(const DensityOperator& rho, const QubitSpec& a,
                                  const QubitSpec& b);

// Wootters concurrence C = max(0, l1-l2-l3-l4), with l_i the decreasing
// square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
double concurrence(const Eigen::Matrix4cd& rho);
double concurrence(const DensityOperator& rho, const QubitSpec& a, const QubitSpec& b);

struct ChshAngles {
  double a;
  double a_prime;
  double b;
  double b_prime;
};

// Settings that reach 2*sqrt(2) on the singlet (|01>-|10>)/sqrt(2) with the
// analyzer observable A(t) = cos(t) sz + sin(t) sx.
ChshAngles chsh_singlet_angles();

// S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')| with
// E(s,t) = Tr[rho A(s) x A(t)].
double chsh(const Eigen::Matrix4cd& rho, const ChshAngles& angles);
double chsh(const DensityOperator& rho, const QubitSpec& a, const QubitSpec& b,
            const ChshAngles& angles);

}  // namespace qcorr
