#pragma once

#include <cstddef>
#include <vector>

#include "optomech/model/params.hpp"
#include "optomech/numerics/complex_matrix.hpp"

namespace optomech::model {

using numerics::ComplexMatrix;

/// <m| D(beta) |n> with D(beta) = exp[beta (b^dagger - b)], closed form through
/// associated Laguerre polynomials with factorial ratios in log space.
/// Requires m, n < 200 and |beta| <= 10.
double franck_condon(int m, int n, double beta);

/// Franck-Condon table F(x, k) = <x|D(beta)|k> for x < rows, k < cols.
std::vector<std::vector<double>> franck_condon_table(std::size_t rows, std::size_t cols,
                                                     double beta);

/// Displacement operator on the truncated phonon space, computed as
/// matrix_exp of beta (b^dagger - b). Test oracle for franck_condon.
struct Displacement {
  ComplexMatrix matrix;
  /// Probability mass in the last row for the columns n < M/2; large values
  /// mean the truncation is too small for this beta.
  double edge_mass = 0.0;
  bool truncation_too_small() const noexcept { return edge_mass > 1e-8; }
};
Displacement displacement_matrix(double beta, const Truncation& trunc);

/// Amplitudes of the one-photon displaced number state |m~(1)> = D(beta)|m>
/// on the truncated phonon basis (closed form).
std::vector<double> displaced_state(int m, double beta, const Truncation& trunc);

/// Operators on the truncated phonon space plus the index map of the
/// single-arm system space (optical occupation {0,1}) x (phonon space).
struct OperatorSet {
  std::size_t phonon_dim = 0;
  ComplexMatrix b;       ///< annihilation, b(m-1, m) = sqrt(m)
  ComplexMatrix b_dag;
  ComplexMatrix number;  ///< b^dagger b

  std::size_t system_dim() const noexcept { return 2 * phonon_dim; }
  /// Composite index of |photons>_c |phonons>_b.
  std::size_t index(int photons, std::size_t phonons) const noexcept {
    return static_cast<std::size_t>(photons) * phonon_dim + phonons;
  }
  int photon_number(std::size_t composite) const noexcept {
    return static_cast<int>(composite / phonon_dim);
  }
  std::size_t phonon_number(std::size_t composite) const noexcept {
    return composite % phonon_dim;
  }
};
OperatorSet build_operators(const Truncation& trunc);

/// Bose-Einstein state with mean occupation n_th, cut at dim levels and
/// renormalized. |0><0| for n_th = 0.
ComplexMatrix thermal_state(std::size_t dim, double n_th);

}  // namespace optomech::model
