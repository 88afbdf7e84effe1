#pragma once

#include <span>
#include <vector>

#include "optomech/numerics/complex_matrix.hpp"

namespace optomech::numerics {

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // unitary, eigenvectors in columns
};

/// e^A by scaling and squaring with diagonal Pade approximants (degree chosen
/// from the 1-norm, backward error below unit roundoff).
ComplexMatrix matrix_exp(const ComplexMatrix& a);

/// Solves A X = B with partial-pivoting LU. Throws DomainError on a singular A.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigendecomposition of a Hermitian matrix. Rejects inputs that are not
/// Hermitian to within 1e-10.
EigenDecomposition hermitian_eig(const ComplexMatrix& a);

/// V f(Lambda) V^dagger for a Hermitian input.
ComplexMatrix psd_sqrt(const ComplexMatrix& a);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 between two density
/// matrices. Both must be Hermitian, unit trace and PSD to within 1e-8.
double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Fidelity against the pure state |psi><psi|: <psi|rho|psi>. psi must be
/// normalized.
double uhlmann_fidelity(const ComplexMatrix& rho, std::span<const Complex> psi);

/// Throws DomainError unless rho is a density matrix to within tol.
void validate_density_matrix(const ComplexMatrix& rho, double tol = 1e-8);

}  // namespace optomech::numerics
