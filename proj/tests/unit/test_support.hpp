#pragma once

#include <complex>
#include <random>

#include "optomech/numerics/complex_matrix.hpp"

namespace optomech::testing {

using numerics::Complex;
using numerics::ComplexMatrix;

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                   double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  ComplexMatrix m(rows, cols);
  for (auto& v : m.data()) v = Complex(dist(rng), dist(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  ComplexMatrix a = random_matrix(n, n, rng, scale);
  ComplexMatrix h = a + numerics::adjoint(a);
  h *= 0.5;
  return h;
}

/// Random full-rank density matrix G G^dagger / Tr.
inline ComplexMatrix random_density(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_matrix(n, n, rng);
  ComplexMatrix rho = g * numerics::adjoint(g);
  rho *= 1.0 / numerics::trace(rho).real();
  // exact Hermiticity
  ComplexMatrix sym = rho + numerics::adjoint(rho);
  sym *= 0.5;
  return sym;
}

}  // namespace optomech::testing
