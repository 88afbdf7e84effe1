#include "optomech/model/operators.hpp"

#include <cmath>
#include <string>

#include "optomech/error.hpp"
#include "optomech/numerics/linalg.hpp"
#include "optomech/numerics/special.hpp"

namespace optomech::model {

namespace {

// sqrt(lo!/hi!) x^(hi-lo) e^{-x^2/2} L_lo^(hi-lo)(x^2), the m >= n branch with
// x = beta (or the mirrored branch with x = -beta).
double overlap_branch(int hi, int lo, double x) {
  const int diff = hi - lo;
  const double x2 = x * x;
  const double laguerre = numerics::assoc_laguerre(lo, diff, x2);
  if (!std::isfinite(laguerre))
    throw DomainError("franck_condon: Laguerre polynomial overflow");
  const double log_mag = 0.5 * (numerics::log_factorial(lo) - numerics::log_factorial(hi)) +
                         diff * std::log(std::abs(x)) - 0.5 * x2;
  if (log_mag > 700.0) throw DomainError("franck_condon: prefactor exceeds double range");
  const double sign = (x < 0.0 && diff % 2 != 0) ? -1.0 : 1.0;
  return sign * std::exp(log_mag) * laguerre;
}

}  // namespace

double franck_condon(int m, int n, double beta) {
  if (m < 0 || n < 0) throw DomainError("franck_condon: negative phonon index");
  if (m >= 200 || n >= 200) throw DomainError("franck_condon: phonon index must be < 200");
  if (!(std::abs(beta) <= 10.0)) throw DomainError("franck_condon: |beta| must be <= 10");
  if (beta == 0.0) return m == n ? 1.0 : 0.0;
  return m >= n ? overlap_branch(m, n, beta) : overlap_branch(n, m, -beta);
}

std::vector<std::vector<double>> franck_condon_table(std::size_t rows, std::size_t cols,
                                                     double beta) {
  std::vector<std::vector<double>> table(rows, std::vector<double>(cols));
  for (std::size_t x = 0; x < rows; ++x)
    for (std::size_t k = 0; k < cols; ++k)
      table[x][k] = franck_condon(static_cast<int>(x), static_cast<int>(k), beta);
  return table;
}

OperatorSet build_operators(const Truncation& trunc) {
  trunc.validate();
  const std::size_t dim = trunc.phonon_dim;
  OperatorSet ops;
  ops.phonon_dim = dim;
  ops.b = ComplexMatrix(dim, dim);
  for (std::size_t m = 1; m < dim; ++m) ops.b(m - 1, m) = std::sqrt(static_cast<double>(m));
  ops.b_dag = numerics::adjoint(ops.b);
  ops.number = ComplexMatrix(dim, dim);
  for (std::size_t m = 0; m < dim; ++m) ops.number(m, m) = static_cast<double>(m);
  return ops;
}

Displacement displacement_matrix(double beta, const Truncation& trunc) {
  const OperatorSet ops = build_operators(trunc);
  ComplexMatrix generator = ops.b_dag - ops.b;
  generator *= beta;
  Displacement d;
  d.matrix = numerics::matrix_exp(generator);
  const std::size_t last = trunc.phonon_dim - 1;
  for (std::size_t n = 0; n < trunc.phonon_dim / 2; ++n) d.edge_mass += std::norm(d.matrix(last, n));
  return d;
}

std::vector<double> displaced_state(int m, double beta, const Truncation& trunc) {
  trunc.validate();
  std::vector<double> amplitudes(trunc.phonon_dim);
  for (std::size_t k = 0; k < trunc.phonon_dim; ++k)
    amplitudes[k] = franck_condon(static_cast<int>(k), m, beta);
  return amplitudes;
}

ComplexMatrix thermal_state(std::size_t dim, double n_th) {
  if (dim < 1) throw DomainError("thermal_state: dimension must be >= 1");
  if (!(n_th >= 0.0)) throw DomainError("thermal_state: n_th must be >= 0");
  ComplexMatrix rho(dim, dim);
  if (n_th == 0.0) {
    rho(0, 0) = 1.0;
    return rho;
  }
  const double q = n_th / (1.0 + n_th);
  double z = 0.0;
  for (std::size_t k = 0; k < dim; ++k) z += std::pow(q, static_cast<double>(k));
  for (std::size_t k = 0; k < dim; ++k) rho(k, k) = std::pow(q, static_cast<double>(k)) / z;
  return rho;
}

}  // namespace optomech::model
