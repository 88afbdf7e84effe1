#include "optomech/numerics/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "optomech/error.hpp"

namespace optomech::numerics {

namespace {

using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Pade coefficients b_0..b_m for the degrees used by scaling and squaring
// (Higham 2005), and the 1-norm bound theta_m below which degree m suffices.
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
ComplexMatrix pade_low(const ComplexMatrix& a, const std::array<double, N>& b) {
  // r_m(A) = (V - U)^{-1} (V + U), U odd part, V even part.
  const std::size_t n = a.rows();
  const ComplexMatrix a2 = a * a;
  ComplexMatrix power = ComplexMatrix::identity(n);
  ComplexMatrix u_even(n, n);
  ComplexMatrix v(n, n);
  for (std::size_t k = 0; 2 * k < N; ++k) {
    v.axpy(b[2 * k], power);
    if (2 * k + 1 < N) u_even.axpy(b[2 * k + 1], power);
    if (2 * (k + 1) < N) power = power * a2;
  }
  const ComplexMatrix u = a * u_even;
  return solve(v - u, v + u);
}

ComplexMatrix pade13(const ComplexMatrix& a) {
  const std::size_t n = a.rows();
  const auto& b = kPade13;
  const ComplexMatrix id = ComplexMatrix::identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;

  ComplexMatrix inner_u = b[13] * a6;
  inner_u.axpy(b[11], a4);
  inner_u.axpy(b[9], a2);
  ComplexMatrix u_arg = a6 * inner_u;
  u_arg.axpy(b[7], a6);
  u_arg.axpy(b[5], a4);
  u_arg.axpy(b[3], a2);
  u_arg.axpy(b[1], id);
  const ComplexMatrix u = a * u_arg;

  ComplexMatrix inner_v = b[12] * a6;
  inner_v.axpy(b[10], a4);
  inner_v.axpy(b[8], a2);
  ComplexMatrix v = a6 * inner_v;
  v.axpy(b[6], a6);
  v.axpy(b[4], a4);
  v.axpy(b[2], a2);
  v.axpy(b[0], id);
  return solve(v - u, v + u);
}

}  // namespace

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || a.rows() != b.rows()) throw DomainError("solve: dimension mismatch");
  const std::size_t n = a.rows();
  ComplexMatrix lu = a;
  ComplexMatrix x = b;
  const std::size_t m = b.cols();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = std::abs(lu(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(lu(r, col)) > best) {
        best = std::abs(lu(r, col));
        pivot = r;
      }
    }
    if (best == 0.0) throw DomainError("solve: singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(pivot, j));
      for (std::size_t j = 0; j < m; ++j) std::swap(x(col, j), x(pivot, j));
    }
    const Complex inv = 1.0 / lu(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = lu(r, col) * inv;
      if (f == Complex{}) continue;
      lu(r, col) = f;
      for (std::size_t j = col + 1; j < n; ++j) lu(r, j) -= f * lu(col, j);
      for (std::size_t j = 0; j < m; ++j) x(r, j) -= f * x(col, j);
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    const Complex inv = 1.0 / lu(col, col);
    for (std::size_t j = 0; j < m; ++j) {
      Complex acc = x(col, j);
      for (std::size_t k = col + 1; k < n; ++k) acc -= lu(col, k) * x(k, j);
      x(col, j) = acc * inv;
    }
  }
  return x;
}

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
  if (!a.is_square()) throw DomainError("matrix_exp: matrix is not square");
  if (a.rows() > 512) throw DomainError("matrix_exp: dimension exceeds 512");
  const double norm = one_norm(a);
  if (!std::isfinite(norm)) throw DomainError("matrix_exp: non-finite entries");
  if (norm <= kTheta3) return pade_low(a, kPade3);
  if (norm <= kTheta5) return pade_low(a, kPade5);
  if (norm <= kTheta7) return pade_low(a, kPade7);
  if (norm <= kTheta9) return pade_low(a, kPade9);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  ComplexMatrix scaled = a;
  scaled *= std::ldexp(1.0, -squarings);
  ComplexMatrix r = pade13(scaled);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& a) {
  if (!a.is_square()) throw DomainError("hermitian_eig: matrix is not square");
  if (a.rows() > 1024) throw DomainError("hermitian_eig: dimension exceeds 1024");
  if (!is_hermitian(a, 1e-10)) throw DomainError("hermitian_eig: matrix is not Hermitian");
  const std::size_t n = a.rows();
  Eigen::Map<const EigenMatrix> view(a.data().data(), static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(n));
  // Symmetrize so rounding asymmetry does not leak into the solver.
  const EigenMatrix herm = 0.5 * (view + view.adjoint());
  Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(herm);
  if (solver.info() != Eigen::Success) throw ConvergenceError("hermitian_eig: solver failed");
  EigenDecomposition out;
  out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.eigenvectors(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(j));
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  const EigenDecomposition eig = hermitian_eig(a);
  const std::size_t n = a.rows();
  ComplexMatrix scaled = eig.eigenvectors;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = std::sqrt(std::max(eig.eigenvalues[j], 0.0));
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= s;
  }
  return scaled * adjoint(eig.eigenvectors);
}

void validate_density_matrix(const ComplexMatrix& rho, double tol) {
  if (!rho.is_square()) throw DomainError("density matrix is not square");
  if (!is_hermitian(rho, tol)) throw DomainError("density matrix is not Hermitian");
  const Complex tr = trace(rho);
  if (std::abs(tr - 1.0) > tol)
    throw DomainError("density matrix trace " + std::to_string(tr.real()) + " differs from 1");
  ComplexMatrix sym = rho + adjoint(rho);
  sym *= 0.5;
  const EigenDecomposition eig = hermitian_eig(sym);
  if (eig.eigenvalues.front() < -tol)
    throw DomainError("density matrix has negative eigenvalue " +
                      std::to_string(eig.eigenvalues.front()));
}

double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DomainError("uhlmann_fidelity: dimension mismatch");
  validate_density_matrix(rho);
  validate_density_matrix(sigma);
  ComplexMatrix rho_sym = rho + adjoint(rho);
  rho_sym *= 0.5;
  const ComplexMatrix root = psd_sqrt(rho_sym);
  ComplexMatrix inner_prod = root * sigma * root;
  // Symmetrize to absorb rounding before the second eigendecomposition.
  inner_prod = 0.5 * (inner_prod + adjoint(inner_prod));
  const EigenDecomposition eig = hermitian_eig(inner_prod);
  // Eigenvalues at rounding level would contribute sqrt(eps) each; drop them.
  const double floor = 1e-14 * std::max(eig.eigenvalues.back(), 0.0);
  double tr = 0.0;
  for (double lambda : eig.eigenvalues)
    if (lambda > floor) tr += std::sqrt(lambda);
  return std::clamp(tr * tr, 0.0, 1.0);
}

double uhlmann_fidelity(const ComplexMatrix& rho, std::span<const Complex> psi) {
  if (psi.size() != rho.rows()) throw DomainError("uhlmann_fidelity: dimension mismatch");
  double norm = 0.0;
  for (const auto& v : psi) norm += std::norm(v);
  if (std::abs(norm - 1.0) > 1e-8) throw DomainError("uhlmann_fidelity: state not normalized");
  validate_density_matrix(rho);
  const auto rpsi = apply(rho, psi);
  return std::clamp(inner(psi, rpsi).real(), 0.0, 1.0);
}

}  // namespace optomech::numerics
