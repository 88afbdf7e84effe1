#include "optomech/dynamics/cavity_blocks.hpp"

#include <algorithm>
#include <cmath>

#include "optomech/error.hpp"
#include "optomech/model/operators.hpp"
#include "optomech/numerics/linalg.hpp"

namespace optomech::dynamics {

CavityBlocks::CavityBlocks(const model::SystemParams& params, double delta0,
                           const model::Truncation& trunc)
    : params_(params), delta0_(delta0), dim_(trunc.phonon_dim) {
  params.validate();
  trunc.validate();
  if (!std::isfinite(delta0)) throw DomainError("cavity: non-finite detuning");
  const auto ops = model::build_operators(trunc);
  const ComplexMatrix id = ComplexMatrix::identity(dim_);

  h_vac_ = Complex(params.omega_M) * ops.number;
  h_photon_ = h_vac_;
  h_photon_.axpy(-delta0, id);
  h_photon_.axpy(params.g, ops.b + ops.b_dag);

  const double down = params.gamma_M * (params.n_th + 1.0);
  const double up = params.gamma_M * params.n_th;
  ComplexMatrix decay(dim_, dim_);
  if (down > 0.0) {
    const ComplexMatrix j = Complex(std::sqrt(down)) * ops.b;
    jumps_.push_back(SparseMatrix::from_dense(j));
    decay += numerics::adjoint(j) * j;
  }
  if (up > 0.0) {
    const ComplexMatrix j = Complex(std::sqrt(up)) * ops.b_dag;
    jumps_.push_back(SparseMatrix::from_dense(j));
    decay += numerics::adjoint(j) * j;
  }
  for (const auto& j : jumps_) jumps_adj_.push_back(j.adjoint());

  const Complex half_i(0.0, 0.5);
  heff_vac_ = h_vac_;
  heff_vac_.axpy(-half_i, decay);
  heff_photon_ = h_photon_;
  heff_photon_.axpy(-half_i, decay);
  heff_photon_.axpy(-half_i * kappa_total(), id);
}

CavityBlocks::Propagators CavityBlocks::propagators(double tau) const {
  const Complex minus_i_tau(0.0, -tau);
  Propagators p;
  p.vacuum.resize(dim_);
  for (std::size_t k = 0; k < dim_; ++k) p.vacuum[k] = std::exp(minus_i_tau * heff_vac_(k, k));
  p.photon = numerics::matrix_exp(minus_i_tau * heff_photon_);
  p.photon_adjoint = numerics::adjoint(p.photon);
  return p;
}

void CavityBlocks::Propagators::vac_vac(ComplexMatrix& x) const {
  const std::size_t n = vacuum.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) *= vacuum[i] * std::conj(vacuum[j]);
}

void CavityBlocks::Propagators::photon_vac(ComplexMatrix& x, ComplexMatrix& work) const {
  const std::size_t n = vacuum.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) *= std::conj(vacuum[j]);
  multiply_into(photon, x, work);
  std::swap(x, work);
}

void CavityBlocks::Propagators::vac_photon(ComplexMatrix& x, ComplexMatrix& work) const {
  const std::size_t n = vacuum.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) *= vacuum[i];
  multiply_into(x, photon_adjoint, work);
  std::swap(x, work);
}

void CavityBlocks::Propagators::photon_photon(ComplexMatrix& x, ComplexMatrix& work) const {
  multiply_into(photon, x, work);
  multiply_into(work, photon_adjoint, x);
}

void CavityBlocks::Propagators::heisenberg_vac_photon(ComplexMatrix& x, ComplexMatrix& work) const {
  const std::size_t n = vacuum.size();
  multiply_into(photon_adjoint, x, work);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) work(i, j) *= vacuum[j];
  std::swap(x, work);
}

void CavityBlocks::phonon_refill(const ComplexMatrix& x, ComplexMatrix& out) const {
  for (const auto& j : jumps_) out += numerics::sandwich(j, x, j);
}

void CavityBlocks::phonon_refill_adjoint(const ComplexMatrix& x, ComplexMatrix& out) const {
  for (const auto& j : jumps_adj_) out += numerics::sandwich(j, x, j);
}

void multiply_into(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out) {
  const std::size_t n = a.rows();
  const Complex* pa = a.data().data();
  const Complex* pb = b.data().data();
  Complex* pc = out.data().data();
  std::fill(pc, pc + n * n, Complex{});
  for (std::size_t i = 0; i < n; ++i) {
    Complex* crow = pc + i * n;
    for (std::size_t k = 0; k < n; ++k) {
      const Complex aik = pa[i * n + k];
      const Complex* brow = pb + k * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

void CavityBlocks::hierarchy_propagate(const Propagators& u, BlockState& y, ComplexMatrix& work) const {
  u.vac_vac(y[r00]);
  u.photon_vac(y[r10], work);
  u.vac_vac(y[r11_vacuum]);
  u.photon_photon(y[r11_photon], work);
}

void CavityBlocks::hierarchy_rhs(double xi, const BlockState& y, BlockState& out) const {
  for (std::size_t k = r00; k <= r11_photon; ++k) {
    out[k].set_zero();
    phonon_refill(y[k], out[k]);
  }
  out[r11_vacuum].axpy(kappa_total(), y[r11_photon]);
  if (xi == 0.0) return;
  const double sk = std::sqrt(params_.kappa1);
  out[r10].axpy(-xi * sk, y[r00]);
  const ComplexMatrix& x = y[r10];
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) {
      const Complex herm = xi * sk * (x(i, j) + std::conj(x(j, i)));
      out[r11_vacuum](i, j) += herm;
      out[r11_photon](i, j) -= herm;
    }
}

}  // namespace optomech::dynamics
