#pragma once

#include <vector>

#include "optomech/dynamics/lawson.hpp"
#include "optomech/model/params.hpp"
#include "optomech/numerics/complex_matrix.hpp"
#include "optomech/numerics/sparse_matrix.hpp"

namespace optomech::dynamics {

using numerics::Complex;
using numerics::ComplexMatrix;
using numerics::SparseMatrix;

/// One cavity split by optical occupation: vacuum (v) and one photon (p).
/// Every operator in the model is either sector-diagonal (H, phonon jumps)
/// or maps p -> v with the phonon identity (cavity decay), so density
/// operators are handled as M x M phonon blocks.
///
/// The coherent part uses H_eff = H - i/2 sum J^dag J per sector, which is
/// block-diagonal; only the phonon jumps J X J^dag and the photon-decay
/// refill remain outside the exact propagator.
class CavityBlocks {
 public:
  CavityBlocks(const model::SystemParams& params, double delta0, const model::Truncation& trunc);

  std::size_t phonon_dim() const noexcept { return dim_; }
  const model::SystemParams& params() const noexcept { return params_; }
  double delta0() const noexcept { return delta0_; }
  double kappa_total() const noexcept { return params_.kappa1 + params_.kappa0; }

  const ComplexMatrix& hamiltonian_vacuum() const noexcept { return h_vac_; }
  const ComplexMatrix& hamiltonian_photon() const noexcept { return h_photon_; }
  const std::vector<SparseMatrix>& phonon_jumps() const noexcept { return jumps_; }

  /// exp(-i H_eff tau) for both sectors. The vacuum sector is diagonal in
  /// the phonon number basis, so it is kept as a vector.
  struct Propagators {
    std::vector<Complex> vacuum;
    ComplexMatrix photon;
    ComplexMatrix photon_adjoint;

    // In-place X <- U_row X U_col^dagger for the four sector pairs.
    void vac_vac(ComplexMatrix& x) const;
    void photon_vac(ComplexMatrix& x, ComplexMatrix& work) const;
    void vac_photon(ComplexMatrix& x, ComplexMatrix& work) const;
    void photon_photon(ComplexMatrix& x, ComplexMatrix& work) const;
    /// Heisenberg picture of vac_photon: X <- U_photon^dagger X U_vac.
    void heisenberg_vac_photon(ComplexMatrix& x, ComplexMatrix& work) const;
  };
  Propagators propagators(double tau) const;

  /// Photon-number hierarchy stored in the first four blocks of a state:
  /// rho00 (v,v), rho10 (p,v), rho11 (v,v), rho11 (p,p). Further blocks are
  /// left alone by both calls.
  enum Slot : std::size_t { r00 = 0, r10 = 1, r11_vacuum = 2, r11_photon = 3 };
  /// y <- E(tau) y for the hierarchy blocks, with u = propagators(tau).
  void hierarchy_propagate(const Propagators& u, BlockState& y, ComplexMatrix& work) const;
  /// Sets the hierarchy blocks of out to the non-exponentiated part of the
  /// generator at pulse amplitude xi.
  void hierarchy_rhs(double xi, const BlockState& y, BlockState& out) const;

  /// out = sum_j J_j X J_j^dagger over the phonon jumps.
  void phonon_refill(const ComplexMatrix& x, ComplexMatrix& out) const;
  /// out = sum_j J_j^dagger X J_j (Heisenberg picture).
  void phonon_refill_adjoint(const ComplexMatrix& x, ComplexMatrix& out) const;

 private:
  model::SystemParams params_;
  double delta0_;
  std::size_t dim_;
  ComplexMatrix h_vac_, h_photon_;
  ComplexMatrix heff_vac_, heff_photon_;
  std::vector<SparseMatrix> jumps_;
  std::vector<SparseMatrix> jumps_adj_;
};

/// out = A B for square matrices of equal size, no allocation, serial.
void multiply_into(const ComplexMatrix& a, const ComplexMatrix& b, ComplexMatrix& out);

}  // namespace optomech::dynamics
