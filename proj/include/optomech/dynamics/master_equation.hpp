#pragma once

#include <vector>

#include "optomech/model/params.hpp"
#include "optomech/numerics/complex_matrix.hpp"

namespace optomech::dynamics {

using numerics::Complex;
using numerics::ComplexMatrix;

/// H = -Delta0 c^dag c + omega_M b^dag b + g c^dag c (b + b^dag) on the
/// {0,1}-photon x phonon space, photon-major ordering (index = n M + m).
/// Frame rotating at the input carrier.
ComplexMatrix build_hamiltonian(const model::SystemParams& params, double delta0,
                                const model::Truncation& trunc);

/// Dense Lindblad generator on the 2M-dimensional system space:
/// L rho = -i[H, rho] + D[sqrt(k1) c] + D[sqrt(k0) c] + g_M (n+1) D[b] + g_M n D[b^dag].
/// Straightforward O(dim^3) reference used to check the block integrators.
class LindbladGenerator {
 public:
  LindbladGenerator(const model::SystemParams& params, ComplexMatrix hamiltonian);

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  std::size_t dim() const noexcept { return h_.rows(); }
  const ComplexMatrix& hamiltonian() const noexcept { return h_; }
  const std::vector<ComplexMatrix>& jumps() const noexcept { return jumps_; }
  /// sqrt(kappa1) c, the operator coupling to the waveguide.
  const ComplexMatrix& waveguide_coupling() const noexcept { return coupling_; }

 private:
  ComplexMatrix h_;
  ComplexMatrix coupling_;
  std::vector<ComplexMatrix> jumps_;
};

LindbladGenerator lindblad_superop(const model::SystemParams& params, const ComplexMatrix& h);

/// Photon and phonon ladder operators on the 2M space.
ComplexMatrix photon_annihilation(std::size_t phonon_dim);
ComplexMatrix phonon_annihilation(std::size_t phonon_dim);

}  // namespace optomech::dynamics
