#include "optomech/dynamics/master_equation.hpp"

#include <cmath>

#include "optomech/error.hpp"
#include "optomech/model/operators.hpp"

namespace optomech::dynamics {

ComplexMatrix photon_annihilation(std::size_t phonon_dim) {
  ComplexMatrix c(2, 2);
  c(0, 1) = 1.0;
  return numerics::kron(c, ComplexMatrix::identity(phonon_dim));
}

ComplexMatrix phonon_annihilation(std::size_t phonon_dim) {
  const auto ops = model::build_operators(model::Truncation{phonon_dim});
  return numerics::kron(ComplexMatrix::identity(2), ops.b);
}

ComplexMatrix build_hamiltonian(const model::SystemParams& params, double delta0,
                                const model::Truncation& trunc) {
  params.validate();
  trunc.validate();
  if (!std::isfinite(delta0)) throw DomainError("build_hamiltonian: non-finite detuning");
  const std::size_t m = trunc.phonon_dim;
  const ComplexMatrix c = photon_annihilation(m);
  const ComplexMatrix b = phonon_annihilation(m);
  const ComplexMatrix n_c = numerics::adjoint(c) * c;
  const ComplexMatrix n_b = numerics::adjoint(b) * b;
  ComplexMatrix h = Complex(-delta0) * n_c;
  h.axpy(params.omega_M, n_b);
  h.axpy(params.g, n_c * (b + numerics::adjoint(b)));
  return h;
}

LindbladGenerator::LindbladGenerator(const model::SystemParams& params, ComplexMatrix hamiltonian)
    : h_(std::move(hamiltonian)) {
  params.validate();
  if (!h_.is_square() || h_.rows() % 2 != 0)
    throw DomainError("lindblad_superop: Hamiltonian must act on the 2M system space");
  const std::size_t m = h_.rows() / 2;
  const ComplexMatrix c = photon_annihilation(m);
  const ComplexMatrix b = phonon_annihilation(m);
  coupling_ = Complex(std::sqrt(params.kappa1)) * c;
  const auto add = [&](double rate, const ComplexMatrix& op) {
    if (rate > 0.0) jumps_.push_back(Complex(std::sqrt(rate)) * op);
  };
  add(params.kappa1, c);
  add(params.kappa0, c);
  add(params.gamma_M * (params.n_th + 1.0), b);
  add(params.gamma_M * params.n_th, numerics::adjoint(b));
}

ComplexMatrix LindbladGenerator::apply(const ComplexMatrix& rho) const {
  const Complex minus_i(0.0, -1.0);
  ComplexMatrix out = minus_i * (h_ * rho - rho * h_);
  for (const auto& j : jumps_) {
    const ComplexMatrix jd = numerics::adjoint(j);
    const ComplexMatrix jdj = jd * j;
    out += j * rho * jd;
    out.axpy(-0.5, jdj * rho + rho * jdj);
  }
  return out;
}

LindbladGenerator lindblad_superop(const model::SystemParams& params, const ComplexMatrix& h) {
  return LindbladGenerator(params, h);
}

}  // namespace optomech::dynamics
