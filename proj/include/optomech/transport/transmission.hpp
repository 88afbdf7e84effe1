#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "optomech/model/params.hpp"

namespace optomech::transport {

using Complex = std::complex<double>;

/// Transmission amplitudes t_m for one input detuning Delta0.
struct TransmissionSet {
  int m0 = 0;
  double delta0 = 0.0;
  std::vector<Complex> amplitudes;  // m = 0 .. size-1
  int mprime_cutoff = 0;            // intermediate polaron states 0 .. cutoff-1
  double mprime_residual = 0.0;     // bound on the dropped m' tail
  /// Flux beyond the returned m range (exact total minus the kept sum).
  double truncation_residual = 0.0;

  double flux() const;  // sum_m |t_m|^2
};

/// Precomputed overlap tables for fixed (params, m0); evaluating amplitudes at
/// a detuning is then O(M K).
///
/// t_m = delta_{m,m0} - i kappa1 sum_{m'} <m0|D|m'><m|D|m'> /
///       (Delta - (m'-m0) omega_M + Delta_om + i (kappa1+kappa0)/2)
class TransmissionModel {
 public:
  TransmissionModel(const model::SystemParams& params, int m0, const model::Truncation& trunc);

  int m0() const noexcept { return m0_; }
  /// Number of final phonon states returned; the model truncation is widened
  /// to at least ceil(8 beta^2 + m0 + 16).
  std::size_t output_dim() const noexcept { return fc_.size(); }
  int mprime_cutoff() const noexcept { return static_cast<int>(fc_m0_.size()); }
  double mprime_residual() const noexcept { return mprime_residual_; }

  /// Throws ConvergenceError when more than 1e-8 of the flux falls outside
  /// the returned range.
  TransmissionSet amplitudes(double delta) const;
  Complex amplitude(std::size_t m, double delta) const;
  /// sum over every m (not just the kept ones), exact via unitarity of D.
  double total_flux(double delta) const;
  /// Detunings where the denominator is resonant, m' = 0 .. cutoff-1.
  std::vector<double> resonances() const;

  const model::SystemParams& params() const noexcept { return params_; }

 private:
  Complex weight(int mprime, double delta) const;  // <m0|D|m'> / denominator

  model::SystemParams params_;
  int m0_;
  std::vector<double> fc_m0_;            // <m0|D|m'>
  std::vector<std::vector<double>> fc_;  // fc_[m][m'] = <m|D|m'>
  double mprime_residual_ = 0.0;
};

TransmissionSet transmission_amplitudes(const model::SystemParams& params, double delta0, int m0,
                                        const model::Truncation& trunc);

/// -Delta_om + (m' - m0) omega_M for m' = 0..count-1.
std::vector<double> dip_positions(const model::SystemParams& params, int m0, int count);

}  // namespace optomech::transport
