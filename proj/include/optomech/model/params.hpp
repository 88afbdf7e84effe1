#pragma once

#include <cstddef>

namespace optomech::model {

/// Physical rates and frequencies of one optomechanical cavity.
///
/// Internal units: omega_M = 1. Every frequency and rate is stored as a ratio
/// to the mechanical frequency; physical units only appear at the CLI boundary.
struct SystemParams {
  double omega_c = 0.0;  ///< optical resonance; only enters through detunings
  double omega_M = 1.0;
  double g = 0.0;        ///< single-photon optomechanical coupling (sign is a phase convention)
  double kappa1 = 0.0;   ///< cavity-waveguide coupling rate
  double kappa0 = 0.0;   ///< intrinsic cavity loss
  double gamma_M = 0.0;  ///< mechanical damping
  double n_th = 0.0;     ///< mean thermal phonon number of the bath

  /// Polaron shift g^2 / omega_M.
  double delta_om() const noexcept { return g * g / omega_M; }
  /// Thermal heating rate n_th * gamma_M.
  double Gamma_M() const noexcept { return n_th * gamma_M; }
  /// Displacement of the one-photon mechanical eigenstates, -g / omega_M.
  double beta() const noexcept { return -g / omega_M; }

  /// Throws DomainError naming the first offending field.
  void validate() const;
};

/// Phonon-space truncation |0>..|phonon_dim-1>.
struct Truncation {
  std::size_t phonon_dim = 16;

  void validate() const;
};

/// max(16, ceil(4 (g/omega_M)^2 + n_target + 12)).
Truncation default_truncation(const SystemParams& params, std::size_t n_target = 0);

/// Polaron eigenenergy n omega_c + m omega_M - n^2 Delta_om for n in {0, 1}.
double polaron_energy(int n, int m, const SystemParams& params);

/// Bose occupation 1 / (exp(hbar omega / k_B T) - 1) for omega in rad/s and T in
/// kelvin, CODATA constants. Returns 0 at T = 0.
double thermal_nbar(double omega_rad_per_s, double temperature_kelvin);

}  // namespace optomech::model
