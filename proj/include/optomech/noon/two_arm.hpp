#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "optomech/noon/probability.hpp"
#include "optomech/numerics/complex_matrix.hpp"

namespace optomech::noon {

using numerics::Complex;
using numerics::ComplexMatrix;

struct TwoArmOptions {
  /// Start both arms in the thermal state of the bath instead of |0>.
  bool thermal_start = false;
  double sample_dt = 0.25;
  double max_step = 0.0;  // 0: pulse duration / 2000
  std::optional<double> t_end;
};

/// Outcome of sending the split photon through both arms and recombining
/// the outputs on a balanced beamsplitter with detectors on ports + and -.
///
/// The arms never interact, so the joint photon-number hierarchy is built
/// from one arm's hierarchy: with sigma_ij the single-arm components,
///   rho = 1/2 (s11 x s00 + s10 x s01 + s01 x s10 + s00 x s11).
/// Detection events are accumulated on the joint phonon space
/// (index a * M + b for |a>_1 |b>_2) and evolved to the end time. Only the
/// blocks diagonal in total phonon number are kept for them: those are
/// closed under the evolution and are all a projection on N can see.
struct TwoArmResult {
  NoonSetup setup;
  std::size_t phonon_dim = 0;
  double end_time = 0.0;
  /// Unnormalized joint mechanical states given a detection on port + / -,
  /// block-diagonal in total phonon number.
  ComplexMatrix detected_plus;
  ComplexMatrix detected_minus;
  /// Joint mechanical state with the photon traced out (no detection record).
  ComplexMatrix unconditioned;
  /// Total emitted photon number and photon left in a cavity at the end.
  double emitted = 0.0;
  double cavity_residual = 0.0;
};

TwoArmResult simulate_two_arm(const NoonSetup& setup, const TwoArmOptions& options = {});

enum class Port { plus, minus };

struct ConditionalState {
  ComplexMatrix state;   // joint mechanics, unit trace
  double p_cond = 0.0;   // probability of an N-th sideband click on either port
  double p_port = 0.0;   // same, restricted to the chosen port
  Port port = Port::plus;
};

/// Projects the port-conditioned joint state on total phonon number N.
/// Throws ConvergenceError if the ring-down is incomplete and DomainError if
/// the heralding probability is below 1e-9.
ConditionalState conditional_noon_state(const TwoArmResult& result, int n, Port port = Port::plus);

/// (|N,0> + s |0,N>)/sqrt(2) on the joint space, s = +1 for port +, -1 for port -.
std::vector<Complex> noon_target(int n, std::size_t phonon_dim, Port port = Port::plus);

struct Environment {
  double gamma_M = 0.0;  // units of omega_M
  double n_th = 0.0;
};

struct FidelityResult {
  double fidelity = 0.0;
  double p_cond = 0.0;
  double probability = 0.0;  // analytic P(N)
  double n_th = 0.0;
};

FidelityResult noon_fidelity(const NoonSetup& setup, const Environment& env,
                             const TwoArmOptions& options = {});

/// Bath occupation for a mechanical frequency quoted as frequency_hz, read
/// either as an ordinary frequency (omega = 2 pi f) or as an angular one.
struct ThermalConvention {
  std::string name;
  double n_th = 0.0;
};
std::array<ThermalConvention, 2> thermal_conventions(double frequency_hz, double temperature_kelvin);

}  // namespace optomech::noon
