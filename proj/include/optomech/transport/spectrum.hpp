#pragma once

#include <optional>
#include <vector>

#include "optomech/model/params.hpp"
#include "optomech/numerics/quadrature.hpp"
#include "optomech/transport/spectral_density.hpp"
#include "optomech/transport/transmission.hpp"

namespace optomech::transport {

/// Uniform samples of S over Delta_omega = omega - omega_c.
struct Spectrum {
  std::vector<double> grid;
  std::vector<double> values;
  double step = 0.0;

  double integral() const;  // trapezoid
  /// Trapezoid integral restricted to [lo, hi].
  double integral(double lo, double hi) const;
};

/// Explicit grid, or automatic span covering every sideband that carries
/// weight (extended until each outer half omega_M holds < 1e-6 of the total).
struct GridSpec {
  std::optional<double> lo;
  std::optional<double> hi;
  double step = 1.0 / 400.0;  // in units of omega_M
};

/// S(Dw) = sum_m |F(Dw + (m-m0) omega_M)|^2 |t_m(Dw + (m-m0) omega_M)|^2.
/// Different final phonon states are orthogonal so sidebands add incoherently.
Spectrum transmitted_spectrum(const model::SystemParams& params, const SpectralDensity& input,
                              int m0, const GridSpec& grid, const model::Truncation& trunc);

struct SidebandProbabilities {
  std::vector<double> values;  // P_m for m = 0 .. output_dim-1
  double error_estimate = 0.0;
  double total() const;
};

/// P_m = integral |F|^2 |t_m|^2 for all m at once.
SidebandProbabilities sideband_probabilities(const model::SystemParams& params,
                                             const SpectralDensity& input, int m0,
                                             const model::Truncation& trunc,
                                             const numerics::QuadratureOptions& opts = {});

double sideband_probability(const model::SystemParams& params, const SpectralDensity& input, int m0,
                            int m, const model::Truncation& trunc,
                            const numerics::QuadratureOptions& opts = {});
/// Same, reusing a prebuilt model (sweeps).
double sideband_probability(const TransmissionModel& model, const SpectralDensity& input, int m,
                            const numerics::QuadratureOptions& opts = {});

}  // namespace optomech::transport
