#pragma once

#include <utility>
#include <vector>

namespace optomech::transport {

/// Input photon spectral amplitude F as a function of the detuning
/// Delta = omega - omega_c.
///
/// Gaussian: F = (2/(pi d^2))^{1/4} exp[-(Delta - Delta0)^2 / d^2].
/// Tabulated: samples (Delta_i, F_i); the power |F|^2 is interpolated linearly
/// between samples and vanishes outside the table, so a tabulated density is
/// linear in its sampled powers.
class SpectralDensity {
 public:
  enum class Kind { gaussian, tabulated };

  static SpectralDensity gaussian(double center_detuning, double width);
  static SpectralDensity tabulated(std::vector<double> detunings, std::vector<double> amplitudes);

  Kind kind() const noexcept { return kind_; }
  /// Carrier detuning Delta0 (Gaussian) or power-weighted mean (tabulated).
  double center() const noexcept { return center_; }
  /// Gaussian width d; for tabulated densities twice the rms width of |F|^2
  /// (which is d for a Gaussian).
  double width() const noexcept { return width_; }

  double power(double detuning) const;      // |F(Delta)|^2
  double amplitude(double detuning) const;  // |F(Delta)|

  /// Interval outside which the power is zero or below 1e-31 of its peak.
  std::pair<double, double> support() const;
  /// Interior points where the density has kinks (table nodes).
  std::vector<double> kinks() const;

  /// Integral of |F|^2: analytic for the Gaussian, exact trapezoid otherwise.
  double norm() const;
  SpectralDensity normalized() const;

  const std::vector<double>& sample_detunings() const noexcept { return nodes_; }
  const std::vector<double>& sample_powers() const noexcept { return powers_; }

 private:
  Kind kind_ = Kind::gaussian;
  double center_ = 0.0;
  double width_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> powers_;
};

}  // namespace optomech::transport
