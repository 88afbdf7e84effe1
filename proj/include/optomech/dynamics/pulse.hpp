#pragma once

#include <vector>

namespace optomech::dynamics {

/// Gaussian single-photon envelope f(t) = A exp[-(t - T/2)^2 / (T/8)^2] on
/// [0, T] with T = 16/d, normalized so that the integral of f^2 over [0, T] is 1.
/// Zero outside [0, T]. The carrier sits in the rotating frame, so f is real.
class PulseShape {
 public:
  explicit PulseShape(double spectral_width);

  double width() const noexcept { return d_; }
  double duration() const noexcept { return duration_; }
  double peak() const noexcept { return amplitude_; }
  double operator()(double t) const;

 private:
  double d_;
  double duration_;
  double amplitude_;
};

}  // namespace optomech::dynamics
