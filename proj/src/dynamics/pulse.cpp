#include "optomech/dynamics/pulse.hpp"

#include <cmath>
#include <numbers>

#include "optomech/error.hpp"

namespace optomech::dynamics {

PulseShape::PulseShape(double spectral_width) : d_(spectral_width) {
  if (!(spectral_width > 0.0) || !std::isfinite(spectral_width))
    throw DomainError("pulse: spectral width d must be positive");
  duration_ = 16.0 / d_;
  const double sigma = duration_ / 8.0;
  // integral of exp(-2 (t - T/2)^2 / sigma^2) over [0, T]
  const double norm2 = sigma * std::sqrt(std::numbers::pi / 2.0) * std::erf(4.0 * std::numbers::sqrt2);
  amplitude_ = 1.0 / std::sqrt(norm2);
}

double PulseShape::operator()(double t) const {
  if (t < 0.0 || t > duration_) return 0.0;
  const double x = (t - 0.5 * duration_) / (duration_ / 8.0);
  return amplitude_ * std::exp(-x * x);
}

}  // namespace optomech::dynamics
