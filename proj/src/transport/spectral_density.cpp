#include "optomech/transport/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "optomech/error.hpp"

namespace optomech::transport {

SpectralDensity SpectralDensity::gaussian(double center_detuning, double width) {
  if (!std::isfinite(center_detuning)) throw DomainError("spectral density: non-finite carrier");
  if (!(width > 0.0) || !std::isfinite(width))
    throw DomainError("spectral density: width d must be positive");
  SpectralDensity s;
  s.kind_ = Kind::gaussian;
  s.center_ = center_detuning;
  s.width_ = width;
  return s;
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> detunings,
                                           std::vector<double> amplitudes) {
  if (detunings.size() != amplitudes.size())
    throw DomainError("spectral density: table columns differ in length");
  if (detunings.size() < 2) throw DomainError("spectral density: table needs >= 2 samples");
  for (std::size_t i = 0; i < detunings.size(); ++i) {
    if (!std::isfinite(detunings[i]) || !std::isfinite(amplitudes[i]))
      throw DomainError("spectral density: non-finite table entry");
    if (i > 0 && !(detunings[i] > detunings[i - 1]))
      throw DomainError("spectral density: detunings must be strictly increasing");
  }
  SpectralDensity s;
  s.kind_ = Kind::tabulated;
  s.nodes_ = std::move(detunings);
  s.powers_.resize(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i) s.powers_[i] = amplitudes[i] * amplitudes[i];

  // Exact moments of the piecewise-linear power.
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i + 1 < s.nodes_.size(); ++i) {
    const double a = s.nodes_[i], b = s.nodes_[i + 1];
    const double pa = s.powers_[i], pb = s.powers_[i + 1];
    const double h = b - a;
    m0 += 0.5 * h * (pa + pb);
    m1 += h / 6.0 * (pa * (2 * a + b) + pb * (a + 2 * b));
    m2 += h / 12.0 * (pa * (3 * a * a + 2 * a * b + b * b) + pb * (a * a + 2 * a * b + 3 * b * b));
  }
  if (!(m0 > 0.0)) throw DomainError("spectral density: table has zero power");
  s.center_ = m1 / m0;
  s.width_ = 2.0 * std::sqrt(std::max(m2 / m0 - s.center_ * s.center_, 0.0));
  return s;
}

double SpectralDensity::power(double detuning) const {
  if (kind_ == Kind::gaussian) {
    const double x = (detuning - center_) / width_;
    return std::sqrt(2.0 / std::numbers::pi) / width_ * std::exp(-2.0 * x * x);
  }
  if (detuning < nodes_.front() || detuning > nodes_.back()) return 0.0;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), detuning);
  if (it == nodes_.end()) return powers_.back();
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  const double u = (detuning - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
  return (1.0 - u) * powers_[i] + u * powers_[i + 1];
}

double SpectralDensity::amplitude(double detuning) const { return std::sqrt(power(detuning)); }

std::pair<double, double> SpectralDensity::support() const {
  if (kind_ == Kind::gaussian) return {center_ - 6.0 * width_, center_ + 6.0 * width_};
  return {nodes_.front(), nodes_.back()};
}

std::vector<double> SpectralDensity::kinks() const {
  if (kind_ == Kind::gaussian) return {};
  return {nodes_.begin() + 1, nodes_.end() - 1};
}

double SpectralDensity::norm() const {
  if (kind_ == Kind::gaussian) return 1.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    total += 0.5 * (nodes_[i + 1] - nodes_[i]) * (powers_[i] + powers_[i + 1]);
  return total;
}

SpectralDensity SpectralDensity::normalized() const {
  if (kind_ == Kind::gaussian) return *this;
  SpectralDensity s = *this;
  const double n = norm();
  for (double& p : s.powers_) p /= n;
  return s;
}

}  // namespace optomech::transport
