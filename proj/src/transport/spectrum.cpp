#include "optomech/transport/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optomech/error.hpp"
#include "optomech/parallel.hpp"

namespace optomech::transport {

namespace {

void require_normalized(const SpectralDensity& input) {
  if (std::abs(input.norm() - 1.0) > 1e-6)
    throw DomainError("spectral density is not normalized (integral " +
                      std::to_string(input.norm()) + ")");
}

std::vector<double> breakpoints(const TransmissionModel& model, const SpectralDensity& input) {
  const auto [a, b] = input.support();
  std::vector<double> pts = input.kinks();
  for (double r : model.resonances())
    if (r > a && r < b) pts.push_back(r);
  std::sort(pts.begin(), pts.end());
  return pts;
}

void fill_values(Spectrum& s, const TransmissionModel& model, const SpectralDensity& input) {
  const double w = model.params().omega_M;
  const int m0 = model.m0();
  const std::size_t dim = model.output_dim();
  const auto n = static_cast<std::ptrdiff_t>(s.grid.size());
  s.values.assign(s.grid.size(), 0.0);
#pragma omp parallel for schedule(static) if (parallel_enabled())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const double dw = s.grid[static_cast<std::size_t>(i)];
    for (std::size_t m = 0; m < dim; ++m) {
      const double din = dw + (static_cast<int>(m) - m0) * w;
      const double p = input.power(din);
      if (p < 1e-300) continue;
      acc += p * std::norm(model.amplitude(m, din));
    }
    s.values[static_cast<std::size_t>(i)] = acc;
  }
}

Spectrum make_grid(double lo, double hi, double step) {
  if (!(hi > lo) || !(step > 0.0)) throw DomainError("spectrum grid: need lo < hi and step > 0");
  Spectrum s;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9)) + 1;
  if (n > 20'000'000) throw DomainError("spectrum grid: too many points");
  s.step = step;
  s.grid.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.grid[i] = lo + static_cast<double>(i) * step;
  return s;
}

}  // namespace

double Spectrum::integral() const {
  if (values.size() < 2) return 0.0;
  double total = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) total += values[i];
  return total * step;
}

double Spectrum::integral(double lo, double hi) const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = std::max(grid[i], lo), b = std::min(grid[i + 1], hi);
    if (b <= a) continue;
    // linear interpolation on the cell
    const auto at = [&](double x) {
      const double u = (x - grid[i]) / step;
      return (1.0 - u) * values[i] + u * values[i + 1];
    };
    total += 0.5 * (b - a) * (at(a) + at(b));
  }
  return total;
}

double SidebandProbabilities::total() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

SidebandProbabilities sideband_probabilities(const model::SystemParams& params,
                                             const SpectralDensity& input, int m0,
                                             const model::Truncation& trunc,
                                             const numerics::QuadratureOptions& opts) {
  require_normalized(input);
  const TransmissionModel model(params, m0, trunc);
  const std::size_t dim = model.output_dim();
  const auto integrand = [&](double x, std::span<double> out) {
    const double p = input.power(x);
    for (std::size_t m = 0; m < dim; ++m) out[m] = p * std::norm(model.amplitude(m, x));
  };
  const auto [a, b] = input.support();
  const auto pts = breakpoints(model, input);
  const auto res = numerics::integrate(integrand, dim, a, b, pts, opts);
  return {res.values, res.error_estimate};
}

double sideband_probability(const TransmissionModel& model, const SpectralDensity& input, int m,
                            const numerics::QuadratureOptions& opts) {
  require_normalized(input);
  if (m < 0) throw DomainError("sideband_probability: m must be >= 0");
  if (static_cast<std::size_t>(m) >= model.output_dim()) return 0.0;
  const auto mm = static_cast<std::size_t>(m);
  const auto integrand = [&](double x, std::span<double> out) {
    out[0] = input.power(x) * std::norm(model.amplitude(mm, x));
  };
  const auto [a, b] = input.support();
  const auto pts = breakpoints(model, input);
  return numerics::integrate(integrand, 1, a, b, pts, opts).values[0];
}

double sideband_probability(const model::SystemParams& params, const SpectralDensity& input, int m0,
                            int m, const model::Truncation& trunc,
                            const numerics::QuadratureOptions& opts) {
  return sideband_probability(TransmissionModel(params, m0, trunc), input, m, opts);
}

Spectrum transmitted_spectrum(const model::SystemParams& params, const SpectralDensity& input,
                              int m0, const GridSpec& grid, const model::Truncation& trunc) {
  require_normalized(input);
  const TransmissionModel model(params, m0, trunc);
  const double w = params.omega_M;
  const double step = grid.step * w;
  const double center = input.center();

  if (grid.lo && grid.hi) {
    Spectrum s = make_grid(*grid.lo, *grid.hi, step);
    fill_values(s, model, input);
    return s;
  }

  // Sidebands holding 99.99% of the weight decide the default span.
  const auto probs = sideband_probabilities(params, input, m0, trunc);
  std::vector<std::size_t> order(probs.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return probs.values[i] > probs.values[j]; });
  const double total = probs.total();
  double acc = 0.0;
  int m_lo = m0, m_hi = m0, count = 0;
  for (std::size_t idx : order) {
    if (acc >= 0.9999 * total) break;
    acc += probs.values[idx];
    m_lo = std::min(m_lo, static_cast<int>(idx));
    m_hi = std::max(m_hi, static_cast<int>(idx));
    ++count;
  }
  // Output of sideband m sits near center + (m0 - m) omega_M.
  const auto [sa, sb] = input.support();
  const double half_width = 0.5 * (sb - sa);
  const double margin = std::max(w, half_width);
  double lo = std::min(center - (count + 1) * w, center + (m0 - m_hi) * w - margin);
  double hi = std::max(center + 2.0 * w, center + (m0 - m_lo) * w + margin);
  if (grid.lo) lo = *grid.lo;
  if (grid.hi) hi = *grid.hi;

  for (int attempt = 0;; ++attempt) {
    Spectrum s = make_grid(lo, hi, step);
    fill_values(s, model, input);
    const double all = s.integral();
    if (!(all > 0.0)) return s;
    const bool extend_lo = !grid.lo && s.integral(lo, lo + 0.5 * w) > 1e-6 * all;
    const bool extend_hi = !grid.hi && s.integral(hi - 0.5 * w, hi) > 1e-6 * all;
    if (!extend_lo && !extend_hi) return s;
    if (attempt == 50) throw ConvergenceError("transmitted_spectrum: span did not converge");
    if (extend_lo) lo -= w;
    if (extend_hi) hi += w;
  }
}

}  // namespace optomech::transport
