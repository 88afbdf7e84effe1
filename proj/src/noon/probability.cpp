#include "optomech/noon/probability.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "optomech/error.hpp"
#include "optomech/transport/spectral_density.hpp"
#include "optomech/transport/spectrum.hpp"
#include "optomech/transport/transmission.hpp"
#include "optomech/parallel.hpp"

namespace optomech::noon {

namespace {

double probability_at(int n, const model::SystemParams& params, double delta0, double width,
                      const numerics::QuadratureOptions& opts) {
  const auto input = transport::SpectralDensity::gaussian(delta0, width);
  const transport::TransmissionModel model(params, 0, model::default_truncation(params, n));
  return transport::sideband_probability(model, input, n, opts);
}

}  // namespace

void NoonSetup::validate() const {
  if (n < 1) throw DomainError("noon: target phonon number N must be >= 1");
  params.validate();
  if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("noon: width d must be positive");
  if (!std::isfinite(delta0)) throw DomainError("noon: delta0 must be finite");
  trunc.validate();
  if (trunc.phonon_dim <= static_cast<std::size_t>(n))
    throw DomainError("noon: per-arm truncation M = " + std::to_string(trunc.phonon_dim) +
                      " must exceed N = " + std::to_string(n));
}

double detuning_for_target(int n, const model::SystemParams& params, double width) {
  if (n < 1) throw DomainError("detuning_for_target: N must be >= 1");
  const double base = -params.delta_om();
  if (n == 1) return base;
  if (n == 5) return base + params.omega_M;
  int best_k = 0;
  double best = -1.0;
  for (int k = 0; k < n; ++k) {
    const double p = probability_at(n, params, base + k * params.omega_M, width, {});
    if (p > best) {
      best = p;
      best_k = k;
    }
  }
  return base + best_k * params.omega_M;
}

NoonSetup make_setup(int n, const model::SystemParams& params, double width,
                     std::optional<double> delta0, std::optional<std::size_t> phonon_dim) {
  NoonSetup s;
  s.n = n;
  s.params = params;
  s.width = width;
  s.delta0 = delta0 ? *delta0 : detuning_for_target(n, params, width);
  s.trunc = model::Truncation{phonon_dim ? *phonon_dim : static_cast<std::size_t>(n) + 10};
  s.validate();
  return s;
}

double noon_probability(const NoonSetup& setup, const numerics::QuadratureOptions& opts) {
  setup.validate();
  return probability_at(setup.n, setup.params, setup.delta0, setup.width, opts);
}

double Range::at(std::size_t i) const {
  if (points < 2) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
}

Heatmap probability_heatmap(int n, const Range& g, const Range& kappa1, double width,
                            const model::SystemParams& base, std::optional<int> sideband_shift) {
  if (n < 1) throw DomainError("probability_heatmap: N must be >= 1");
  if (g.points < 1 || kappa1.points < 1) throw DomainError("probability_heatmap: empty grid");
  const double w = base.omega_M;
  if (g.lo < 0.0 || g.hi > 2.0 || g.lo > g.hi)
    throw DomainError("probability_heatmap: g range must lie in [0, 2 omega_M]");
  if (kappa1.lo <= 0.0 || kappa1.hi > 1.2 || kappa1.lo > kappa1.hi)
    throw DomainError("probability_heatmap: kappa1 range must lie in (0, 1.2 omega_M]");
  if (!(width > 0.0)) throw DomainError("probability_heatmap: width must be positive");

  Heatmap map;
  map.n = n;
  for (std::size_t i = 0; i < g.points; ++i) map.g_values.push_back(g.at(i));
  for (std::size_t i = 0; i < kappa1.points; ++i) map.kappa_values.push_back(kappa1.at(i));
  const std::size_t cells = g.points * kappa1.points;
  map.values.assign(cells, 0.0);

  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4) if (parallel_enabled())
  for (std::size_t c = 0; c < cells; ++c) {
    try {
      model::SystemParams p = base;
      p.g = map.g_values[c / kappa1.points] * w;
      p.kappa1 = map.kappa_values[c % kappa1.points] * w;
      const double delta0 = sideband_shift ? -p.delta_om() + *sideband_shift * w
                                           : detuning_for_target(n, p, width);
      map.values[c] = probability_at(n, p, delta0, width, {});
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t best = 0;
  for (std::size_t c = 1; c < cells; ++c)
    if (map.values[c] > map.values[best]) best = c;
  map.argmax_g = best / kappa1.points;
  map.argmax_kappa = best % kappa1.points;
  return map;
}

}  // namespace optomech::noon
