#include "optomech/dynamics/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "optomech/dynamics/lawson.hpp"
#include "optomech/error.hpp"
#include "optomech/parallel.hpp"

namespace optomech::dynamics {

double CorrelationGrid::diagonal_integral() const {
  const std::size_t n = times.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    total += w * values(i, i).real();
  }
  return total * step;
}

CorrelationGrid correlation_grid(const HierarchyTrajectory& traj, const model::Truncation& trunc) {
  const auto& samples = traj.samples;
  const std::size_t n = samples.size();
  if (n < 2) throw DomainError("correlation_grid: trajectory needs at least two samples");
  if (trunc.phonon_dim != traj.phonon_dim)
    throw DomainError("correlation_grid: truncation differs from the trajectory");
  const CavityBlocks cavity(traj.params, traj.delta0, trunc);
  const std::size_t m = cavity.phonon_dim();
  const double sk = std::sqrt(traj.params.kappa1);
  const double h = traj.step;
  const int substeps = traj.substeps;
  const auto u = cavity.propagators(0.5 * h);

  // After the pulse has passed the regression generator is time independent,
  // so Tr[y(t')] = Tr[Omega(t' - t) y(t)] with Omega the Heisenberg-evolved
  // identity; Omega is computed once for every lag.
  std::size_t pulse_end = n - 1;
  for (std::size_t i = 0; i < n; ++i)
    if (samples[i].time >= traj.pulse.duration()) {
      pulse_end = i;
      break;
    }

  std::vector<ComplexMatrix> omega;
  omega.reserve(n);
  {
    LawsonProblem adj;
    ComplexMatrix work(m, m);
    adj.half_propagate = [&](BlockState& y) { u.heisenberg_vac_photon(y[0], work); };
    adj.rhs = [&](double, const BlockState& y, BlockState& out) {
      out[0].set_zero();
      cavity.phonon_refill_adjoint(y[0], out[0]);
    };
    LawsonRK4 stepper(adj, h);
    BlockState w = {ComplexMatrix::identity(m)};
    omega.push_back(w[0]);
    for (std::size_t k = 1; k < n; ++k) {
      for (int s = 0; s < substeps; ++s) stepper.step(0.0, w);
      omega.push_back(w[0]);
    }
  }
  const auto pair_trace = [](const ComplexMatrix& a, const ComplexMatrix& b) {
    // Tr[A B]
    Complex acc{};
    const std::size_t d = a.rows();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) acc += a(i, k) * b(k, i);
    return acc;
  };

  // G(j, i) = Tr[L^dag chi11(t_j)] for the regression started at t_i.
  ComplexMatrix g(n, n);
  const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) if (parallel_enabled())
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    // x = chi10 (v,v) = L rho10, y = chi11 (v,p) = (L rho11)(v,p)
    BlockState state = {Complex(sk) * samples[i].r10, Complex(sk) * samples[i].r11_photon};
    std::size_t j = i;
    g(i, i) = sk * numerics::trace(state[1]);
    if (i < pulse_end) {
      LawsonProblem reg;
      ComplexMatrix work(m, m);
      reg.half_propagate = [&](BlockState& y) {
        u.vac_vac(y[0]);
        u.vac_photon(y[1], work);
      };
      reg.rhs = [&](double t, const BlockState& y, BlockState& out) {
        out[0].set_zero();
        out[1].set_zero();
        cavity.phonon_refill(y[0], out[0]);
        cavity.phonon_refill(y[1], out[1]);
        const double xi = traj.pulse(t);
        if (xi != 0.0) out[1].axpy(-xi * sk, y[0]);
      };
      LawsonRK4 stepper(reg, h);
      for (; j < pulse_end; ++j) {
        const double t0 = samples[j].time;
        for (int s = 0; s < substeps; ++s) stepper.step(t0 + s * h, state);
        g(j + 1, i) = sk * numerics::trace(state[1]);
      }
    }
    for (std::size_t k = j + 1; k < n; ++k) g(k, i) = sk * pair_trace(omega[k - j], state[1]);
  }

  CorrelationGrid out;
  out.times = traj.times();
  out.step = traj.sample_dt;
  out.values = ComplexMatrix(n, n);
  std::vector<double> xi(n);
  std::vector<Complex> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    xi[i] = traj.pulse(samples[i].time);
    a[i] = sk * numerics::trace(samples[i].r10);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      // t' = t_j >= t = t_i
      Complex c = xi[j] * xi[i] + xi[j] * a[i] + xi[i] * std::conj(a[j]) + g(j, i);
      if (j == i) c = c.real();
      out.values(j, i) = c;
      out.values(i, j) = std::conj(c);
    }
  }
  return out;
}

transport::Spectrum spectrum_from_correlation(const CorrelationGrid& grid, double delta0,
                                              const transport::GridSpec& spec,
                                              const std::vector<double>& populations, int m0,
                                              double omega_m) {
  const std::size_t n = grid.times.size();
  const double dt = grid.step;
  // lag sums A_k = sum_i w_i w_{i+k} C(t_{i+k}, t_i)
  std::vector<Complex> lag(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t i = 0; i + k < n; ++i) {
      const double wi = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
      const double wj = (i + k == 0 || i + k + 1 == n) ? 0.5 : 1.0;
      acc += wi * wj * grid.values(i + k, i);
    }
    lag[k] = acc;
  }

  double lo, hi;
  if (spec.lo && spec.hi) {
    lo = *spec.lo;
    hi = *spec.hi;
  } else {
    // Sidebands holding 99.99% of the final phonon weight set the span.
    std::vector<std::size_t> order(populations.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return populations[a] > populations[b]; });
    const double total = std::accumulate(populations.begin(), populations.end(), 0.0);
    double acc = 0.0;
    int count = 0, m_lo = m0, m_hi = m0;
    for (std::size_t idx : order) {
      if (acc >= 0.9999 * total) break;
      acc += populations[idx];
      m_lo = std::min(m_lo, static_cast<int>(idx));
      m_hi = std::max(m_hi, static_cast<int>(idx));
      ++count;
    }
    lo = spec.lo.value_or(std::min(delta0 - (count + 1) * omega_m, delta0 + (m0 - m_hi - 1) * omega_m));
    hi = spec.hi.value_or(std::max(delta0 + 2.0 * omega_m, delta0 + (m0 - m_lo + 1) * omega_m));
  }
  const double step = spec.step * omega_m;
  if (!(hi > lo) || !(step > 0.0)) throw DomainError("spectrum grid: need lo < hi and step > 0");
  if (std::max(std::abs(lo - delta0), std::abs(hi - delta0)) > std::numbers::pi / dt)
    throw DomainError("spectrum grid exceeds the Nyquist range of the correlation grid");

  transport::Spectrum s;
  s.step = step;
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9)) + 1;
  s.grid.resize(count);
  s.values.resize(count);
  const auto nc = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(static) if (parallel_enabled())
  for (std::ptrdiff_t q = 0; q < nc; ++q) {
    const auto idx = static_cast<std::size_t>(q);
    const double dw = lo + static_cast<double>(idx) * step;
    const double nu = dw - delta0;
    const Complex rot = std::polar(1.0, -nu * dt);
    Complex phase = rot;
    double acc = lag[0].real();
    for (std::size_t k = 1; k < n; ++k) {
      acc += 2.0 * (lag[k] * phase).real();
      phase *= rot;
    }
    s.grid[idx] = dw;
    s.values[idx] = dt * dt / (2.0 * std::numbers::pi) * acc;
  }
  return s;
}

transport::Spectrum output_spectrum_me(const model::SystemParams& params, double delta0,
                                      const PulseShape& pulse, const model::Truncation& trunc,
                                      const transport::GridSpec& grid,
                                      const HierarchyOptions& options) {
  const auto traj = evolve_hierarchy(params, delta0, pulse, trunc, options);
  const auto corr = correlation_grid(traj, trunc);
  const auto pops = final_sideband_populations(traj);
  return spectrum_from_correlation(corr, delta0, grid, pops, options.m0, params.omega_M);
}

}  // namespace optomech::dynamics
