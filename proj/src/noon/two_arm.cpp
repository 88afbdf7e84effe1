#include "optomech/noon/two_arm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "optomech/dynamics/cavity_blocks.hpp"
#include "optomech/dynamics/hierarchy.hpp"
#include "optomech/dynamics/lawson.hpp"
#include "optomech/dynamics/pulse.hpp"
#include "optomech/error.hpp"
#include "optomech/model/operators.hpp"
#include "optomech/numerics/linalg.hpp"

namespace optomech::noon {

namespace {

using dynamics::BlockState;
using dynamics::CavityBlocks;

constexpr std::size_t kArmBlocks = 4;

// Joint phonon states |a>_1 |b>_2 grouped by total phonon number s = a + b.
// Phonon jumps move row and column shells together and the vacuum
// propagator is diagonal, so shell-diagonal blocks evolve on their own; they
// are all any projection on fixed N ever sees.
struct Shells {
  std::size_t m;
  std::size_t count() const { return 2 * m - 1; }
  std::size_t first(std::size_t s) const { return s >= m ? s - (m - 1) : 0; }  // smallest a
  std::size_t size(std::size_t s) const { return std::min(s, 2 * m - 2 - s) + 1; }
  // position of (a, s - a) inside shell s, or -1 outside the truncation
  long pos(long a, long s) const {
    const long b = s - a;
    if (a < 0 || b < 0 || a >= static_cast<long>(m) || b >= static_cast<long>(m)) return -1;
    return a - static_cast<long>(first(static_cast<std::size_t>(s)));
  }
};

// Phonon jump with one nonzero per column: |k> -> amp[k] |k + shift>.
struct LadderJump {
  int shift;
  std::vector<double> amp;
};

std::vector<LadderJump> ladder_jumps(const model::SystemParams& p, std::size_t m) {
  std::vector<LadderJump> jumps;
  if (p.gamma_M <= 0.0) return jumps;
  LadderJump down{-1, std::vector<double>(m, 0.0)};
  for (std::size_t k = 1; k < m; ++k) down.amp[k] = std::sqrt(p.gamma_M * (p.n_th + 1.0) * k);
  jumps.push_back(down);
  if (p.n_th > 0.0) {
    LadderJump up{+1, std::vector<double>(m, 0.0)};
    for (std::size_t k = 0; k + 1 < m; ++k) up.amp[k] = std::sqrt(p.gamma_M * p.n_th * (k + 1.0));
    jumps.push_back(up);
  }
  return jumps;
}

// out += sum over jumps on either arm of (J x 1) Z (J x 1)^dag and (1 x J) Z (1 x J)^dag,
// shell blocks z[offset + s].
void joint_refill(const std::vector<LadderJump>& jumps, const Shells& sh, const BlockState& z,
                  BlockState& out, std::size_t offset) {
  const long m = static_cast<long>(sh.m);
  for (const auto& j : jumps) {
    for (std::size_t s = 0; s < sh.count(); ++s) {
      const long ts = static_cast<long>(s) + j.shift;
      if (ts < 0 || ts >= static_cast<long>(sh.count())) continue;
      const ComplexMatrix& src = z[offset + s];
      ComplexMatrix& dst = out[offset + static_cast<std::size_t>(ts)];
      const long n = static_cast<long>(sh.size(s));
      const long a0 = static_cast<long>(sh.first(s));
      for (long i = 0; i < n; ++i) {
        const long a = a0 + i, b = static_cast<long>(s) - a;
        // arm 1 moves a, arm 2 moves b
        const long ia1 = sh.pos(a + j.shift, ts), ia2 = sh.pos(a, ts);
        const double wa1 = a + j.shift >= 0 && a + j.shift < m ? j.amp[a] : 0.0;
        const double wa2 = b + j.shift >= 0 && b + j.shift < m ? j.amp[b] : 0.0;
        for (long k = 0; k < n; ++k) {
          const long c = a0 + k, d = static_cast<long>(s) - c;
          const Complex v = src(i, k);
          if (ia1 >= 0 && wa1 != 0.0) {
            const long ic = sh.pos(c + j.shift, ts);
            if (ic >= 0 && c + j.shift < m) dst(ia1, ic) += wa1 * j.amp[c] * v;
          }
          if (ia2 >= 0 && wa2 != 0.0) {
            const long ic = sh.pos(c, ts);
            if (ic >= 0 && d + j.shift >= 0 && d + j.shift < m) dst(ia2, ic) += wa2 * j.amp[d] * v;
          }
        }
      }
    }
  }
}

// shell blocks of x (x) y + y (x) x
void add_symmetric_kron(const ComplexMatrix& x, const ComplexMatrix& y, const Shells& sh, BlockState& out,
                        std::size_t offset) {
  for (std::size_t s = 0; s < sh.count(); ++s) {
    ComplexMatrix& dst = out[offset + s];
    const std::size_t n = sh.size(s), a0 = sh.first(s);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = a0 + i, b = s - a;
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t c = a0 + k, d = s - c;
        dst(i, k) += x(a, c) * y(b, d) + y(a, c) * x(b, d);
      }
    }
  }
}

ComplexMatrix assemble(const Shells& sh, const BlockState& y, std::size_t offset) {
  const std::size_t m = sh.m;
  ComplexMatrix full(m * m, m * m);
  for (std::size_t s = 0; s < sh.count(); ++s) {
    const std::size_t n = sh.size(s), a0 = sh.first(s);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t a = a0 + i, c = a0 + k;
        full(a * m + (s - a), c * m + (s - c)) = y[offset + s](i, k);
      }
  }
  return full;
}

}  // namespace

TwoArmResult simulate_two_arm(const NoonSetup& setup, const TwoArmOptions& options) {
  setup.validate();
  const auto& p = setup.params;
  const CavityBlocks cavity(p, setup.delta0, setup.trunc);
  const std::size_t m = cavity.phonon_dim();
  const std::size_t mm = m * m;
  const dynamics::PulseShape pulse(setup.width);

  const double t_end = options.t_end.value_or(dynamics::default_end_time(p, pulse));
  if (!(t_end > 0.0) || !(options.sample_dt > 0.0))
    throw DomainError("simulate_two_arm: end time and sample_dt must be positive");
  // same step rule as evolve_hierarchy, so the arm blocks agree with it
  const double max_step = options.max_step > 0.0 ? options.max_step : pulse.duration() / 2000.0;
  const auto intervals = static_cast<std::size_t>(std::ceil(t_end / options.sample_dt - 1e-9));
  const double dt = t_end / static_cast<double>(intervals);
  const int substeps = static_cast<int>(std::ceil(dt / max_step - 1e-9));
  const double h = dt / substeps;

  const auto u = cavity.propagators(0.5 * h);
  const Shells sh{m};
  const std::size_t nsh = sh.count();
  const std::size_t sym = kArmBlocks, cross = kArmBlocks + nsh;
  // per-shell phase factors w_I conj(w_J) of the joint vacuum propagator
  BlockState phase;
  for (std::size_t sidx = 0; sidx < nsh; ++sidx) {
    const std::size_t n = sh.size(sidx), a0 = sh.first(sidx);
    ComplexMatrix ph(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t a = a0 + i, c = a0 + k;
        ph(i, k) = u.vacuum[a] * u.vacuum[sidx - a] * std::conj(u.vacuum[c] * u.vacuum[sidx - c]);
      }
    phase.push_back(std::move(ph));
  }
  const auto jumps = ladder_jumps(p, m);
  const double sk = std::sqrt(p.kappa1);

  dynamics::LawsonProblem problem;
  ComplexMatrix work(m, m);
  problem.half_propagate = [&](BlockState& y) {
    cavity.hierarchy_propagate(u, y, work);
    for (std::size_t sidx = 0; sidx < nsh; ++sidx)
      for (std::size_t off : {sym, cross}) {
        auto dst = y[off + sidx].data();
        const auto ph = phase[sidx].data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] *= ph[i];
      }
  };
  ComplexMatrix emission(m, m), lambda(m, m), lambda_adj(m, m);
  problem.rhs = [&](double t, const BlockState& y, BlockState& out) {
    const double xi = pulse(t);
    cavity.hierarchy_rhs(xi, y, out);
    const ComplexMatrix& r00 = y[CavityBlocks::r00];
    const ComplexMatrix& r10 = y[CavityBlocks::r10];
    const ComplexMatrix& r11p = y[CavityBlocks::r11_photon];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        emission(i, j) = p.kappa1 * r11p(i, j) + xi * sk * (r10(i, j) + std::conj(r10(j, i))) +
                         xi * xi * r00(i, j);
        lambda(i, j) = sk * r10(i, j) + xi * r00(i, j);
      }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) lambda_adj(i, j) = std::conj(lambda(j, i));
    for (std::size_t k = kArmBlocks; k < out.size(); ++k) out[k].set_zero();
    joint_refill(jumps, sh, y, out, sym);
    joint_refill(jumps, sh, y, out, cross);
    add_symmetric_kron(emission, r00, sh, out, sym);
    add_symmetric_kron(lambda, lambda_adj, sh, out, cross);
  };
  dynamics::LawsonRK4 stepper(problem, h);

  const ComplexMatrix mech = model::thermal_state(m, options.thermal_start ? p.n_th : 0.0);
  BlockState y = {mech, ComplexMatrix(m, m), mech, ComplexMatrix(m, m)};
  for (std::size_t rep = 0; rep < 2; ++rep)
    for (std::size_t sidx = 0; sidx < nsh; ++sidx) y.emplace_back(sh.size(sidx), sh.size(sidx));
  for (std::size_t i = 0; i < intervals; ++i) {
    const double t0 = static_cast<double>(i) * dt;
    for (int s = 0; s < substeps; ++s) stepper.step(t0 + s * h, y);
  }

  const double tr00 = numerics::trace(y[CavityBlocks::r00]).real();
  const double tr11 =
      (numerics::trace(y[CavityBlocks::r11_vacuum]) + numerics::trace(y[CavityBlocks::r11_photon])).real();
  if (std::abs(tr00 - 1.0) > 1e-5 || std::abs(tr11 - 1.0) > 1e-5)
    throw ConvergenceError("simulate_two_arm: trace drift (Tr rho11 = " + std::to_string(tr11) +
                           ", Tr rho00 = " + std::to_string(tr00) +
                           "); increase the phonon truncation or reduce the step");

  TwoArmResult r;
  r.setup = setup;
  r.phonon_dim = m;
  r.end_time = t_end;
  const ComplexMatrix zs = assemble(sh, y, sym), zc = assemble(sh, y, cross);
  r.detected_plus = zs + zc;
  r.detected_plus *= 0.25;
  r.detected_minus = zs - zc;
  r.detected_minus *= 0.25;
  const ComplexMatrix arm = y[CavityBlocks::r11_vacuum] + y[CavityBlocks::r11_photon];
  const ComplexMatrix& r00 = y[CavityBlocks::r00];
  r.unconditioned = ComplexMatrix(mm, mm);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t d = 0; d < m; ++d)
          r.unconditioned(a * m + b, c * m + d) = 0.5 * (arm(a, c) * r00(b, d) + r00(a, c) * arm(b, d));
  r.emitted = 0.5 * numerics::trace(zs).real();
  r.cavity_residual = numerics::trace(y[CavityBlocks::r11_photon]).real();
  return r;
}

std::vector<Complex> noon_target(int n, std::size_t phonon_dim, Port port) {
  if (n < 1 || static_cast<std::size_t>(n) >= phonon_dim)
    throw DomainError("noon_target: need 1 <= N < M");
  std::vector<Complex> psi(phonon_dim * phonon_dim);
  const double s = 1.0 / std::numbers::sqrt2;
  psi[static_cast<std::size_t>(n) * phonon_dim] = s;
  psi[static_cast<std::size_t>(n)] = port == Port::plus ? s : -s;
  return psi;
}

ConditionalState conditional_noon_state(const TwoArmResult& result, int n, Port port) {
  const std::size_t m = result.phonon_dim;
  if (n < 1 || static_cast<std::size_t>(n) >= m) throw DomainError("conditional_noon_state: need 1 <= N < M");
  if (result.cavity_residual > 1e-6)
    throw ConvergenceError("conditional_noon_state: ring-down incomplete, cavity population " +
                           std::to_string(result.cavity_residual));
  std::vector<std::size_t> shell;
  for (std::size_t a = 0; a < m; ++a) {
    const long b = n - static_cast<long>(a);
    if (b >= 0 && b < static_cast<long>(m)) shell.push_back(a * m + static_cast<std::size_t>(b));
  }
  const ComplexMatrix& chosen = port == Port::plus ? result.detected_plus : result.detected_minus;
  ConditionalState c;
  c.port = port;
  for (std::size_t i : shell) {
    c.p_cond += (result.detected_plus(i, i) + result.detected_minus(i, i)).real();
    c.p_port += chosen(i, i).real();
  }
  if (c.p_cond < 1e-9 || c.p_port < 1e-12)
    throw DomainError("conditional_noon_state: heralding probability " + std::to_string(c.p_cond) +
                      " is too small to condition on");
  c.state = ComplexMatrix(m * m, m * m);
  for (std::size_t i : shell)
    for (std::size_t j : shell) c.state(i, j) = chosen(i, j) / c.p_port;
  return c;
}

FidelityResult noon_fidelity(const NoonSetup& setup, const Environment& env, const TwoArmOptions& options) {
  if (setup.trunc.phonon_dim < static_cast<std::size_t>(setup.n) + 8)
    throw DomainError("noon_fidelity: per-arm truncation M = " + std::to_string(setup.trunc.phonon_dim) +
                      " must be at least N + 8 = " + std::to_string(setup.n + 8));
  NoonSetup s = setup;
  s.params.gamma_M = env.gamma_M;
  s.params.n_th = env.n_th;
  const TwoArmResult run = simulate_two_arm(s, options);
  const ConditionalState cond = conditional_noon_state(run, s.n, Port::plus);
  FidelityResult r;
  r.fidelity = numerics::uhlmann_fidelity(cond.state, noon_target(s.n, run.phonon_dim, Port::plus));
  r.p_cond = cond.p_cond;
  r.probability = noon_probability(s);
  r.n_th = env.n_th;
  return r;
}

std::array<ThermalConvention, 2> thermal_conventions(double frequency_hz, double temperature_kelvin) {
  return {ThermalConvention{"omega = 2 pi f", model::thermal_nbar(2.0 * std::numbers::pi * frequency_hz,
                                                                   temperature_kelvin)},
          ThermalConvention{"omega = f (rad/s)", model::thermal_nbar(frequency_hz, temperature_kelvin)}};
}

}  // namespace optomech::noon
