#include "optomech/dynamics/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/dynamics/lawson.hpp"
#include "optomech/error.hpp"
#include "optomech/numerics/linalg.hpp"

namespace optomech::dynamics {

namespace {

ComplexMatrix embed(const ComplexMatrix& block, std::size_t row_sector, std::size_t col_sector) {
  const std::size_t m = block.rows();
  ComplexMatrix out(2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out(row_sector * m + i, col_sector * m + j) = block(i, j);
  return out;
}

constexpr std::size_t kR00 = CavityBlocks::r00, kR10 = CavityBlocks::r10, kR11V = CavityBlocks::r11_vacuum,
                      kR11P = CavityBlocks::r11_photon;

}  // namespace

ComplexMatrix FockHierarchy::rho11() const { return embed(r11_vacuum, 0, 0) + embed(r11_photon, 1, 1); }
ComplexMatrix FockHierarchy::rho10() const { return embed(r10, 1, 0); }
ComplexMatrix FockHierarchy::rho01() const { return embed(numerics::adjoint(r10), 0, 1); }
ComplexMatrix FockHierarchy::rho00() const { return embed(r00, 0, 0); }
ComplexMatrix FockHierarchy::mechanical_state() const { return r11_vacuum + r11_photon; }

std::vector<double> HierarchyTrajectory::times() const {
  std::vector<double> t;
  t.reserve(samples.size());
  for (const auto& s : samples) t.push_back(s.time);
  return t;
}

double default_end_time(const model::SystemParams& params, const PulseShape& pulse) {
  double t = pulse.duration() + 10.0 / params.omega_M;
  if (params.kappa1 > 0.0) t += 10.0 / params.kappa1;
  return t;
}

HierarchyTrajectory evolve_hierarchy(const model::SystemParams& params, double delta0,
                                     const PulseShape& pulse, const model::Truncation& trunc,
                                     const HierarchyOptions& options) {
  const CavityBlocks cavity(params, delta0, trunc);
  const std::size_t m = cavity.phonon_dim();
  if (options.m0 < 0 || static_cast<std::size_t>(options.m0) >= m)
    throw DomainError("evolve_hierarchy: m0 outside the phonon truncation");

  const double t_end = options.t_end.value_or(default_end_time(params, pulse));
  if (!(t_end > 0.0)) throw DomainError("evolve_hierarchy: end time must be positive");
  if (!(options.sample_dt > 0.0)) throw DomainError("evolve_hierarchy: sample_dt must be positive");
  const double max_step = options.max_step > 0.0 ? options.max_step : pulse.duration() / 2000.0;
  const auto intervals = static_cast<std::size_t>(std::ceil(t_end / options.sample_dt - 1e-9));
  const double dt = t_end / static_cast<double>(intervals);
  const int substeps = static_cast<int>(std::ceil(dt / max_step - 1e-9));
  const double h = dt / substeps;

  ComplexMatrix mech(m, m);
  if (options.initial_mechanics) {
    mech = *options.initial_mechanics;
    if (mech.rows() != m || mech.cols() != m)
      throw DomainError("evolve_hierarchy: initial mechanical state has the wrong dimension");
    numerics::validate_density_matrix(mech, 1e-8);
  } else {
    mech(static_cast<std::size_t>(options.m0), static_cast<std::size_t>(options.m0)) = 1.0;
  }

  const auto u = cavity.propagators(0.5 * h);
  LawsonProblem problem;
  ComplexMatrix work(m, m);
  problem.half_propagate = [&](BlockState& y) { cavity.hierarchy_propagate(u, y, work); };
  problem.rhs = [&](double t, const BlockState& y, BlockState& out) { cavity.hierarchy_rhs(pulse(t), y, out); };
  LawsonRK4 stepper(problem, h);

  BlockState y = {mech, ComplexMatrix(m, m), mech, ComplexMatrix(m, m)};
  HierarchyTrajectory traj;
  traj.params = params;
  traj.delta0 = delta0;
  traj.pulse = pulse;
  traj.phonon_dim = m;
  traj.step = h;
  traj.sample_dt = dt;
  traj.substeps = substeps;
  traj.samples.reserve(intervals + 1);

  const auto record = [&](double t) {
    const double tr00 = numerics::trace(y[kR00]).real();
    const double tr11 = (numerics::trace(y[kR11V]) + numerics::trace(y[kR11P])).real();
    if (std::abs(tr00 - 1.0) > options.trace_tolerance || std::abs(tr11 - 1.0) > options.trace_tolerance)
      throw ConvergenceError("evolve_hierarchy: trace drift at t = " + std::to_string(t) +
                             " (Tr rho11 = " + std::to_string(tr11) + ", Tr rho00 = " +
                             std::to_string(tr00) + "); reduce the step");
    traj.samples.push_back({t, y[kR00], y[kR10], y[kR11V], y[kR11P]});
  };

  record(0.0);
  for (std::size_t i = 0; i < intervals; ++i) {
    const double t0 = static_cast<double>(i) * dt;
    for (int s = 0; s < substeps; ++s) stepper.step(t0 + s * h, y);
    record(static_cast<double>(i + 1) * dt);
  }
  return traj;
}

FluxResult output_flux(const HierarchyTrajectory& trajectory) {
  FluxResult out;
  const double k1 = trajectory.params.kappa1;
  const double sk = std::sqrt(k1);
  for (const auto& s : trajectory.samples) {
    const double xi = trajectory.pulse(s.time);
    const double value = xi * xi + 2.0 * xi * sk * numerics::trace(s.r10).real() +
                         k1 * numerics::trace(s.r11_photon).real();
    if (value < -1e-8)
      throw ConvergenceError("output_flux: negative flux " + std::to_string(value) +
                             " at t = " + std::to_string(s.time));
    out.times.push_back(s.time);
    out.flux.push_back(value);
  }
  for (std::size_t i = 0; i + 1 < out.flux.size(); ++i)
    out.total += 0.5 * (out.times[i + 1] - out.times[i]) * (out.flux[i] + out.flux[i + 1]);
  return out;
}

std::vector<double> final_sideband_populations(const HierarchyTrajectory& trajectory) {
  if (trajectory.samples.empty()) throw DomainError("final_sideband_populations: empty trajectory");
  const auto& last = trajectory.samples.back();
  const double residual = numerics::trace(last.r11_photon).real();
  if (residual > 1e-6)
    throw ConvergenceError("final_sideband_populations: ring-down incomplete, cavity population " +
                           std::to_string(residual));
  const ComplexMatrix mech = last.mechanical_state();
  std::vector<double> p(mech.rows());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = mech(k, k).real();
  return p;
}

}  // namespace optomech::dynamics
