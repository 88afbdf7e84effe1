#pragma once

#include <optional>
#include <vector>

#include "optomech/dynamics/cavity_blocks.hpp"
#include "optomech/dynamics/pulse.hpp"
#include "optomech/model/params.hpp"
#include "optomech/numerics/complex_matrix.hpp"

namespace optomech::dynamics {

/// Fock-state input hierarchy at one time. rho11 is the physical state,
/// rho00 the photon-free reference, rho10 = rho01^dagger the coherences.
///
/// Only four phonon blocks can be nonzero (v = cavity vacuum, p = one photon):
/// rho00 in (v,v), rho10 in (p,v), rho11 in (v,v) and (p,p).
struct FockHierarchy {
  double time = 0.0;
  ComplexMatrix r00;         // rho00 (v,v)
  ComplexMatrix r10;         // rho10 (p,v)
  ComplexMatrix r11_vacuum;  // rho11 (v,v)
  ComplexMatrix r11_photon;  // rho11 (p,p)

  /// Dense 2M x 2M operators, photon-major ordering.
  ComplexMatrix rho11() const;
  ComplexMatrix rho10() const;
  ComplexMatrix rho01() const;
  ComplexMatrix rho00() const;
  /// Tr_optical rho11.
  ComplexMatrix mechanical_state() const;
};

struct HierarchyOptions {
  int m0 = 0;
  /// Replaces |m0><m0| as the initial mechanical state (e.g. thermal).
  std::optional<ComplexMatrix> initial_mechanics;
  /// Output grid spacing upper bound; the grid is uniform on [0, t_end].
  double sample_dt = 0.25;
  /// Integrator step upper bound; 0 means duration / 2000.
  double max_step = 0.0;
  /// Default: pulse duration + 10/kappa1 + 10/omega_M.
  std::optional<double> t_end;
  /// Abort when Tr rho11 or Tr rho00 drift by more than this.
  double trace_tolerance = 1e-5;
};

struct HierarchyTrajectory {
  model::SystemParams params;
  double delta0 = 0.0;
  PulseShape pulse{1.0};
  std::size_t phonon_dim = 0;
  double step = 0.0;       // integrator step
  double sample_dt = 0.0;  // spacing of samples
  int substeps = 1;        // integrator steps per sample interval
  std::vector<FockHierarchy> samples;

  std::vector<double> times() const;
};

/// Default end time: duration + 10/kappa1 + 10/omega_M (the kappa term is
/// dropped when kappa1 = 0).
double default_end_time(const model::SystemParams& params, const PulseShape& pulse);

/// Integrates
///   rho11' = L0 rho11 + f [rho01, L^dag] + f [L, rho10]
///   rho10' = L0 rho10 + f [rho00, L^dag]
///   rho00' = L0 rho00
/// with L = sqrt(kappa1) c, from rho11 = rho00 = |0><0| x rho_mech.
/// Throws ConvergenceError when a trace drifts beyond the tolerance.
HierarchyTrajectory evolve_hierarchy(const model::SystemParams& params, double delta0,
                                     const PulseShape& pulse, const model::Truncation& trunc,
                                     const HierarchyOptions& options = {});

struct FluxResult {
  std::vector<double> times;
  std::vector<double> flux;
  double total = 0.0;
};

/// Output photon flux |f|^2 + 2 f Re Tr[L rho10] + Tr[L^dag L rho11] and its
/// time integral. Throws ConvergenceError on flux below -1e-8.
FluxResult output_flux(const HierarchyTrajectory& trajectory);

/// Phonon populations of Tr_optical rho11 at the last sample. Throws
/// ConvergenceError when more than 1e-6 of a photon is still in the cavity.
std::vector<double> final_sideband_populations(const HierarchyTrajectory& trajectory);

}  // namespace optomech::dynamics
