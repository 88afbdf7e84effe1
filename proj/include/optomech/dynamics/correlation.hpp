#pragma once

#include <vector>

#include "optomech/dynamics/hierarchy.hpp"
#include "optomech/transport/spectrum.hpp"

namespace optomech::dynamics {

/// Two-time output correlation C(t_i, t_j) = <b_out^dag(t_i) b_out(t_j)> on
/// the uniform sample grid of a trajectory (rotating frame of the carrier).
struct CorrelationGrid {
  std::vector<double> times;
  double step = 0.0;
  ComplexMatrix values;  // values(i, j) = C(t_i, t_j)

  /// Sum_i C(t_i, t_i) dt with trapezoid end weights: the emitted photon number.
  double diagonal_integral() const;
};

/// Quantum regression on the hierarchy: for t' >= t the operator-conditioned
/// components L rho(t) are propagated to t' under the same generator; t' < t
/// is filled by Hermitian symmetry. Start times are independent and run in
/// parallel.
CorrelationGrid correlation_grid(const HierarchyTrajectory& trajectory, const model::Truncation& trunc);

/// S(Dw) = 1/(2 pi) double integral C(t', t) exp(-i nu (t' - t)), nu = Dw - Delta0,
/// evaluated on grid.lo..grid.hi (default: the analytic span rule using the
/// final sideband populations).
transport::Spectrum spectrum_from_correlation(const CorrelationGrid& grid, double delta0,
                                              const transport::GridSpec& spec,
                                              const std::vector<double>& populations, int m0,
                                              double omega_m);

/// Forward hierarchy + regression + Fourier transform.
transport::Spectrum output_spectrum_me(const model::SystemParams& params, double delta0,
                                      const PulseShape& pulse, const model::Truncation& trunc,
                                      const transport::GridSpec& grid = {},
                                      const HierarchyOptions& options = {});

}  // namespace optomech::dynamics
