#pragma once

#include <optional>
#include <vector>

#include "optomech/model/params.hpp"
#include "optomech/numerics/quadrature.hpp"

namespace optomech::noon {

/// Two identical arms, both starting in the mechanical ground state, and a
/// Gaussian single photon of width d split evenly between them.
struct NoonSetup {
  int n = 1;                  // target phonon number
  model::SystemParams params;  // per arm
  double delta0 = 0.0;
  double width = 0.2;          // d
  model::Truncation trunc{11};  // per arm, > N (fidelity runs need N + 8)

  void validate() const;
};

/// Input detuning for target N: -Delta_om + k omega_M. k = 0 for N = 1 and
/// k = 1 for N = 5; otherwise the k in 0..N-1 maximizing P(N).
double detuning_for_target(int n, const model::SystemParams& params, double width);

/// Setup with the detuning rule (unless delta0 is given) and M = N + 10 per
/// arm unless phonon_dim is given.
NoonSetup make_setup(int n, const model::SystemParams& params, double width,
                     std::optional<double> delta0 = std::nullopt,
                     std::optional<std::size_t> phonon_dim = std::nullopt);

/// Weight of the N-th red sideband for one arm from the ground state. The
/// balanced lossless interferometer only redistributes this weight between
/// its two output ports, so it is also the heralding probability.
double noon_probability(const NoonSetup& setup, const numerics::QuadratureOptions& opts = {});

struct Range {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 2;

  double at(std::size_t i) const;
};

struct Heatmap {
  int n = 1;
  std::vector<double> g_values;      // in units of omega_M
  std::vector<double> kappa_values;  // kappa1 in units of omega_M
  std::vector<double> values;        // row-major: values[ig * kappa_values.size() + ik]
  std::size_t argmax_g = 0;
  std::size_t argmax_kappa = 0;

  double at(std::size_t ig, std::size_t ik) const { return values[ig * kappa_values.size() + ik]; }
  double max() const { return at(argmax_g, argmax_kappa); }
};

/// P(N) on a (g, kappa1) grid given in units of omega_M. Cells run in
/// parallel and are written by index. base supplies omega_M and kappa0; the
/// detuning is -Delta_om + k omega_M with k = sideband_shift, or the
/// per-cell detuning_for_target rule when unset. Ranges: g in [0, 2],
/// kappa1 in (0, 1.2].
Heatmap probability_heatmap(int n, const Range& g, const Range& kappa1, double width,
                            const model::SystemParams& base = {},
                            std::optional<int> sideband_shift = std::nullopt);

}  // namespace optomech::noon
