#pragma once

#include <functional>
#include <span>
#include <vector>

namespace optomech::numerics {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int order);

/// Vector-valued integrand: writes f(x) into out (fixed length).
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

struct QuadratureOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-14;
  int order = 16;        // Gauss-Legendre points per panel
  int max_depth = 40;    // bisection depth per initial panel
};

struct QuadratureResult {
  std::vector<double> values;
  double error_estimate = 0.0;
  int panels = 0;
};

/// Adaptive Gauss-Legendre integration of a vector integrand over [a, b].
/// Breakpoints inside (a, b) split the initial panels (resonance positions).
/// A panel is accepted when its estimate agrees with the sum of its two halves
/// to within max(abs_tol, rel_tol * |I|_max) scaled by the panel's share of
/// the interval. Throws ConvergenceError when max_depth is exceeded.
QuadratureResult integrate(const VectorIntegrand& f, std::size_t dim, double a, double b,
                           std::span<const double> breakpoints, const QuadratureOptions& opts = {});

}  // namespace optomech::numerics
