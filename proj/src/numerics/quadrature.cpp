#include "optomech/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "optomech/error.hpp"

namespace optomech::numerics {

GaussLegendreRule gauss_legendre(int order) {
  if (order < 1 || order > 256) throw DomainError("gauss_legendre: order out of range");
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
  }
  return rule;
}

namespace {

struct Panel {
  double a;
  double b;
  int depth;
  std::vector<double> estimate;
};

void panel_sum(const VectorIntegrand& f, const GaussLegendreRule& rule, double a, double b,
               std::vector<double>& out, std::vector<double>& scratch) {
  std::fill(out.begin(), out.end(), 0.0);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    f(mid + half * rule.nodes[i], scratch);
    const double w = half * rule.weights[i];
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * scratch[k];
  }
}

}  // namespace

QuadratureResult integrate(const VectorIntegrand& f, std::size_t dim, double a, double b,
                           std::span<const double> breakpoints, const QuadratureOptions& opts) {
  if (!(b > a)) throw DomainError("integrate: empty interval");
  const GaussLegendreRule rule = gauss_legendre(opts.order);

  std::vector<double> edges{a};
  std::vector<double> sorted(breakpoints.begin(), breakpoints.end());
  std::sort(sorted.begin(), sorted.end());
  for (double x : sorted)
    if (x > a && x < b && x - edges.back() > 1e-12 * (b - a)) edges.push_back(x);
  edges.push_back(b);

  std::vector<double> scratch(dim);
  std::vector<Panel> stack;
  std::vector<double> total(dim, 0.0);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p{edges[i], edges[i + 1], 0, std::vector<double>(dim)};
    panel_sum(f, rule, p.a, p.b, p.estimate, scratch);
    for (std::size_t k = 0; k < dim; ++k) total[k] += p.estimate[k];
    stack.push_back(std::move(p));
  }
  double scale = 0.0;
  for (double v : total) scale = std::max(scale, std::abs(v));
  const double global_tol = std::max(opts.abs_tol, opts.rel_tol * scale);

  QuadratureResult result;
  result.values.assign(dim, 0.0);
  std::vector<double> left(dim);
  std::vector<double> right(dim);
  // Panels are processed depth-first from the right edge; accumulation order
  // is fixed, so results are reproducible.
  while (!stack.empty()) {
    Panel p = std::move(stack.back());
    stack.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    panel_sum(f, rule, p.a, mid, left, scratch);
    panel_sum(f, rule, mid, p.b, right, scratch);
    double err = 0.0;
    for (std::size_t k = 0; k < dim; ++k)
      err = std::max(err, std::abs(left[k] + right[k] - p.estimate[k]));
    const double local_tol = global_tol * (p.b - p.a) / (b - a);
    if (err <= local_tol || err <= 1e-300) {
      for (std::size_t k = 0; k < dim; ++k) result.values[k] += left[k] + right[k];
      result.error_estimate += err;
      ++result.panels;
      continue;
    }
    if (p.depth >= opts.max_depth)
      throw ConvergenceError("integrate: no convergence on [" + std::to_string(p.a) + ", " +
                             std::to_string(p.b) + "]");
    stack.push_back(Panel{mid, p.b, p.depth + 1, right});
    stack.push_back(Panel{p.a, mid, p.depth + 1, left});
  }
  return result;
}

}  // namespace optomech::numerics
