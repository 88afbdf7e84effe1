#include "optomech/dynamics/lawson.hpp"

#include <algorithm>
#include <cmath>

#include "optomech/error.hpp"

namespace optomech::dynamics {

void block_axpy(BlockState& y, numerics::Complex alpha, const BlockState& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i].axpy(alpha, x[i]);
}

double block_max_abs(const BlockState& y) {
  double m = 0.0;
  for (const auto& b : y) m = std::max(m, numerics::max_abs(b));
  return m;
}

LawsonRK4::LawsonRK4(LawsonProblem problem, double step) : problem_(std::move(problem)), h_(step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("lawson: step must be positive");
}

void LawsonRK4::step(double t, BlockState& y) {
  const double h = h_;
  if (k1_.size() != y.size()) {
    k1_ = k2_ = k3_ = k4_ = tmp_ = yh_ = y;
  }
  problem_.rhs(t, y, k1_);

  tmp_ = y;
  block_axpy(tmp_, 0.5 * h, k1_);
  problem_.half_propagate(tmp_);
  problem_.rhs(t + 0.5 * h, tmp_, k2_);

  yh_ = y;
  problem_.half_propagate(yh_);
  tmp_ = yh_;
  block_axpy(tmp_, 0.5 * h, k2_);
  problem_.rhs(t + 0.5 * h, tmp_, k3_);

  tmp_ = yh_;
  block_axpy(tmp_, h, k3_);
  problem_.half_propagate(tmp_);
  problem_.rhs(t + h, tmp_, k4_);

  // y = E(h/2)[yh + h/6 E(h/2) k1 + h/3 (k2 + k3)] + h/6 k4
  problem_.half_propagate(k1_);
  y = yh_;
  block_axpy(y, h / 6.0, k1_);
  block_axpy(y, h / 3.0, k2_);
  block_axpy(y, h / 3.0, k3_);
  problem_.half_propagate(y);
  block_axpy(y, h / 6.0, k4_);

  for (const auto& b : y)
    for (const auto& v : b.data())
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw ConvergenceError("lawson: non-finite state at t = " + std::to_string(t + h));
}

}  // namespace optomech::dynamics
