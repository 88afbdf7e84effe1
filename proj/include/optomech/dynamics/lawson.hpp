#pragma once

#include <functional>
#include <vector>

#include "optomech/numerics/complex_matrix.hpp"

namespace optomech::dynamics {

/// A state made of independent dense blocks (hierarchy components, sector
/// blocks, ...).
using BlockState = std::vector<numerics::ComplexMatrix>;

void block_axpy(BlockState& y, numerics::Complex alpha, const BlockState& x);
double block_max_abs(const BlockState& y);

/// Integrating-factor (Lawson) RK4 for y' = G y + N(t, y), where the linear,
/// time-independent and possibly stiff part G is applied exactly through
/// E(h/2) = exp(G h/2). Only the half step is ever needed:
///   y+ = E(h)y + h/6 [E(h)k1 + 2E(h/2)(k2 + k3) + k4]
/// is rewritten as E(h/2)[E(h/2)y + h/6 E(h/2)k1 + h/3 (k2 + k3)] + h/6 k4.
struct LawsonProblem {
  std::function<void(BlockState& y)> half_propagate;  // y <- E(h/2) y
  std::function<void(double t, const BlockState& y, BlockState& out)> rhs;  // out = N(t, y)
};

class LawsonRK4 {
 public:
  LawsonRK4(LawsonProblem problem, double step);

  double step_size() const noexcept { return h_; }
  void step(double t, BlockState& y);

 private:
  LawsonProblem problem_;
  double h_;
  BlockState k1_, k2_, k3_, k4_, tmp_, yh_;
};

}  // namespace optomech::dynamics
