#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace optomech::numerics {

using OdeState = std::vector<std::complex<double>>;
/// dy = f(t, y)
using OdeRhs = std::function<void(double t, std::span<const std::complex<double>> y,
                                  std::span<std::complex<double>> dy)>;

struct StepControl {
  double step = 1e-3;                // fixed RK4 step; shortened to land on sample times
  std::vector<double> sample_times;  // ascending, inside [t0, t1]; empty -> t1 only
  bool estimate_error = false;       // rerun at step/2 and report the max deviation
};

struct OdeTrajectory {
  std::vector<double> times;
  std::vector<OdeState> states;
  double error_estimate = 0.0;  // only meaningful when StepControl::estimate_error
};

/// Classical fixed-step RK4. Deterministic for fixed inputs. Throws
/// ConvergenceError (naming the time) when the state becomes non-finite.
OdeTrajectory ode_integrate(const OdeRhs& rhs, const OdeState& y0, double t0, double t1,
                            const StepControl& control);

}  // namespace optomech::numerics
