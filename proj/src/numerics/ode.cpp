#include "optomech/numerics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/error.hpp"

namespace optomech::numerics {

namespace {

using Complex = std::complex<double>;

void rk4_step(const OdeRhs& rhs, double t, double h, OdeState& y, std::vector<OdeState>& work) {
  auto& k1 = work[0];
  auto& k2 = work[1];
  auto& k3 = work[2];
  auto& k4 = work[3];
  auto& tmp = work[4];
  const std::size_t n = y.size();
  rhs(t, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  rhs(t + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  rhs(t + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
  rhs(t + h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

OdeTrajectory run(const OdeRhs& rhs, const OdeState& y0, double t0, double step,
                  const std::vector<double>& samples) {
  OdeTrajectory traj;
  OdeState y = y0;
  std::vector<OdeState> work(5, OdeState(y0.size()));
  double t = t0;
  for (double target : samples) {
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / step - 1e-9));
      const double h = span / static_cast<double>(steps);
      for (long s = 0; s < steps; ++s) {
        rk4_step(rhs, t + s * h, h, y, work);
        for (const auto& v : y) {
          if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ConvergenceError("ode_integrate: state became non-finite at t = " +
                                   std::to_string(t + (s + 1) * h));
        }
      }
    }
    t = target;
    traj.times.push_back(t);
    traj.states.push_back(y);
  }
  return traj;
}

}  // namespace

OdeTrajectory ode_integrate(const OdeRhs& rhs, const OdeState& y0, double t0, double t1,
                            const StepControl& control) {
  if (!(control.step > 0.0)) throw DomainError("ode_integrate: step must be positive");
  if (!(t1 >= t0)) throw DomainError("ode_integrate: t1 < t0");
  std::vector<double> samples = control.sample_times;
  if (samples.empty()) samples.push_back(t1);
  if (!std::is_sorted(samples.begin(), samples.end()) || samples.front() < t0 ||
      samples.back() > t1)
    throw DomainError("ode_integrate: sample times must be ascending inside [t0, t1]");

  OdeTrajectory traj = run(rhs, y0, t0, control.step, samples);
  if (control.estimate_error) {
    const OdeTrajectory fine = run(rhs, y0, t0, 0.5 * control.step, samples);
    double err = 0.0;
    for (std::size_t s = 0; s < traj.states.size(); ++s)
      for (std::size_t i = 0; i < y0.size(); ++i)
        err = std::max(err, std::abs(traj.states[s][i] - fine.states[s][i]));
    traj.error_estimate = err;
  }
  return traj;
}

}  // namespace optomech::numerics
