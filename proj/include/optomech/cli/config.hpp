#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

#include "optomech/model/params.hpp"

namespace CLI {
class App;
}

namespace optomech::cli {

/// Everything a command reads. Rates and frequencies are ratios to omega_M.
/// String knobs accept "auto" (resolved per command, reported in the sidecar).
struct RunConfig {
  std::string command;

  // physics
  double g = 0.6;
  double kappa1 = 0.2;
  double kappa0 = 0.0;
  double gamma_M = 0.0;
  double n_th = 0.0;
  double d = 0.2;
  std::string delta0 = "auto";
  int m0 = 0;
  int N = 1;

  // truncation and grids
  std::size_t M = 0;  // 0: per-command default
  double grid_step = 1.0 / 400.0;
  std::string grid_lo = "auto";
  std::string grid_hi = "auto";
  std::string delta_lo = "auto";
  std::string delta_hi = "auto";
  std::size_t delta_points = 1201;

  // master-equation integration
  std::string route = "analytic";
  double sample_dt = 0.25;
  double max_step = 0.0;  // 0: pulse duration / 2000
  double trace_tol = 1e-5;
  bool thermal_start = false;

  // NOON sweep
  double g_lo = 0.0;
  double g_hi = 2.0;
  std::size_t g_points = 41;
  double kappa_lo = 0.05;
  double kappa_hi = 1.2;
  std::size_t kappa_points = 24;
  std::string shift = "auto";

  // environment given physically (fidelity)
  std::optional<double> temperature_K;
  double frequency_hz = 1e8;

  // run
  int workers = 0;  // 0: OpenMP default
  std::string out;

  model::SystemParams params() const;
  /// nullopt for "auto"; DomainError naming the key otherwise.
  std::optional<double> number_or_auto(const std::string& key, const std::string& value) const;

  /// Cross-field checks not expressible as per-option ranges.
  void validate() const;

  /// Every knob except command and out, full precision; feeding this object
  /// back through --config reproduces the run.
  nlohmann::ordered_json to_json() const;
};

/// Registers every RunConfig field as --key on app, with range checks.
void register_options(CLI::App& app, RunConfig& cfg);

}  // namespace optomech::cli
