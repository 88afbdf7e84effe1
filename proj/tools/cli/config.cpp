#include "optomech/cli/config.hpp"

#include <cmath>
#include <cstdlib>

#include <CLI11.hpp>

#include "optomech/error.hpp"

namespace optomech::cli {

namespace {

CLI::Validator positive() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
          return "must be a positive number, got " + s;
        return {};
      },
      "POSITIVE");
}

CLI::Validator auto_or_number() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        if (s == "auto") return {};
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
          return "expected a number or 'auto', got " + s;
        return {};
      },
      "NUMBER|auto");
}

// 0 means "choose for me"; otherwise a real truncation.
CLI::Validator truncation() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        char* end = nullptr;
        const long v = std::strtol(s.c_str(), &end, 10);
        if (end == s.c_str() || *end != '\0' || v < 0 || v == 1 || v > 400)
          return "must be 0 (auto) or in [2, 400], got " + s;
        return {};
      },
      "0|2..400");
}

}  // namespace

model::SystemParams RunConfig::params() const {
  model::SystemParams p;
  p.g = g;
  p.kappa1 = kappa1;
  p.kappa0 = kappa0;
  p.gamma_M = gamma_M;
  p.n_th = n_th;
  return p;
}

std::optional<double> RunConfig::number_or_auto(const std::string& key, const std::string& value) const {
  if (value == "auto") return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
    throw DomainError(key + ": expected a number or 'auto', got '" + value + "'");
  return v;
}

void RunConfig::validate() const {
  params().validate();
  const auto glo = number_or_auto("grid_lo", grid_lo);
  const auto ghi = number_or_auto("grid_hi", grid_hi);
  if (glo && ghi && !(*glo < *ghi)) throw DomainError("grid_lo must be below grid_hi");
  const auto dlo = number_or_auto("delta_lo", delta_lo);
  const auto dhi = number_or_auto("delta_hi", delta_hi);
  if (dlo && dhi && *dlo > *dhi) throw DomainError("delta_lo must not exceed delta_hi");
  number_or_auto("delta0", delta0);
  if (shift != "auto") {
    char* end = nullptr;
    std::strtol(shift.c_str(), &end, 10);
    if (end == shift.c_str() || *end != '\0')
      throw DomainError("shift: expected an integer or 'auto', got '" + shift + "'");
  }
  if (g_lo > g_hi) throw DomainError("g_lo must not exceed g_hi");
  if (kappa_lo > kappa_hi) throw DomainError("kappa_lo must not exceed kappa_hi");
  if (g_points * kappa_points > 10000)
    throw DomainError("g_points * kappa_points must be <= 10000 cells");
  if (route != "analytic" && route != "me") throw DomainError("route must be 'analytic' or 'me'");
  if (M != 0 && M <= static_cast<std::size_t>(m0))
    throw DomainError("M = " + std::to_string(M) + " must exceed m0 = " + std::to_string(m0));
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["g"] = g;
  j["kappa1"] = kappa1;
  j["kappa0"] = kappa0;
  j["gamma_M"] = gamma_M;
  j["n_th"] = n_th;
  j["d"] = d;
  j["delta0"] = delta0;
  j["m0"] = m0;
  j["N"] = N;
  j["M"] = M;
  j["grid_step"] = grid_step;
  j["grid_lo"] = grid_lo;
  j["grid_hi"] = grid_hi;
  j["delta_lo"] = delta_lo;
  j["delta_hi"] = delta_hi;
  j["delta_points"] = delta_points;
  j["route"] = route;
  j["sample_dt"] = sample_dt;
  j["max_step"] = max_step;
  j["trace_tol"] = trace_tol;
  j["thermal_start"] = thermal_start;
  j["g_lo"] = g_lo;
  j["g_hi"] = g_hi;
  j["g_points"] = g_points;
  j["kappa_lo"] = kappa_lo;
  j["kappa_hi"] = kappa_hi;
  j["kappa_points"] = kappa_points;
  j["shift"] = shift;
  j["temperature_K"] = temperature_K ? nlohmann::ordered_json(*temperature_K) : nullptr;
  j["frequency_hz"] = frequency_hz;
  j["workers"] = workers;
  return j;
}

void register_options(CLI::App& app, RunConfig& c) {
  const std::string phys = "Physics (rates as ratios to omega_M)";
  app.add_option("--g", c.g, "optomechanical coupling g")->check(CLI::Range(0.0, 3.0))->group(phys)
      ->capture_default_str();
  app.add_option("--kappa1", c.kappa1, "cavity-waveguide coupling")
      ->check(CLI::Range(0.0, 5.0))->group(phys)->capture_default_str();
  app.add_option("--kappa0", c.kappa0, "intrinsic cavity loss")
      ->check(CLI::Range(0.0, 5.0))->group(phys)->capture_default_str();
  app.add_option("--gamma_M", c.gamma_M, "mechanical damping")
      ->check(CLI::Range(0.0, 0.1))->group(phys)->capture_default_str();
  app.add_option("--n_th", c.n_th, "bath phonon occupation")
      ->check(CLI::Range(0.0, 1000.0))->group(phys)->capture_default_str();
  app.add_option("--d", c.d, "spectral width of the input photon")
      ->check(positive() & CLI::Range(0.0, 2.0))->group(phys)->capture_default_str();
  app.add_option("--delta0", c.delta0, "carrier detuning from the cavity, or auto")
      ->check(auto_or_number())->group(phys)->capture_default_str();
  app.add_option("--m0", c.m0, "initial phonon number")->check(CLI::Range(0, 50))->group(phys)
      ->capture_default_str();
  app.add_option("--N", c.N, "NOON phonon number")->check(CLI::Range(1, 20))->group(phys)
      ->capture_default_str();

  const std::string num = "Numerics";
  app.add_option("--M", c.M, "phonon truncation per cavity (0: auto)")->check(truncation())
      ->group(num)->capture_default_str();
  app.add_option("--grid_step", c.grid_step, "spectrum grid step")
      ->check(positive() & CLI::Range(0.0, 0.5))->group(num)->capture_default_str();
  app.add_option("--grid_lo", c.grid_lo, "spectrum grid start, or auto")->check(auto_or_number())
      ->group(num)->capture_default_str();
  app.add_option("--grid_hi", c.grid_hi, "spectrum grid end, or auto")->check(auto_or_number())
      ->group(num)->capture_default_str();
  app.add_option("--delta_lo", c.delta_lo, "transmission sweep start, or auto")
      ->check(auto_or_number())->group(num)->capture_default_str();
  app.add_option("--delta_hi", c.delta_hi, "transmission sweep end, or auto")
      ->check(auto_or_number())->group(num)->capture_default_str();
  app.add_option("--delta_points", c.delta_points, "transmission sweep points")
      ->check(CLI::Range(1, 100000))->group(num)->capture_default_str();
  app.add_option("--route", c.route, "spectrum route")
      ->check(CLI::IsMember({"analytic", "me"}))->group(num)->capture_default_str();
  app.add_option("--sample_dt", c.sample_dt, "master-equation sample spacing")
      ->check(positive() & CLI::Range(0.0, 1.0))->group(num)->capture_default_str();
  app.add_option("--max_step", c.max_step, "integrator step bound (0: pulse duration / 2000)")
      ->check(CLI::Range(0.0, 1.0))->group(num)->capture_default_str();
  app.add_option("--trace_tol", c.trace_tol, "allowed trace drift")
      ->check(positive() & CLI::Range(0.0, 0.1))->group(num)->capture_default_str();
  app.add_flag("--thermal_start", c.thermal_start, "start the mirror in the bath's thermal state")
      ->group(num);

  const std::string sweep = "NOON sweep";
  app.add_option("--g_lo", c.g_lo)->check(CLI::Range(0.0, 2.0))->group(sweep)->capture_default_str();
  app.add_option("--g_hi", c.g_hi)->check(CLI::Range(0.0, 2.0))->group(sweep)->capture_default_str();
  app.add_option("--g_points", c.g_points)->check(CLI::Range(1, 10000))->group(sweep)
      ->capture_default_str();
  app.add_option("--kappa_lo", c.kappa_lo)->check(positive() & CLI::Range(0.0, 1.2))->group(sweep)
      ->capture_default_str();
  app.add_option("--kappa_hi", c.kappa_hi)->check(positive() & CLI::Range(0.0, 1.2))->group(sweep)
      ->capture_default_str();
  app.add_option("--kappa_points", c.kappa_points)->check(CLI::Range(1, 10000))->group(sweep)
      ->capture_default_str();
  app.add_option("--shift", c.shift, "carrier at -Delta_om + shift omega_M, or auto per cell")
      ->group(sweep)->capture_default_str();

  const std::string env = "Environment";
  app.add_option("--temperature_K", c.temperature_K, "bath temperature; replaces n_th (fidelity)")
      ->check(CLI::Range(0.0, 1000.0))->group(env);
  app.add_option("--frequency_hz", c.frequency_hz, "mechanical frequency for temperature_K")
      ->check(positive())->group(env)->capture_default_str();

  const std::string run = "Run";
  app.add_option("--workers", c.workers, "OpenMP threads (0: runtime default)")
      ->check(CLI::Range(0, 1024))->group(run)->capture_default_str();
  app.add_option("--out", c.out, "output prefix: writes <out>.csv and <out>.json")->group(run);
}

}  // namespace optomech::cli
