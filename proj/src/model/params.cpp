#include "optomech/model/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/error.hpp"

namespace optomech::model {

namespace {

// CODATA 2018 exact values.
constexpr double kHbar = 1.054571817e-34;      // J s
constexpr double kBoltzmann = 1.380649e-23;    // J / K

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw DomainError(std::string("SystemParams.") + field + " " + what);
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(omega_c), "omega_c", "must be finite");
  require(std::isfinite(omega_M) && omega_M > 0.0, "omega_M", "must be > 0");
  require(std::isfinite(g), "g", "must be finite");
  require(std::isfinite(kappa1) && kappa1 >= 0.0, "kappa1", "must be >= 0");
  require(std::isfinite(kappa0) && kappa0 >= 0.0, "kappa0", "must be >= 0");
  require(std::isfinite(gamma_M) && gamma_M >= 0.0, "gamma_M", "must be >= 0");
  require(std::isfinite(n_th) && n_th >= 0.0, "n_th", "must be >= 0");
}

void Truncation::validate() const {
  if (phonon_dim < 2) throw DomainError("Truncation.phonon_dim must be >= 2");
}

Truncation default_truncation(const SystemParams& params, std::size_t n_target) {
  const double ratio = params.g / params.omega_M;
  const auto rule = static_cast<std::size_t>(
      std::ceil(4.0 * ratio * ratio + static_cast<double>(n_target) + 12.0));
  return Truncation{std::max<std::size_t>(16, rule)};
}

double polaron_energy(int n, int m, const SystemParams& params) {
  if (n < 0 || n > 1) throw DomainError("polaron_energy: photon number must be 0 or 1");
  if (m < 0) throw DomainError("polaron_energy: phonon number must be >= 0");
  return n * params.omega_c + m * params.omega_M - n * n * params.delta_om();
}

double thermal_nbar(double omega_rad_per_s, double temperature_kelvin) {
  if (!(temperature_kelvin >= 0.0)) throw DomainError("thermal_nbar: temperature must be >= 0");
  if (temperature_kelvin == 0.0) return 0.0;
  const double x = kHbar * omega_rad_per_s / (kBoltzmann * temperature_kelvin);
  return 1.0 / std::expm1(x);
}

}  // namespace optomech::model
