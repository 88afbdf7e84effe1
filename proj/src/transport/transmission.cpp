#include "optomech/transport/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/error.hpp"
#include "optomech/model/operators.hpp"

namespace optomech::transport {

namespace {

constexpr int kMaxPhonon = 200;
constexpr double kOverlapFloor = 1e-13;
constexpr double kFluxResidualLimit = 1e-8;

}  // namespace

double TransmissionSet::flux() const {
  double total = 0.0;
  for (const auto& t : amplitudes) total += std::norm(t);
  return total;
}

TransmissionModel::TransmissionModel(const model::SystemParams& params, int m0,
                                     const model::Truncation& trunc)
    : params_(params), m0_(m0) {
  params.validate();
  trunc.validate();
  if (m0 < 0) throw DomainError("transmission: m0 must be >= 0");
  const double beta = params.beta();
  const double b2 = beta * beta;

  // Walk m' upward past the overlap peak until <m0|D|m'> is negligible.
  std::vector<double> overlaps;
  int last_significant = 0;
  const int peak_guard = static_cast<int>(std::ceil(m0 + b2 + 6.0 * std::abs(beta) * std::sqrt(m0 + 1.0))) + 2;
  for (int k = 0;; ++k) {
    if (k >= kMaxPhonon)
      throw ConvergenceError("transmission: intermediate-state sum did not converge below m' = " +
                             std::to_string(kMaxPhonon));
    const double v = model::franck_condon(m0, k, beta);
    overlaps.push_back(v);
    if (std::abs(v) > kOverlapFloor) last_significant = k;
    if (k > peak_guard && k > last_significant + 4) break;
  }
  const std::size_t cutoff = static_cast<std::size_t>(std::max(last_significant, m0)) + 1;
  // Each dropped term is bounded by 2 kappa1/(kappa1+kappa0) |<m0|D|m'>|.
  for (std::size_t k = cutoff; k < overlaps.size(); ++k) mprime_residual_ += 2.0 * std::abs(overlaps[k]);
  overlaps.resize(cutoff);
  fc_m0_ = std::move(overlaps);

  const double wide = std::ceil(8.0 * b2 + m0 + 16.0);
  std::size_t dim = std::max<std::size_t>(trunc.phonon_dim, static_cast<std::size_t>(wide));
  dim = std::max<std::size_t>(dim, static_cast<std::size_t>(m0) + 2);
  if (dim > static_cast<std::size_t>(kMaxPhonon))
    throw DomainError("transmission: required phonon range exceeds " + std::to_string(kMaxPhonon));
  fc_ = model::franck_condon_table(dim, cutoff, beta);
}

Complex TransmissionModel::weight(int mprime, double delta) const {
  const double gamma = 0.5 * (params_.kappa1 + params_.kappa0);
  const Complex den(delta - (mprime - m0_) * params_.omega_M + params_.delta_om(), gamma);
  return fc_m0_[static_cast<std::size_t>(mprime)] / den;
}

Complex TransmissionModel::amplitude(std::size_t m, double delta) const {
  if (m >= fc_.size()) throw DomainError("transmission: phonon index outside the model range");
  Complex sum{};
  const auto& row = fc_[m];
  for (std::size_t k = 0; k < fc_m0_.size(); ++k) sum += row[k] * weight(static_cast<int>(k), delta);
  Complex t = Complex(0.0, -params_.kappa1) * sum;
  if (m == static_cast<std::size_t>(m0_)) t += 1.0;
  return t;
}

double TransmissionModel::total_flux(double delta) const {
  // |t|^2 summed over all m: 1 + 2 kappa1 Im s + kappa1^2 sum |c|^2, where
  // c_m' = <m0|D|m'> / den and s = sum <m0|D|m'> c_m'; columns of D are
  // orthonormal so the m sum of |sum_m' <m|D|m'> c_m'|^2 is sum |c|^2.
  Complex s{};
  double c2 = 0.0;
  for (std::size_t k = 0; k < fc_m0_.size(); ++k) {
    const Complex c = weight(static_cast<int>(k), delta);
    s += fc_m0_[k] * c;
    c2 += std::norm(c);
  }
  const double k1 = params_.kappa1;
  return 1.0 + 2.0 * k1 * s.imag() + k1 * k1 * c2;
}

TransmissionSet TransmissionModel::amplitudes(double delta) const {
  if (!std::isfinite(delta)) throw DomainError("transmission: non-finite detuning");
  TransmissionSet set;
  set.m0 = m0_;
  set.delta0 = delta;
  set.mprime_cutoff = mprime_cutoff();
  set.mprime_residual = mprime_residual_;
  set.amplitudes.resize(fc_.size());
  for (std::size_t m = 0; m < fc_.size(); ++m) set.amplitudes[m] = amplitude(m, delta);
  set.truncation_residual = std::max(total_flux(delta) - set.flux(), 0.0);
  if (set.truncation_residual > kFluxResidualLimit)
    throw ConvergenceError("transmission: " + std::to_string(set.truncation_residual) +
                           " of the flux lies above phonon number " + std::to_string(fc_.size()));
  return set;
}

std::vector<double> TransmissionModel::resonances() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < fc_m0_.size(); ++k)
    out.push_back((static_cast<int>(k) - m0_) * params_.omega_M - params_.delta_om());
  return out;
}

TransmissionSet transmission_amplitudes(const model::SystemParams& params, double delta0, int m0,
                                        const model::Truncation& trunc) {
  return TransmissionModel(params, m0, trunc).amplitudes(delta0);
}

std::vector<double> dip_positions(const model::SystemParams& params, int m0, int count) {
  if (count < 1) throw DomainError("dip_positions: count must be >= 1");
  if (m0 < 0) throw DomainError("dip_positions: m0 must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = -params.delta_om() + (k - m0) * params.omega_M;
  return out;
}

}  // namespace optomech::transport
