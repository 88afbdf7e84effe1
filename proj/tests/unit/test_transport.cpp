#include <cmath>
#include <random>

#include "doctest.h"
#include "optomech/error.hpp"
#include "optomech/model/operators.hpp"
#include "optomech/transport/spectral_density.hpp"
#include "optomech/transport/spectrum.hpp"
#include "optomech/transport/transmission.hpp"

using namespace optomech;
using namespace optomech::transport;
using model::SystemParams;
using model::Truncation;

namespace {

SystemParams make_params(double g, double kappa1, double kappa0 = 0.0) {
  SystemParams p;
  p.g = g;
  p.kappa1 = kappa1;
  p.kappa0 = kappa0;
  return p;
}

// Straight evaluation of the amplitude sum with overlaps taken from a large
// matrix exponential instead of the Laguerre closed form.
struct DirectOracle {
  SystemParams p;
  int m0;
  numerics::ComplexMatrix d;
  static constexpr int kDim = 160;
  static constexpr int kSum = 110;

  DirectOracle(const SystemParams& params, int m0_)
      : p(params), m0(m0_), d(model::displacement_matrix(params.beta(), Truncation{kDim}).matrix) {}

  Complex t(int m, double delta) const {
    Complex sum{};
    for (int k = 0; k < kSum; ++k) {
      const Complex den(delta - (k - m0) + p.delta_om(), 0.5 * (p.kappa1 + p.kappa0));
      sum += d(m0, k) * d(m, k) / den;
    }
    return (m == m0 ? 1.0 : 0.0) - Complex(0.0, p.kappa1) * sum;
  }
};

// Plain trapezoid on a fine grid; independent of the adaptive quadrature.
double trapezoid_probability(const SystemParams& p, const SpectralDensity& f, int m0, int m) {
  const DirectOracle oracle(p, m0);
  const auto [a, b] = f.support();
  const int n = 60000;
  const double h = (b - a) / n;
  double total = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = a + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    total += w * f.power(x) * std::norm(oracle.t(m, x));
  }
  return total * h;
}

}  // namespace

TEST_CASE("spectral density normalization") {
  const auto g = SpectralDensity::gaussian(-0.36, 0.2);
  CHECK(g.norm() == 1.0);
  // Riemann sum of the analytic Gaussian
  double sum = 0.0;
  for (int i = -20000; i <= 20000; ++i) sum += g.power(-0.36 + i * 1e-4);
  CHECK(sum * 1e-4 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.power(-0.36) == doctest::Approx(std::sqrt(2.0 / M_PI) / 0.2));
  CHECK(g.amplitude(-0.36) == doctest::Approx(std::pow(2.0 / (M_PI * 0.04), 0.25)));

  std::vector<double> x, amp;
  for (int i = 0; i <= 400; ++i) {
    x.push_back(-2.0 + i * 0.01);
    amp.push_back(g.amplitude(x.back()));
  }
  const auto tab = SpectralDensity::tabulated(x, amp);
  CHECK(tab.norm() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(tab.normalized().norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tab.center() == doctest::Approx(-0.36).epsilon(1e-6));
  CHECK(tab.width() == doctest::Approx(0.2).epsilon(1e-3));
  CHECK(tab.power(-0.355) == doctest::Approx(0.5 * (tab.power(-0.36) + tab.power(-0.35))));
  CHECK(tab.power(5.0) == 0.0);

  CHECK_THROWS_AS(SpectralDensity::gaussian(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(SpectralDensity::tabulated({0.0, 0.0}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(SpectralDensity::tabulated({0.0}, {1.0}), DomainError);
}

TEST_CASE("decoupled and uncoupled limits") {
  for (double delta : {-2.0, -0.3, 0.0, 0.7, 2.5}) {
    for (int m0 : {0, 1, 2}) {
      const auto set = transmission_amplitudes(make_params(0.0, 0.2), delta, m0, Truncation{16});
      const Complex expected = Complex(delta, -0.1) / Complex(delta, 0.1);
      for (std::size_t m = 0; m < set.amplitudes.size(); ++m) {
        if (static_cast<int>(m) == m0) {
          CHECK(std::abs(set.amplitudes[m] - expected) < 1e-14);
          CHECK(std::abs(set.amplitudes[m]) == doctest::Approx(1.0));
        } else {
          CHECK(set.amplitudes[m] == Complex{});
        }
      }
      const auto free = transmission_amplitudes(make_params(0.8, 0.0), delta, m0, Truncation{16});
      for (std::size_t m = 0; m < free.amplitudes.size(); ++m)
        CHECK(std::abs(free.amplitudes[m] - (static_cast<int>(m) == m0 ? 1.0 : 0.0)) < 1e-15);
    }
  }
}

TEST_CASE("amplitudes agree with the direct-sum oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> gs(0.0, 2.0), ks(0.05, 1.0), ds(-3.0, 3.0);
  double worst = 0.0;
  for (int rep = 0; rep < 12; ++rep) {
    const auto p = make_params(gs(rng), ks(rng), rep % 3 == 0 ? 0.1 : 0.0);
    const int m0 = rep % 3;
    const double delta = ds(rng);
    const DirectOracle oracle(p, m0);
    const auto set = transmission_amplitudes(p, delta, m0, model::default_truncation(p));
    for (std::size_t m = 0; m < set.amplitudes.size(); ++m)
      worst = std::max(worst, std::abs(set.amplitudes[m] - oracle.t(static_cast<int>(m), delta)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("carrier transmission is deepest on the zero-phonon resonance") {
  const auto p = make_params(0.6, 0.2);
  const TransmissionModel model(p, 0, Truncation{16});
  const DirectOracle oracle(p, 0);
  const double at_resonance = std::norm(model.amplitude(0, -p.delta_om()));
  CHECK(at_resonance == doctest::Approx(std::norm(oracle.t(0, -p.delta_om()))).epsilon(1e-10));
  for (double r : model.resonances())
    if (r != -p.delta_om()) CHECK(std::norm(model.amplitude(0, r)) > at_resonance);
  // Off-resonant levels pull the true minimum slightly above the bare pole.
  double best = 1.0, where = 0.0;
  for (int i = -2000; i <= 2000; ++i) {
    const double delta = -p.delta_om() + i * 1e-4;
    const double v = std::norm(model.amplitude(0, delta));
    if (v < best) best = v, where = delta + p.delta_om();
  }
  CHECK(where == doctest::Approx(0.0092).epsilon(0.02));
}

TEST_CASE("flux conservation over random parameters") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> gs(0.0, 2.0), ks(0.05, 1.0), ds(-3.0, 3.0);
  std::uniform_int_distribution<int> m0s(0, 2);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto p = make_params(gs(rng), ks(rng));
    const int m0 = m0s(rng);
    const auto set = transmission_amplitudes(p, ds(rng), m0, model::default_truncation(p, 2));
    worst = std::max(worst, std::abs(set.flux() - 1.0));
    CHECK(set.mprime_residual < 1e-10);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("sign of beta does not change magnitudes") {
  for (double g : {0.3, 0.9, 1.7}) {
    const auto plus = make_params(g, 0.4);
    const auto minus = make_params(-g, 0.4);
    for (int m0 : {0, 2}) {
      const auto a = transmission_amplitudes(plus, -0.2, m0, Truncation{16});
      const auto b = transmission_amplitudes(minus, -0.2, m0, Truncation{16});
      REQUIRE(a.amplitudes.size() == b.amplitudes.size());
      for (std::size_t m = 0; m < a.amplitudes.size(); ++m)
        CHECK(std::abs(std::abs(a.amplitudes[m]) - std::abs(b.amplitudes[m])) < 1e-12);
    }
  }
}

TEST_CASE("intrinsic loss reduces transmitted flux monotonically") {
  double previous = 1.0;
  // below critical coupling (kappa0 < kappa1)
  for (double k0 : {0.01, 0.03, 0.06, 0.1, 0.15}) {
    const auto set = transmission_amplitudes(make_params(0.6, 0.2, k0), -0.36, 0, Truncation{16});
    CHECK(set.flux() < previous);
    previous = set.flux();
  }
  // Empty lossy cavity: |(D - i(k1-k0)/2) / (D + i(k1+k0)/2)|^2
  const auto set = transmission_amplitudes(make_params(0.0, 0.2, 0.2), 0.0, 0, Truncation{16});
  CHECK(set.flux() < 1e-20);
  // past critical coupling the on-resonance transmission rises again
  const auto over = transmission_amplitudes(make_params(0.0, 0.2, 0.6), 0.0, 0, Truncation{16});
  CHECK(over.flux() == doctest::Approx(0.25));
}

TEST_CASE("dip positions") {
  const auto zero = dip_positions(make_params(0.0, 0.2), 1, 3);
  CHECK(zero == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(dip_positions(make_params(0.6, 0.2), 0, 1)[0] == doctest::Approx(-0.36));
  CHECK(dip_positions(make_params(1.4, 0.2), 0, 2)[0] == doctest::Approx(-1.96));
  CHECK_THROWS_AS(dip_positions(make_params(0.6, 0.2), 0, 0), DomainError);
}

TEST_CASE("sideband probabilities") {
  const auto p0 = make_params(0.0, 0.3);
  CHECK(sideband_probability(p0, SpectralDensity::gaussian(0.1, 0.2), 1, 1, Truncation{16}) ==
        doctest::Approx(1.0).epsilon(1e-8));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> gs(0.0, 2.0), ks(0.05, 1.0), ds(-3.0, 3.0), ws(0.05, 0.5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto p = make_params(gs(rng), ks(rng));
    const auto f = SpectralDensity::gaussian(ds(rng), ws(rng));
    const auto probs = sideband_probabilities(p, f, rep % 3, model::default_truncation(p, 2));
    CHECK(std::abs(probs.total() - 1.0) < 1e-5);
  }

  const auto p = make_params(0.7, 0.6);
  const auto f = SpectralDensity::gaussian(-p.delta_om(), 0.2);
  const double p1 = sideband_probability(p, f, 0, 1, Truncation{16});
  CHECK(p1 == doctest::Approx(trapezoid_probability(p, f, 0, 1)).epsilon(1e-6));
  CHECK(std::abs(p1 - 0.64) < 0.03);
  const auto all = sideband_probabilities(p, f, 0, Truncation{16});
  CHECK(all.values[1] == doctest::Approx(p1).epsilon(1e-6));
}

TEST_CASE("transmitted spectrum") {
  SUBCASE("g = 0 passes the input unchanged") {
    const auto f = SpectralDensity::gaussian(0.3, 0.2);
    const auto s = transmitted_spectrum(make_params(0.0, 0.2), f, 0, {}, Truncation{16});
    for (std::size_t i = 0; i < s.grid.size(); ++i)
      CHECK(s.values[i] == doctest::Approx(f.power(s.grid[i])).epsilon(1e-12));
  }
  for (double g : {0.4, 0.6, 1.0}) {
    CAPTURE(g);
    const auto p = make_params(g, 0.2);
    const double d0 = -p.delta_om();
    const auto f = SpectralDensity::gaussian(d0, 0.2);
    const auto s = transmitted_spectrum(p, f, 0, {}, Truncation{16});
    CHECK(s.step == doctest::Approx(1.0 / 400));
    CHECK(s.integral() == doctest::Approx(1.0).epsilon(2e-3));
    for (double v : s.values) CHECK(v >= 0.0);
    // no blue sideband for a ground-state oscillator
    CHECK(s.integral(d0 + 0.75, d0 + 1.25) < 1e-3 * s.integral());
    // local minima inside the carrier window sit on the dips, up to the
    // dispersive pull of the off-resonant levels (about 0.01 omega_M here)
    const auto dips = dip_positions(p, 0, 4);
    int minima = 0;
    for (std::size_t i = 1; i + 1 < s.grid.size(); ++i) {
      if (std::abs(s.grid[i] - d0) > 0.4) continue;
      if (s.values[i] < s.values[i - 1] && s.values[i] < s.values[i + 1]) {
        ++minima;
        double nearest = 1e9;
        for (double x : dips) nearest = std::min(nearest, std::abs(x - s.grid[i]));
        CHECK(nearest <= p.kappa1 / 8.0);
      }
    }
    CHECK(minima >= 1);
  }
  SUBCASE("an excited oscillator produces a blue sideband") {
    const auto p = make_params(0.6, 0.2);
    const double d0 = -p.delta_om();
    const auto s = transmitted_spectrum(p, SpectralDensity::gaussian(d0, 0.2), 1, {}, Truncation{16});
    CHECK(s.integral(d0 + 0.75, d0 + 1.25) > 0.01 * s.integral());
  }
}

TEST_CASE("tabulated input is linear in the sampled power") {
  const auto p = make_params(0.6, 0.3);
  const auto gauss = SpectralDensity::gaussian(-0.36, 0.2);
  std::vector<double> x, amp;
  for (int i = 0; i <= 30; ++i) {
    x.push_back(-0.96 + i * 0.04);
    amp.push_back(gauss.amplitude(x.back()));
  }
  const auto full = SpectralDensity::tabulated(x, amp).normalized();
  GridSpec grid;
  grid.lo = -3.0;
  grid.hi = 1.0;
  grid.step = 0.01;
  const auto s = transmitted_spectrum(p, full, 0, grid, Truncation{16});

  std::vector<double> summed(s.values.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::vector<double> hat(x.size(), 0.0);
    hat[k] = full.amplitude(x[k]);
    if (hat[k] == 0.0) continue;
    const auto part = SpectralDensity::tabulated(x, hat);
    const double weight = part.norm();
    const auto ps = transmitted_spectrum(p, part.normalized(), 0, grid, Truncation{16});
    for (std::size_t i = 0; i < summed.size(); ++i) summed[i] += weight * ps.values[i];
  }
  double scale = 0.0;
  for (double v : s.values) scale = std::max(scale, v);
  for (std::size_t i = 0; i < summed.size(); ++i) CHECK(std::abs(summed[i] - s.values[i]) < 1e-8 * scale);

  // quadrature over a tabulated Gaussian tracks the analytic Gaussian
  const auto pt = sideband_probabilities(p, full, 0, Truncation{16});
  const auto pg = sideband_probabilities(p, gauss, 0, Truncation{16});
  CHECK(std::abs(pt.total() - 1.0) < 1e-5);
  CHECK(std::abs(pt.values[1] - pg.values[1]) < 5e-3);
}
