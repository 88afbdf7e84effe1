#include <cmath>
#include <numbers>

#include "doctest.h"
#include "optomech/dynamics/hierarchy.hpp"
#include "optomech/dynamics/pulse.hpp"
#include "optomech/error.hpp"
#include "optomech/noon/probability.hpp"
#include "optomech/noon/two_arm.hpp"
#include "optomech/numerics/linalg.hpp"
#include "optomech/transport/spectral_density.hpp"
#include "optomech/transport/spectrum.hpp"

using namespace optomech;
using namespace optomech::noon;
using numerics::adjoint;

namespace {

// Operator as nonzero triples; the oracle space is 2 cavities x 2 mirrors.
struct Triples {
  struct E {
    std::size_t r, c;
    Complex v;
  };
  std::vector<E> e;

  ComplexMatrix left(const ComplexMatrix& x) const {  // A X
    ComplexMatrix out(x.rows(), x.cols());
    for (const auto& t : e)
      for (std::size_t j = 0; j < x.cols(); ++j) out(t.r, j) += t.v * x(t.c, j);
    return out;
  }
  ComplexMatrix right_adj(const ComplexMatrix& x) const {  // X A^dag
    ComplexMatrix out(x.rows(), x.cols());
    for (const auto& t : e)
      for (std::size_t i = 0; i < x.rows(); ++i) out(i, t.r) += x(i, t.c) * std::conj(t.v);
    return out;
  }
  ComplexMatrix left_adj(const ComplexMatrix& x) const {  // A^dag X
    ComplexMatrix out(x.rows(), x.cols());
    for (const auto& t : e)
      for (std::size_t j = 0; j < x.cols(); ++j) out(t.c, j) += std::conj(t.v) * x(t.r, j);
    return out;
  }
  ComplexMatrix right(const ComplexMatrix& x) const {  // X A
    ComplexMatrix out(x.rows(), x.cols());
    for (const auto& t : e)
      for (std::size_t i = 0; i < x.rows(); ++i) out(i, t.c) += x(i, t.r) * t.v;
    return out;
  }
  ComplexMatrix sandwich(const ComplexMatrix& x) const { return right_adj(left(x)); }  // A X A^dag
};

Triples from_dense(const ComplexMatrix& a) {
  Triples t;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != Complex{}) t.e.push_back({i, j, a(i, j)});
  return t;
}

ComplexMatrix lowering(std::size_t n) {
  ComplexMatrix a(n, n);
  for (std::size_t k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

struct OracleResult {
  ComplexMatrix plus, minus, unconditioned;
};

// Brute force: both cavities and both mirrors in one space, the photon in
// the symmetric channel mode e with coupling L_e = sqrt(k1)(c1 + c2)/sqrt2,
// port + is that mode and port - its orthogonal partner. Plain RK4.
OracleResult dense_two_arm(const NoonSetup& s, double t_end, double h) {
  const auto& p = s.params;
  const std::size_t m = s.trunc.phonon_dim;
  const std::size_t dim = 4 * m * m;
  const ComplexMatrix i2 = ComplexMatrix::identity(2), im = ComplexMatrix::identity(m);
  const ComplexMatrix c = lowering(2), b = lowering(m);
  // ordering: cavity1, cavity2, mirror1, mirror2
  const auto embed = [&](const ComplexMatrix& o1, const ComplexMatrix& o2, const ComplexMatrix& o3,
                         const ComplexMatrix& o4) { return numerics::kron(numerics::kron(numerics::kron(o1, o2), o3), o4); };
  const ComplexMatrix c1 = embed(c, i2, im, im), c2 = embed(i2, c, im, im);
  const ComplexMatrix b1 = embed(i2, i2, b, im), b2 = embed(i2, i2, im, b);

  ComplexMatrix h_sys(dim, dim);
  for (const auto& [cc, bb] : {std::pair{c1, b1}, std::pair{c2, b2}}) {
    const ComplexMatrix n_c = adjoint(cc) * cc;
    h_sys.axpy(-s.delta0, n_c);
    h_sys.axpy(p.omega_M, adjoint(bb) * bb);
    h_sys += p.g * (n_c * (bb + adjoint(bb)));
  }
  std::vector<ComplexMatrix> jumps;
  for (const auto& [cc, bb] : {std::pair{c1, b1}, std::pair{c2, b2}}) {
    jumps.push_back(std::sqrt(p.kappa1 + p.kappa0) * cc);
    if (p.gamma_M > 0) jumps.push_back(std::sqrt(p.gamma_M * (p.n_th + 1)) * bb);
    if (p.gamma_M * p.n_th > 0) jumps.push_back(std::sqrt(p.gamma_M * p.n_th) * adjoint(bb));
  }
  ComplexMatrix heff = h_sys;
  for (const auto& j : jumps) heff.axpy(Complex(0, -0.5), adjoint(j) * j);
  const Triples heff_t = from_dense(heff);
  std::vector<Triples> jt;
  for (const auto& j : jumps) jt.push_back(from_dense(j));
  const double r2 = 1.0 / std::numbers::sqrt2, sk = std::sqrt(p.kappa1);
  const Triples le = from_dense(sk * r2 * (c1 + c2));
  const Triples lp = from_dense(sk * r2 * (c1 - c2));

  const auto lind = [&](const ComplexMatrix& x) {
    ComplexMatrix out = heff_t.left(x) - heff_t.right_adj(x);  // -i(Heff X - X Heff^dag) up to factor
    out *= Complex(0, -1);
    for (const auto& j : jt) out += j.sandwich(x);
    return out;
  };
  const auto comm_ld = [&](const ComplexMatrix& x) {  // [X, L_e^dag]
    return le.right_adj(x) - le.left_adj(x);
  };
  const dynamics::PulseShape pulse(s.width);
  using State = std::array<ComplexMatrix, 5>;  // r00, r10, r11, Z+, Z-
  const auto rhs = [&](double t, const State& y) {
    const double f = pulse(t);
    const ComplexMatrix r01 = adjoint(y[1]);
    State d;
    d[0] = lind(y[0]);
    d[1] = lind(y[1]) + f * comm_ld(y[0]);
    // [r01, L^dag] + [L, r10]
    d[2] = lind(y[2]) + f * (comm_ld(r01) + le.left(y[1]) - le.right(y[1]));
    d[3] = lind(y[3]) + le.sandwich(y[2]);
    d[3].axpy(f * f, y[0]);
    const ComplexMatrix mix = le.left(y[1]);
    d[3] += f * (mix + adjoint(mix));
    d[4] = lind(y[4]) + lp.sandwich(y[2]);
    return d;
  };
  State y;
  for (auto& x : y) x = ComplexMatrix(dim, dim);
  y[0](0, 0) = 1.0;
  y[2](0, 0) = 1.0;
  const int steps = static_cast<int>(std::ceil(t_end / h));
  const double hh = t_end / steps;
  const auto comb = [](const State& a, double w, const State& k) {
    State o;
    for (std::size_t i = 0; i < 5; ++i) o[i] = a[i] + w * k[i];
    return o;
  };
  for (int n = 0; n < steps; ++n) {
    const double t = n * hh;
    const auto k1 = rhs(t, y);
    const auto k2 = rhs(t + hh / 2, comb(y, hh / 2, k1));
    const auto k3 = rhs(t + hh / 2, comb(y, hh / 2, k2));
    const auto k4 = rhs(t + hh, comb(y, hh, k3));
    for (std::size_t i = 0; i < 5; ++i) {
      y[i].axpy(hh / 6, k1[i]);
      y[i].axpy(hh / 3, k2[i]);
      y[i].axpy(hh / 3, k3[i]);
      y[i].axpy(hh / 6, k4[i]);
    }
  }
  // partial trace over both cavities: blocks at cavity index (n1 n2) = 0..3
  const std::size_t mm = m * m;
  const auto mech = [&](const ComplexMatrix& x) {
    ComplexMatrix out(mm, mm);
    for (std::size_t s2 = 0; s2 < 4; ++s2)
      for (std::size_t i = 0; i < mm; ++i)
        for (std::size_t j = 0; j < mm; ++j) out(i, j) += x(s2 * mm + i, s2 * mm + j);
    return out;
  };
  return {mech(y[3]), mech(y[4]), mech(y[2])};
}

model::SystemParams arm(double g, double kappa1) {
  model::SystemParams p;
  p.g = g;
  p.kappa1 = kappa1;
  return p;
}

}  // namespace

TEST_CASE("detuning rule") {
  const auto p1 = arm(0.7, 0.6);
  CHECK(detuning_for_target(1, p1, 0.2) == doctest::Approx(-0.49));
  const auto p5 = arm(1.4, 0.5);
  CHECK(detuning_for_target(5, p5, 0.2) == doctest::Approx(-1.96 + 1.0));
  // N = 2 by brute force over k
  const auto p2 = arm(1.0, 0.5);
  double best = -1.0, best_delta = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double delta0 = -1.0 + k;
    const double v = transport::sideband_probability(p2, transport::SpectralDensity::gaussian(delta0, 0.2), 0, 2,
                                                     model::Truncation{40});
    if (v > best) {
      best = v;
      best_delta = delta0;
    }
  }
  CHECK(detuning_for_target(2, p2, 0.2) == doctest::Approx(best_delta));
  CHECK_THROWS_AS(detuning_for_target(0, p2, 0.2), DomainError);
}

TEST_CASE("NOON probabilities") {
  const auto s1 = make_setup(1, arm(0.7, 0.6), 0.2);
  CHECK(s1.trunc.phonon_dim == 11);
  CHECK(noon_probability(s1) == doctest::Approx(0.64).epsilon(0.03 / 0.64));
  const auto s5 = make_setup(5, arm(1.4, 0.5), 0.2);
  CHECK(std::abs(noon_probability(s5) - 0.15) < 0.02);
  for (int n = 1; n <= 3; ++n) CHECK(noon_probability(make_setup(n, arm(0.0, 0.6), 0.2, -0.1)) == 0.0);
}

TEST_CASE("probability heatmap") {
  const auto map = probability_heatmap(1, {0.0, 1.0, 11}, {0.2, 1.0, 9}, 0.2, {}, 0);
  REQUIRE(map.values.size() == 99);
  for (std::size_t k = 0; k < 9; ++k) CHECK(map.at(0, k) == 0.0);
  // direct evaluation of one cell
  auto p = arm(map.g_values[7], map.kappa_values[4]);
  CHECK(map.at(7, 4) == noon_probability(make_setup(1, p, 0.2, -p.delta_om())));
  CHECK(map.g_values[map.argmax_g] == doctest::Approx(0.7));
  CHECK(std::abs(map.kappa_values[map.argmax_kappa] - 0.6) < 0.1 + 1e-9);
  for (double v : map.values) CHECK(v <= map.max());
  CHECK_THROWS_AS(probability_heatmap(1, {0.0, 2.5, 3}, {0.2, 1.0, 3}, 0.2), DomainError);
  CHECK_THROWS_AS(probability_heatmap(1, {0.0, 1.0, 3}, {0.0, 1.0, 3}, 0.2), DomainError);
}

TEST_CASE("two-arm run matches a brute-force two-cavity hierarchy") {
  auto p = arm(0.5, 1.0);
  p.kappa0 = 0.1;
  p.gamma_M = 0.03;
  p.n_th = 0.4;
  auto s = make_setup(1, p, 1.0, -p.delta_om() + 0.2, 4);
  TwoArmOptions opt;
  opt.t_end = 20.0;
  const auto fast = simulate_two_arm(s, opt);
  const auto oracle = dense_two_arm(s, 20.0, 0.02);
  // detection records are kept block-diagonal in total phonon number
  const std::size_t m = s.trunc.phonon_dim;
  double worst = 0.0, off_shell = 0.0;
  for (std::size_t i = 0; i < m * m; ++i)
    for (std::size_t j = 0; j < m * m; ++j) {
      const bool same = i / m + i % m == j / m + j % m;
      const double e = std::max(std::abs(fast.detected_plus(i, j) - oracle.plus(i, j)),
                                std::abs(fast.detected_minus(i, j) - oracle.minus(i, j)));
      if (same) worst = std::max(worst, e);
      else off_shell = std::max(off_shell, std::abs(fast.detected_plus(i, j)));
    }
  CHECK(worst < 1e-7);
  CHECK(off_shell == 0.0);
  CHECK(numerics::max_abs_diff(fast.unconditioned, oracle.unconditioned) < 1e-7);
}

TEST_CASE("ideal arms herald the NOON state") {
  for (int n : {1, 2, 3}) {
    const double g = n == 1 ? 0.7 : 1.0;
    const auto s = make_setup(n, arm(g, 0.6), 0.3);
    const auto run = simulate_two_arm(s);
    CHECK(run.emitted == doctest::Approx(1.0).epsilon(1e-6));
    for (Port port : {Port::plus, Port::minus}) {
      const auto cond = conditional_noon_state(run, n, port);
      const double f = numerics::uhlmann_fidelity(cond.state, noon_target(n, s.trunc.phonon_dim, port));
      CHECK(f > 1.0 - 1e-6);
      CHECK(cond.p_port == doctest::Approx(0.5 * cond.p_cond).epsilon(1e-6));
    }
    const auto cond = conditional_noon_state(run, n);
    CHECK(std::abs(cond.p_cond - noon_probability(s)) < 0.01);

    // one photon excites at most one arm
    const std::size_t m = s.trunc.phonon_dim;
    double both = 0.0;
    for (std::size_t a = 1; a < m; ++a)
      for (std::size_t b = 1; b < m; ++b) both += run.unconditioned(a * m + b, a * m + b).real();
    CHECK(both < 1e-10);

    // swap symmetry
    double asym = 0.0;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c)
          for (std::size_t d = 0; d < m; ++d)
            asym = std::max(asym, std::abs(run.unconditioned(a * m + b, c * m + d) -
                                           run.unconditioned(b * m + a, d * m + c)));
    CHECK(asym < 1e-8);
  }
}

TEST_CASE("no coupling to the waveguide: nothing happens") {
  auto p = arm(0.7, 0.0);
  const auto s = make_setup(1, p, 0.5, -0.49);
  TwoArmOptions opt;
  opt.t_end = 40.0;
  const auto run = simulate_two_arm(s, opt);
  CHECK(run.emitted == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(run.unconditioned(0, 0).real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(conditional_noon_state(run, 1), DomainError);
}

TEST_CASE("fidelity degrades with heating") {
  const auto s = make_setup(1, arm(0.7, 0.6), 0.3);
  double previous = 1.0;
  for (double n_th : {0.0, 1.0, 5.0, 20.0}) {
    const auto r = noon_fidelity(s, {1e-4, n_th});
    CHECK(r.fidelity <= previous + 1e-9);
    CHECK(r.n_th == n_th);
    previous = r.fidelity;
  }
  CHECK(previous < 0.95);
  double prev_gamma = 1.0;
  for (double gamma : {1e-5, 1e-4, 1e-3}) {
    const auto r = noon_fidelity(s, {gamma, 5.0});
    CHECK(r.fidelity <= prev_gamma + 1e-9);
    prev_gamma = r.fidelity;
  }
  // thermal start is worse than a pre-cooled start
  TwoArmOptions hot;
  hot.thermal_start = true;
  CHECK(noon_fidelity(s, {1e-4, 1.0}, hot).fidelity < noon_fidelity(s, {1e-4, 1.0}).fidelity);
  CHECK_THROWS_AS(noon_fidelity(make_setup(1, arm(0.7, 0.6), 0.3, std::nullopt, 5), {}), DomainError);
}

TEST_CASE("thermal occupation conventions") {
  const auto c = thermal_conventions(1e8, 0.2);
  CHECK(c[0].n_th == doctest::Approx(41.175237912078394).epsilon(1e-9));
  CHECK(c[1].n_th == doctest::Approx(261.34099651359156).epsilon(1e-9));
}
