// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,3] [--allow-fail 4]
//
// Exit status is 0 when every failing criterion is listed in --allow-fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optomech/cli/app.hpp"
#include "optomech/cli/commands.hpp"
#include "optomech/model/operators.hpp"
#include "optomech/noon/probability.hpp"
#include "optomech/noon/two_arm.hpp"
#include "optomech/numerics/linalg.hpp"
#include "optomech/transport/spectrum.hpp"
#include "optomech/transport/transmission.hpp"

using namespace optomech;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void note(Verdict& v, bool ok, const std::string& what) {
  v.pass = v.pass && ok;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += what + (ok ? "" : " [x]");
}

model::SystemParams cavity(double g, double kappa1, double gamma_M = 0.0, double n_th = 0.0) {
  model::SystemParams p;
  p.g = g;
  p.kappa1 = kappa1;
  p.gamma_M = gamma_M;
  p.n_th = n_th;
  return p;
}

// --- 1 -------------------------------------------------------------------
Verdict flux_conservation() {
  Clock clock;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> gs(0.0, 2.0), ks(0.05, 1.0), ds(-3.0, 3.0);
  std::uniform_int_distribution<int> ms(0, 2);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto p = cavity(gs(rng), ks(rng));
    const double delta = ds(rng);
    const int m0 = ms(rng);
    const auto set = transport::transmission_amplitudes(
        p, delta, m0, model::default_truncation(p, static_cast<std::size_t>(m0)));
    worst = std::max(worst, std::abs(set.flux() - 1.0));
  }
  Verdict v;
  note(v, worst < 1e-6, "max |sum T_m - 1| = " + fmt("%.2e", worst) + " over 100 sets");
  note(v, clock.seconds() < 60.0, fmt("%.2f s", clock.seconds()));
  return v;
}

// --- 2 -------------------------------------------------------------------
Verdict franck_condon_oracle() {
  Clock clock;
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double beta = -2.5 + 0.25 * i;
    const auto d = model::displacement_matrix(beta, model::Truncation{90});
    for (int m = 0; m <= 20; ++m)
      for (int n = 0; n <= 20; ++n)
        worst = std::max(worst, std::abs(d.matrix(m, n) - model::franck_condon(m, n, beta)));
  }
  Verdict v;
  note(v, worst < 1e-9, "max error = " + fmt("%.2e", worst) + " (m,n <= 20, |beta| <= 2.5)");
  note(v, clock.seconds() < 10.0, fmt("%.2f s", clock.seconds()));
  return v;
}

// --- shared master-equation spectra, g = 0.6, kappa1 = 0.2, d = 0.2 ---------
cli::RunConfig thermal_run(double n_th) {
  cli::RunConfig c;
  c.command = "spectrum";
  c.g = 0.6;
  c.kappa1 = 0.2;
  c.gamma_M = 1e-5;
  c.n_th = n_th;
  c.d = 0.2;
  c.m0 = 0;
  return c;
}

struct MeRun {
  nlohmann::ordered_json meta;
  double seconds = 0.0;
};

const MeRun& me_spectrum(double n_th) {
  static std::vector<std::pair<double, MeRun>> cache;
  for (const auto& [n, run] : cache)
    if (n == n_th) return run;
  auto cfg = thermal_run(n_th);
  cfg.route = "me";
  Clock clock;
  MeRun run{cli::cmd_spectrum(cfg).meta, 0.0};
  run.seconds = clock.seconds();
  cache.emplace_back(n_th, std::move(run));
  return cache.back().second;
}

// --- 3 -------------------------------------------------------------------
Verdict cross_route() {
  const auto& me = me_spectrum(0.0);
  const auto& cmp = me.meta.at("analytic_comparison");
  const double l1 = cmp.at("normalized_l1").get<double>();
  const double dp = cmp.at("max_population_difference").get<double>();
  Verdict v;
  note(v, l1 < 0.05, "normalized L1 = " + fmt("%.2e", l1));
  note(v, dp < 0.01, "max |P_m(ME) - P_m(scattering)| = " + fmt("%.2e", dp));
  note(v, me.seconds < 600.0, fmt("%.1f s", me.seconds));
  return v;
}

// --- 4 -------------------------------------------------------------------
Verdict spectrum_features() {
  Verdict v;
  const double step = transport::GridSpec{}.step;

  // dip minima of the transmitted spectrum next to -Delta_om + k omega_M
  double worst_offset = 0.0;
  for (double g : {0.4, 0.6, 1.0}) {
    const auto p = cavity(g, 0.2);
    const auto input = transport::SpectralDensity::gaussian(-p.delta_om(), 0.2);
    const auto s = transport::transmitted_spectrum(p, input, 0, {}, model::default_truncation(p));
    const double peak = *std::max_element(s.values.begin(), s.values.end());
    for (int k = -20; k <= 20; ++k) {
      const double x = -p.delta_om() + k;
      std::size_t best = s.grid.size();
      double shoulder = 0.0;
      for (std::size_t i = 0; i < s.grid.size(); ++i) {
        if (std::abs(s.grid[i] - x) > 0.05) continue;
        shoulder = std::max(shoulder, s.values[i]);
        if (best == s.grid.size() || s.values[i] < s.values[best]) best = i;
      }
      if (best == s.grid.size() || shoulder < 1e-3 * peak) continue;  // no visible feature here
      if (best == 0 || best + 1 == s.grid.size()) continue;
      if (!(s.values[best] < s.values[best - 1] && s.values[best] <= s.values[best + 1])) continue;
      const double off = s.grid[best] - x;
      if (std::abs(off) > std::abs(worst_offset)) worst_offset = off;
    }
  }
  note(v, std::abs(worst_offset) <= step * (1 + 1e-9),
       "worst dip offset " + fmt("%+.4f", worst_offset) + " vs grid step " + fmt("%.4f", step));

  // blue sideband only when the mirror starts excited
  double blue0 = 0.0, blue1 = 1.0;
  for (double g : {0.4, 0.6, 1.0}) {
    for (int m0 : {0, 1}) {
      auto cfg = thermal_run(0.0);
      cfg.gamma_M = 0.0;
      cfg.g = g;
      cfg.m0 = m0;
      const double w = cli::cmd_spectrum(cfg).meta.at("features").at("blue_sideband_weight").get<double>();
      if (m0 == 0) blue0 = std::max(blue0, w);
      else blue1 = std::min(blue1, w);
    }
  }
  note(v, blue1 > 0.01 && blue0 < 1e-3,
       "blue weight m0=1 >= " + fmt("%.3f", blue1) + ", m0=0 <= " + fmt("%.1e", blue0));

  std::vector<int> counts;
  for (double g : {0.4, 0.6, 1.0}) {
    const auto p = cavity(g, 0.2);
    const auto probs = transport::sideband_probabilities(
        p, transport::SpectralDensity::gaussian(-p.delta_om(), 0.2), 0, model::default_truncation(p));
    counts.push_back(static_cast<int>(
        std::count_if(probs.values.begin(), probs.values.end(), [](double x) { return x > 0.01; })));
  }
  note(v, std::is_sorted(counts.begin(), counts.end()),
       "sidebands > 1%: " + std::to_string(counts[0]) + ", " + std::to_string(counts[1]) + ", " +
           std::to_string(counts[2]) + " for g = 0.4, 0.6, 1.0");
  return v;
}

// --- 5 -------------------------------------------------------------------
Verdict thermal_trends() {
  std::vector<double> blue, depth;
  for (double n : {0.0, 1.0, 3.0}) {
    const auto& f = me_spectrum(n).meta.at("features");
    blue.push_back(f.at("blue_sideband_weight").get<double>());
    depth.push_back(f.at("dip_depth").get<double>());
  }
  Verdict v;
  note(v, blue[0] < blue[1] && blue[1] < blue[2],
       "blue weight " + fmt("%.2e", blue[0]) + " < " + fmt("%.2e", blue[1]) + " < " + fmt("%.2e", blue[2]));
  note(v, depth[0] > depth[1] && depth[1] > depth[2],
       "dip depth " + fmt("%.6f", depth[0]) + " > " + fmt("%.6f", depth[1]) + " > " + fmt("%.6f", depth[2]));
  return v;
}

// --- 6 -------------------------------------------------------------------
Verdict noon_probabilities() {
  Verdict v;
  const auto p1 = cavity(0.7, 0.6);
  const double P1 = noon::noon_probability(noon::make_setup(1, p1, 0.2, -p1.delta_om()));
  note(v, std::abs(P1 - 0.64) <= 0.03, "P(1) = " + fmt("%.4f", P1));
  const auto p5 = cavity(1.4, 0.5);
  const double P5 = noon::noon_probability(noon::make_setup(5, p5, 0.2, -p5.delta_om() + 1.0));
  note(v, std::abs(P5 - 0.15) <= 0.02, "P(5) = " + fmt("%.4f", P5));

  // argmax on the 0.05-step grid; kappa1 is capped at 1.2, so that grid is 40 x 24
  const noon::Range g{0.05, 2.0, 40}, k{0.05, 1.2, 24};
  const auto map = noon::probability_heatmap(1, g, k, 0.2, {}, std::nullopt);
  const double ag = map.g_values[map.argmax_g], ak = map.kappa_values[map.argmax_kappa];
  note(v, std::abs(ag - 0.7) <= 0.05 + 1e-9 && std::abs(ak - 0.6) <= 0.05 + 1e-9,
       "argmax on the 0.05 grid at (" + fmt("%.2f", ag) + ", " + fmt("%.2f", ak) + ")");

  Clock clock;
  const noon::Range k40{0.03, 1.2, 40};
  noon::probability_heatmap(1, g, k40, 0.2, {}, std::nullopt);
  note(v, clock.seconds() < 300.0, "40x40 heatmap " + fmt("%.1f s", clock.seconds()));
  return v;
}

// --- 7 -------------------------------------------------------------------
Verdict ideal_noon() {
  Verdict v;
  double worst = 0.0;
  for (int n = 1; n <= 5; ++n) {
    const auto p = n == 1 ? cavity(0.7, 0.6) : n == 5 ? cavity(1.4, 0.5) : cavity(1.0, 0.5);
    const auto setup = noon::make_setup(n, p, 0.2, std::nullopt, static_cast<std::size_t>(n) + 10);
    const auto run = noon::simulate_two_arm(setup);
    for (auto port : {noon::Port::plus, noon::Port::minus}) {
      const auto cond = noon::conditional_noon_state(run, n, port);
      const auto target = noon::noon_target(n, run.phonon_dim, port);
      const double f = numerics::uhlmann_fidelity(cond.state, target);
      worst = std::max(worst, 1.0 - f);
    }
  }
  note(v, worst < 1e-6, "max 1 - F over N = 1..5, both ports = " + fmt("%.2e", worst));
  return v;
}

// --- 8 -------------------------------------------------------------------
Verdict noisy_fidelities() {
  Verdict v;
  const auto conventions = noon::thermal_conventions(1e8, 0.2);
  const double gamma = 1e3 / 1e8;

  const auto scan = [&](int n, const model::SystemParams& p, std::size_t m, double target, double tol) {
    const auto setup = noon::make_setup(n, p, 0.2, std::nullopt, m);
    std::string line = "F" + std::to_string(n) + ":";
    bool any = false;
    Clock clock;
    for (const auto& c : conventions) {
      const double f = noon::noon_fidelity(setup, {gamma, c.n_th}).fidelity;
      any = any || std::abs(f - target) <= tol;
      line += " " + fmt("%.4f", f) + " (n_th " + fmt("%.1f", c.n_th) + ")";
    }
    note(v, any, line);
    return clock.seconds();
  };
  scan(1, cavity(0.7, 0.6), 11, 0.94, 0.05);
  const double t5 = scan(5, cavity(1.4, 0.5), 15, 0.82, 0.07);
  note(v, t5 < 1800.0, "N=5 at M=15: " + fmt("%.1f s", t5));

  // monotone degradation, convention-free
  bool monotone = true;
  for (int n : {1, 5}) {
    const auto p = n == 1 ? cavity(0.7, 0.6) : cavity(1.4, 0.5);
    const auto setup = noon::make_setup(n, p, 0.2, std::nullopt, static_cast<std::size_t>(n) + 10);
    double last = 2.0;
    for (double n_th : {0.0, 1.0, 5.0, 20.0, 40.0}) {
      const double f = noon::noon_fidelity(setup, {gamma, n_th}).fidelity;
      monotone = monotone && f <= last + 1e-12;
      last = f;
    }
    last = 2.0;
    for (double g : {1e-5, 1e-4, 1e-3}) {
      const double f = noon::noon_fidelity(setup, {g, 1.0}).fidelity;
      monotone = monotone && f <= last + 1e-12;
      last = f;
    }
  }
  note(v, monotone, "F non-increasing in n_th {0,1,5,20,40} and gamma_M {1e-5..1e-3}, N = 1, 5");
  return v;
}

// --- 9 -------------------------------------------------------------------
std::string payload(std::vector<std::string> args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return out.str();
}

double csv_distance(const std::string& a, const std::string& b) {
  std::istringstream x(a), y(b);
  std::string la, lb;
  double worst = 0.0;
  std::getline(x, la);
  std::getline(y, lb);
  if (la != lb) return INFINITY;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(x, la)), gb = static_cast<bool>(std::getline(y, lb));
    if (ga != gb) return INFINITY;
    if (!ga) break;
    std::istringstream ca(la), cb(lb);
    std::string sa, sb;
    while (std::getline(ca, sa, ',')) {
      if (!std::getline(cb, sb, ',')) return INFINITY;
      worst = std::max(worst, std::abs(std::stod(sa) - std::stod(sb)));
    }
  }
  return worst;
}

Verdict determinism() {
  Verdict v;
  const std::vector<std::vector<std::string>> runs{
      {"transmission", "--g", "1.0", "--m0", "1"},
      {"spectrum", "--g", "0.6"},
      {"spectrum", "--route", "me", "--g", "0.6", "--kappa1", "0.6", "--d", "0.5", "--M", "12"},
      {"noon-sweep", "--N", "1"},
      {"fidelity", "--N", "2", "--g", "1.0", "--kappa1", "0.5", "--gamma_M", "1e-4", "--n_th", "2"}};
  bool identical = true;
  double spread = 0.0;
  for (const auto& base : runs) {
    auto one = base, four = base;
    one.insert(one.end(), {"--workers", "1"});
    four.insert(four.end(), {"--workers", "4"});
    int c1 = 0, c2 = 0, c3 = 0;
    const auto a = payload(one, c1), b = payload(one, c2), c = payload(four, c3);
    identical = identical && c1 == 0 && c2 == 0 && a == b && !a.empty();
    spread = std::max(spread, c3 == 0 ? csv_distance(a, c) : INFINITY);
  }
  note(v, identical, "single-worker reruns byte-identical (5 commands)");
  note(v, spread <= 1e-12, "1 vs 4 workers max difference " + fmt("%.1e", spread));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance run"};
  std::vector<int> only, allowed;
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  app.add_option("--allow-fail", allowed, "criteria whose failure does not fail the run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"flux conservation", flux_conservation},
      {"Franck-Condon oracle", franck_condon_oracle},
      {"analytic vs master-equation spectrum", cross_route},
      {"transmission spectrum features", spectrum_features},
      {"thermal trends", thermal_trends},
      {"NOON probabilities", noon_probabilities},
      {"ideal NOON exactness", ideal_noon},
      {"NOON fidelities", noisy_fidelities},
      {"determinism", determinism},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass && std::find(allowed.begin(), allowed.end(), id) == allowed.end()) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
