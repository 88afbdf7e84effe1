#include "optomech/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>

#include "optomech/dynamics/correlation.hpp"
#include "optomech/dynamics/hierarchy.hpp"
#include "optomech/error.hpp"
#include "optomech/model/operators.hpp"
#include "optomech/noon/probability.hpp"
#include "optomech/noon/two_arm.hpp"
#include "optomech/numerics/complex_matrix.hpp"
#include "optomech/transport/spectrum.hpp"
#include "optomech/transport/transmission.hpp"
#include "optomech/parallel.hpp"

namespace optomech::cli {

using json = nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_.size()) throw Error("Table: row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    const Cell& c = cells[i];
    if (c.is_text) body_ += c.text;
    else if (c.is_integer) body_ += std::to_string(c.integer);
    else body_ += format_number(c.number);
  }
  body_ += '\n';
  ++rows_;
}

std::string Table::csv() const {
  std::string head;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) head += ',';
    head += columns_[i];
  }
  return head + '\n' + body_;
}

namespace {

model::Truncation pick_truncation(const RunConfig& cfg, model::Truncation fallback) {
  return cfg.M ? model::Truncation{cfg.M} : fallback;
}

// Levels needed so a thermal state at n_th loses < 1e-6 of its weight.
std::size_t thermal_levels(double n_th) {
  if (n_th <= 0.0) return 1;
  const double q = n_th / (1.0 + n_th);
  return static_cast<std::size_t>(std::ceil(std::log(1e-6) / std::log(q))) + 1;
}

double interpolate(const transport::Spectrum& s, double x) {
  if (s.grid.empty() || x < s.grid.front() || x > s.grid.back()) return 0.0;
  const double u = (x - s.grid.front()) / s.step;
  const auto i = std::min(static_cast<std::size_t>(u), s.grid.size() - 2);
  const double t = u - static_cast<double>(i);
  return (1.0 - t) * s.values[i] + t * s.values[i + 1];
}

double trapezoid_l1(const transport::Spectrum& a, const transport::Spectrum& b) {
  double diff = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double w = (i == 0 || i + 1 == a.values.size()) ? 0.5 : 1.0;
    diff += w * std::abs(a.values[i] - b.values[i]);
  }
  return diff * a.step;
}

json spectrum_features(const transport::Spectrum& s, double delta0, double delta_om, double width) {
  json f;
  const double total = s.integral();
  f["integral"] = total;
  // photons that took a phonon from the mirror sit around delta0 + omega_M
  const double blue = delta0 + 0.5 < s.grid.back() ? s.integral(delta0 + 0.5, s.grid.back()) : 0.0;
  f["blue_sideband_weight"] = total > 0.0 ? blue / total : 0.0;
  const double dip = -delta_om;
  double shoulder = 0.0;
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    if (std::abs(s.grid[i] - dip) <= width) shoulder = std::max(shoulder, s.values[i]);
  f["S_at_dip"] = interpolate(s, dip);
  f["dip_depth"] = shoulder - interpolate(s, dip);
  return f;
}

}  // namespace

ResultBundle cmd_transmission(const RunConfig& cfg) {
  cfg.validate();
  const auto p = cfg.params();
  const auto trunc = pick_truncation(cfg, model::default_truncation(p, static_cast<std::size_t>(cfg.m0)));
  const transport::TransmissionModel model(p, cfg.m0, trunc);

  const double base = -p.delta_om();
  const double lo = cfg.number_or_auto("delta_lo", cfg.delta_lo).value_or(base - cfg.m0 - 1.0);
  const double hi = cfg.number_or_auto("delta_hi", cfg.delta_hi).value_or(base + 5.0);
  const std::size_t n = cfg.delta_points;
  const noon::Range sweep{lo, hi, n};

  std::vector<transport::TransmissionSet> sets(n);
  std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (parallel_enabled())
  for (std::size_t i = 0; i < n; ++i) {
    try {
      sets[i] = model.amplitudes(sweep.at(i));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  ResultBundle b;
  b.table = Table({"delta0_over_wM", "m", "re_t", "im_t", "T_m", "sum_T"});
  double worst_flux = 0.0, worst_residual = 0.0;
  std::vector<double> elastic(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = sets[i];
    const double flux = s.flux();
    worst_residual = std::max(worst_residual, s.truncation_residual);
    if (p.kappa0 == 0.0) worst_flux = std::max(worst_flux, std::abs(flux - 1.0));
    elastic[i] = std::norm(s.amplitudes[static_cast<std::size_t>(cfg.m0)]);
    for (std::size_t m = 0; m < s.amplitudes.size(); ++m) {
      const auto t = s.amplitudes[m];
      b.table.add_row({s.delta0, m, t.real(), t.imag(), std::norm(t), flux});
    }
  }

  // local minima of the elastic channel next to each predicted dip
  std::vector<double> minima;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (elastic[i] < elastic[i - 1] && elastic[i] <= elastic[i + 1]) minima.push_back(sweep.at(i));
  json dips = json::array();
  for (double x : transport::dip_positions(p, cfg.m0, model.mprime_cutoff())) {
    if (x < lo || x > hi) continue;
    json d;
    d["predicted"] = x;
    if (!minima.empty()) {
      const double near = *std::min_element(minima.begin(), minima.end(), [&](double a, double c) {
        return std::abs(a - x) < std::abs(c - x);
      });
      d["nearest_minimum"] = near;
      d["offset"] = near - x;
    } else {
      d["nearest_minimum"] = nullptr;
    }
    dips.push_back(d);
  }

  b.meta["resolved"] = {{"delta_lo", lo}, {"delta_hi", hi}, {"delta_points", n},
                        {"delta_step", n > 1 ? (hi - lo) / static_cast<double>(n - 1) : 0.0},
                        {"M", trunc.phonon_dim}, {"output_dim", model.output_dim()}};
  b.meta["convergence"] = {{"mprime_cutoff", model.mprime_cutoff()},
                           {"mprime_residual", model.mprime_residual()},
                           {"max_truncation_residual", worst_residual},
                           {"max_flux_deviation", p.kappa0 == 0.0 ? json(worst_flux) : json(nullptr)}};
  b.meta["dips"] = dips;
  return b;
}

ResultBundle cmd_spectrum(const RunConfig& cfg) {
  cfg.validate();
  const auto p = cfg.params();
  const double delta0 = cfg.number_or_auto("delta0", cfg.delta0).value_or(-p.delta_om());
  const auto input = transport::SpectralDensity::gaussian(delta0, cfg.d);
  const transport::GridSpec grid{cfg.number_or_auto("grid_lo", cfg.grid_lo),
                                 cfg.number_or_auto("grid_hi", cfg.grid_hi), cfg.grid_step};
  const auto scattering_trunc = model::default_truncation(p, static_cast<std::size_t>(cfg.m0));

  ResultBundle b;
  b.table = Table({"dw_over_wM", "S"});
  transport::Spectrum spec;
  json report;
  if (cfg.route == "analytic") {
    const auto trunc = pick_truncation(cfg, scattering_trunc);
    spec = transport::transmitted_spectrum(p, input, cfg.m0, grid, trunc);
    const auto probs = transport::sideband_probabilities(p, input, cfg.m0, trunc);
    report["M"] = trunc.phonon_dim;
    report["sideband_probabilities"] = probs.values;
    report["probability_total"] = probs.total();
    report["quadrature_error"] = probs.error_estimate;
  } else {
    std::size_t m_auto = scattering_trunc.phonon_dim;
    if (cfg.thermal_start) m_auto = std::max(m_auto, thermal_levels(p.n_th) + 4);
    const auto trunc = pick_truncation(cfg, model::Truncation{m_auto});
    dynamics::HierarchyOptions opts;
    opts.m0 = cfg.m0;
    if (cfg.thermal_start) opts.initial_mechanics = model::thermal_state(trunc.phonon_dim, p.n_th);
    opts.sample_dt = cfg.sample_dt;
    opts.max_step = cfg.max_step;
    opts.trace_tolerance = cfg.trace_tol;
    const dynamics::PulseShape pulse(cfg.d);
    const auto traj = dynamics::evolve_hierarchy(p, delta0, pulse, trunc, opts);
    const auto pops = dynamics::final_sideband_populations(traj);
    const auto flux = dynamics::output_flux(traj);
    const auto corr = dynamics::correlation_grid(traj, trunc);
    spec = dynamics::spectrum_from_correlation(corr, delta0, grid, pops, cfg.m0, p.omega_M);

    report["M"] = trunc.phonon_dim;
    report["integrator_step"] = traj.step;
    report["sample_dt"] = traj.sample_dt;
    report["end_time"] = traj.samples.back().time;
    report["emitted_photons"] = flux.total;
    report["final_populations"] = pops;
    report["top_level_population"] = pops.back();

    // scattering reference on the same grid (ground-state mirror, no bath)
    const transport::GridSpec same{spec.grid.front(), spec.grid.back(), cfg.grid_step};
    const auto ref = transport::transmitted_spectrum(p, input, cfg.m0, same, scattering_trunc);
    json cmp;
    if (ref.values.size() == spec.values.size()) {
      cmp["normalized_l1"] = trapezoid_l1(spec, ref) / ref.integral();
    } else {
      cmp["normalized_l1"] = nullptr;
    }
    const auto probs = transport::sideband_probabilities(p, input, cfg.m0, scattering_trunc);
    double worst = 0.0;
    for (std::size_t m = 0; m < std::max(pops.size(), probs.values.size()); ++m) {
      const double a = m < pops.size() ? pops[m] : 0.0;
      const double c = m < probs.values.size() ? probs.values[m] : 0.0;
      worst = std::max(worst, std::abs(a - c));
    }
    cmp["max_population_difference"] = worst;
    cmp["note"] = "scattering route assumes the mirror starts in |m0> and ignores the bath";
    b.meta["analytic_comparison"] = cmp;
  }
  for (std::size_t i = 0; i < spec.grid.size(); ++i) b.table.add_row({spec.grid[i], spec.values[i]});

  b.meta["route"] = cfg.route;
  b.meta["resolved"] = {{"delta0", delta0},
                        {"grid_lo", spec.grid.front()},
                        {"grid_hi", spec.grid.back()},
                        {"grid_step", spec.step},
                        {"points", spec.grid.size()}};
  b.meta["convergence"] = report;
  b.meta["normalization"] = "S integrates to the transmitted photon number (1 without loss)";
  b.meta["features"] = spectrum_features(spec, delta0, p.delta_om(), cfg.d);
  return b;
}

ResultBundle cmd_noon_sweep(const RunConfig& cfg) {
  cfg.validate();
  const noon::Range g{cfg.g_lo, cfg.g_hi, cfg.g_points};
  const noon::Range k{cfg.kappa_lo, cfg.kappa_hi, cfg.kappa_points};
  std::optional<int> shift;
  if (cfg.shift != "auto") shift = std::stoi(cfg.shift);
  const auto map = noon::probability_heatmap(cfg.N, g, k, cfg.d, cfg.params(), shift);

  ResultBundle b;
  b.table = Table({"g_over_wM", "kappa1_over_wM", "P"});
  for (std::size_t i = 0; i < map.g_values.size(); ++i)
    for (std::size_t j = 0; j < map.kappa_values.size(); ++j)
      b.table.add_row({map.g_values[i], map.kappa_values[j], map.at(i, j)});
  b.meta["resolved"] = {{"N", cfg.N},
                        {"cells", map.values.size()},
                        {"detuning_rule", shift ? "-Delta_om + shift omega_M" : "best sideband per cell"}};
  b.meta["argmax"] = {{"g_over_wM", map.g_values[map.argmax_g]},
                      {"kappa1_over_wM", map.kappa_values[map.argmax_kappa]},
                      {"P", map.max()}};
  return b;
}

ResultBundle cmd_fidelity(const RunConfig& cfg) {
  cfg.validate();
  const auto p = cfg.params();
  std::optional<std::size_t> m;
  if (cfg.M) m = cfg.M;
  const auto setup = noon::make_setup(cfg.N, p, cfg.d, cfg.number_or_auto("delta0", cfg.delta0), m);
  noon::TwoArmOptions opts;
  opts.thermal_start = cfg.thermal_start;
  opts.sample_dt = cfg.sample_dt;
  opts.max_step = cfg.max_step;

  std::vector<std::pair<std::string, double>> baths;
  if (cfg.temperature_K) {
    for (const auto& c : noon::thermal_conventions(cfg.frequency_hz, *cfg.temperature_K))
      baths.emplace_back(c.name, c.n_th);
  } else {
    baths.emplace_back("n_th given", p.n_th);
  }

  ResultBundle b;
  b.table = Table({"N", "P", "p_cond", "F_N", "n_th_used"});
  json rows = json::array();
  for (const auto& [name, n_th] : baths) {
    const auto r = noon::noon_fidelity(setup, noon::Environment{p.gamma_M, n_th}, opts);
    b.table.add_row({cfg.N, r.probability, r.p_cond, r.fidelity, r.n_th});
    rows.push_back(name);
  }
  b.meta["rows"] = rows;
  b.meta["resolved"] = {{"delta0", setup.delta0}, {"M", setup.trunc.phonon_dim}};
  return b;
}

ResultBundle cmd_selfcheck(const RunConfig& cfg) {
  (void)cfg;
  ResultBundle b;
  b.table = Table({"check", "value", "tolerance", "pass"});
  json failures = json::array();
  const auto record = [&](const char* name, double value, double tol) {
    const bool pass = value < tol;
    b.table.add_row({name, value, tol, pass ? 1 : 0});
    if (!pass) {
      b.ok = false;
      failures.push_back(name);
    }
  };

  {  // sum_m |t_m|^2 = 1 without intrinsic loss
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> gs(0.0, 2.0), ks(0.05, 1.0), ds(-3.0, 3.0);
    std::uniform_int_distribution<int> ms(0, 2);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      model::SystemParams p;
      p.g = gs(rng);
      p.kappa1 = ks(rng);
      const double delta = ds(rng);
      const int m0 = ms(rng);
      const transport::TransmissionModel tm(p, m0, model::default_truncation(p, static_cast<std::size_t>(m0)));
      worst = std::max(worst, std::abs(tm.amplitudes(delta).flux() - 1.0));
    }
    record("flux_conservation", worst, 1e-6);
  }
  {  // closed-form overlaps against the matrix exponential
    double worst = 0.0;
    for (double beta : {-2.5, 0.3, 1.1, 2.5}) {
      const auto d = model::displacement_matrix(beta, model::Truncation{80});
      for (int m = 0; m <= 20; ++m)
        for (int n = 0; n <= 20; ++n)
          worst = std::max(worst, std::abs(d.matrix(m, n) - model::franck_condon(m, n, beta)));
    }
    record("franck_condon_oracle", worst, 1e-9);
  }
  {  // empty-cavity limit: all-pass phase
    model::SystemParams p;
    p.kappa1 = 0.3;
    const transport::TransmissionModel tm(p, 1, model::default_truncation(p, 1));
    double worst = 0.0;
    for (int i = -50; i <= 50; ++i) worst = std::max(worst, std::abs(std::norm(tm.amplitude(1, 0.05 * i)) - 1.0));
    record("g0_unit_transmission", worst, 1e-12);
  }
  {  // master equation reproduces the scattering sideband populations
    model::SystemParams p;
    p.g = 0.6;
    p.kappa1 = 0.6;
    const double delta0 = -p.delta_om();
    const auto trunc = model::default_truncation(p);
    const auto traj = dynamics::evolve_hierarchy(p, delta0, dynamics::PulseShape(0.3), trunc);
    const auto pops = dynamics::final_sideband_populations(traj);
    const auto probs = transport::sideband_probabilities(
        p, transport::SpectralDensity::gaussian(delta0, 0.3), 0, trunc);
    double worst = 0.0;
    for (std::size_t m = 0; m < std::min(pops.size(), probs.values.size()); ++m)
      worst = std::max(worst, std::abs(pops[m] - probs.values[m]));
    record("master_equation_vs_scattering", worst, 0.01);
  }
  {  // ideal two-arm heralding gives an exact NOON state
    model::SystemParams p;
    p.g = 0.7;
    p.kappa1 = 0.6;
    const auto setup = noon::make_setup(2, p, 0.3);
    const auto r = noon::noon_fidelity(setup, {});
    record("ideal_noon_infidelity", 1.0 - r.fidelity, 1e-6);
  }
  b.meta["failures"] = failures;
  return b;
}

}  // namespace optomech::cli
