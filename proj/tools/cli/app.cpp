#include "optomech/cli/app.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "optomech/cli/commands.hpp"
#include "optomech/cli/config.hpp"
#include "optomech/error.hpp"

#ifndef OPTOMECH_VERSION
#define OPTOMECH_VERSION "unknown"
#endif

namespace optomech::cli {

namespace {

// Flat key=value files, or the JSON sidecar of an earlier run (its "config"
// object), so a result bundle can be fed straight back in.
class KeyValueOrJson : public CLI::ConfigBase {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    const std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream plain(text);
      return CLI::ConfigBase::from_config(plain);
    }
    const auto doc = nlohmann::json::parse(text);
    const auto& cfg = doc.contains("config") ? doc.at("config") : doc;
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : cfg.items()) {
      if (value.is_null()) continue;
      CLI::ConfigItem item;
      item.name = key;
      item.inputs.push_back(value.is_string() ? value.get<std::string>() : value.dump());
      items.push_back(std::move(item));
    }
    return items;
  }
};

struct Command {
  const char* name;
  const char* help;
  ResultBundle (*fn)(const RunConfig&);
};

constexpr Command kCommands[] = {
    {"transmission", "transmission amplitudes t_m over a carrier-detuning sweep", cmd_transmission},
    {"spectrum", "transmitted photon spectrum (--route analytic|me)", cmd_spectrum},
    {"noon-sweep", "NOON heralding probability over a (g, kappa1) grid", cmd_noon_sweep},
    {"fidelity", "heralded NOON-state fidelity with mechanical loss and heating", cmd_fidelity},
    {"selfcheck", "quick invariant suite", cmd_selfcheck},
};

std::string strip_csv(std::string out) {
  if (out.size() > 4 && out.compare(out.size() - 4, 4, ".csv") == 0) out.resize(out.size() - 4);
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-photon transport through an optomechanical cavity and heralded mechanical NOON states",
               "optomech"};
  app.config_formatter(std::make_shared<KeyValueOrJson>());
  app.set_config("--config", "", "key=value file, or a JSON sidecar from an earlier run");
  app.set_version_flag("--version", OPTOMECH_VERSION);
  app.require_subcommand(1);
  RunConfig cfg;
  register_options(app, cfg);
  for (const auto& c : kCommands) app.add_subcommand(c.name, c.help)->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return config_error;
  } catch (const nlohmann::json::exception& e) {
    err << "optomech: config: " << e.what() << "\n";
    return config_error;
  }

  const Command* chosen = nullptr;
  cfg.command = app.get_subcommands().front()->get_name();
  for (const auto& c : kCommands)
    if (cfg.command == c.name) chosen = &c;

  if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
  const auto start = std::chrono::steady_clock::now();
  ResultBundle bundle;
  try {
    bundle = chosen->fn(cfg);
  } catch (const DomainError& e) {
    err << "optomech " << cfg.command << ": " << e.what() << "\n";
    return config_error;
  } catch (const ConvergenceError& e) {
    err << "optomech " << cfg.command << ": not converged: " << e.what() << "\n";
    return not_converged;
  } catch (const std::exception& e) {
    err << "optomech " << cfg.command << ": " << e.what() << "\n";
    return 1;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (cfg.out.empty()) {
    out << bundle.table.csv();
  } else {
    const std::string stem = strip_csv(cfg.out);
    nlohmann::ordered_json meta;
    meta["tool"] = "optomech";
    meta["version"] = OPTOMECH_VERSION;
    meta["command"] = cfg.command;
    meta["config"] = cfg.to_json();
    meta["workers_used"] = omp_get_max_threads();
    meta["wall_time_s"] = wall;
    meta["csv"] = stem + ".csv";
    meta["rows"] = bundle.table.rows();
    for (const auto& [key, value] : bundle.meta.items()) meta[key] = value;

    std::ofstream csv(stem + ".csv", std::ios::binary);
    std::ofstream side(stem + ".json", std::ios::binary);
    if (!csv || !side) {
      err << "optomech: out: cannot write " << stem << ".csv / .json\n";
      return config_error;
    }
    csv << bundle.table.csv();
    side << meta.dump(2) << "\n";
  }
  if (!bundle.ok) {
    err << "optomech selfcheck: failed checks";
    for (const auto& f : bundle.meta["failures"]) err << " " << f.get<std::string>();
    err << "\n";
    return not_converged;
  }
  return success;
}

}  // namespace optomech::cli
