// gpelab command-line front end.
//
//   gpelab <mode> --config <file> --out <dir> [--snapshots]
//                 [--sweep key=v1,v2,...] [--dts v1,v2,...]
//
// Modes: ode, pde, compare, sweep, converge.
// Exit codes: 0 success, 2 usage/config error, 3 numerical failure.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpelab/scenario.hpp"

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw gpelab::ConfigError("bad numeric list entry '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-packet dynamics in a time-dependent harmonic trap: "
               "reduced Ermakov system, invariant drift audit, and a "
               "split-step spectral cross-check"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool snapshots = false;
  std::string sweep_spec;
  std::string dts_spec;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "scenario config file")
        ->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_flag("--snapshots", snapshots, "also write field snapshots");
  };

  CLI::App* ode = app.add_subcommand("ode", "integrate the reduced system");
  CLI::App* pde = app.add_subcommand("pde", "propagate the full PDE");
  CLI::App* compare =
      app.add_subcommand("compare", "run both and compare moments");
  CLI::App* sweep = app.add_subcommand("sweep", "repeat ode over a value list");
  CLI::App* converge =
      app.add_subcommand("converge", "RK4 refinement study over --dts");
  for (CLI::App* sub : {ode, pde, compare, sweep, converge}) add_common(sub);
  sweep->add_option("--sweep", sweep_spec, "key=v1,v2,...")->required();
  converge->add_option("--dts", dts_spec, "v1,v2,...")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gpelab::kExitUsage;
  }

  gpelab::RunMode mode;
  mode.snapshots = snapshots;
  if (ode->parsed())
    mode.kind = gpelab::RunMode::Kind::Ode;
  else if (pde->parsed())
    mode.kind = gpelab::RunMode::Kind::Pde;
  else if (compare->parsed())
    mode.kind = gpelab::RunMode::Kind::Compare;
  else if (sweep->parsed())
    mode.kind = gpelab::RunMode::Kind::Sweep;
  else
    mode.kind = gpelab::RunMode::Kind::Converge;

  try {
    if (mode.kind == gpelab::RunMode::Kind::Sweep) {
      const auto eq = sweep_spec.find('=');
      if (eq == std::string::npos)
        throw gpelab::ConfigError("--sweep expects key=v1,v2,...");
      mode.sweep_key = sweep_spec.substr(0, eq);
      mode.sweep_values = parse_list(sweep_spec.substr(eq + 1));
    }
    if (mode.kind == gpelab::RunMode::Kind::Converge)
      mode.dts = parse_list(dts_spec);

    const gpelab::ScenarioConfig config =
        gpelab::parse_config_file(config_path);
    return gpelab::execute(mode, config, out_dir, std::cout);
  } catch (const gpelab::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gpelab::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return gpelab::kExitUsage;
  }
}
