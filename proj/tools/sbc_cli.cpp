#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbc/sbc.h"

namespace {

int exit_code(sbc_status st) {
  switch (st) {
    case SBC_OK:
      return 0;
    case SBC_ERR_PRECISION:
      return 3;
    case SBC_ERR_INTERNAL:
      return 1;
    default:
      // Bad inputs all come from the scenario or its overrides.
      return 2;
  }
}

int report(sbc_status st) {
  std::cerr << "sbc: " << sbc_last_error() << '\n';
  return exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rates of symbiotic backscatter links under MASK/MPSK, as CSV"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::uint64_t seed = 0;
  int grid = 0;
  std::vector<std::string> overrides;

  app.add_option("--scenario", scenario_path, "Scenario file (JSON); built-in default if omitted");
  app.add_option("--out", out_path, "Write CSV here instead of stdout");
  auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
  app.add_option("--grid", grid, "Sweep steps, or grid points for optimize")
      ->check(CLI::PositiveNumber);
  app.add_option("--override", overrides, "key=value applied to the scenario (repeatable)")
      ->take_all()
      ->allow_extra_args(false);

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"rate", "PT rate, no-BD rate, gain and BD rate at the scenario's phase"},
      {"phase-sweep", "PT rate across base phases"},
      {"ratio-sweep", "ASK and PSK optimal rates across |h1|/(|h2||h3|)"},
      {"order-sweep", "Optimal and fixed-phase rates across modulation orders"},
      {"optimize", "Closed-form optimal phase with a grid cross-check"},
      {"mi", "BD mutual information by quadrature and Monte Carlo"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  sbc_scenario* sc = nullptr;
  sbc_status st = scenario_path.empty() ? sbc_scenario_default(&sc)
                                        : sbc_scenario_load_file(scenario_path.c_str(), &sc);
  if (st != SBC_OK) return report(st);
  std::unique_ptr<sbc_scenario, decltype(&sbc_scenario_free)> guard(sc, sbc_scenario_free);

  for (const auto& o : overrides) {
    if ((st = sbc_scenario_override(sc, o.c_str())) != SBC_OK) return report(st);
  }
  if (*seed_opt && (st = sbc_scenario_set_seed(sc, seed)) != SBC_OK) return report(st);
  if (grid > 0 && (st = sbc_scenario_set_grid(sc, grid)) != SBC_OK) return report(st);
  if (const char* warn = sbc_scenario_warning(sc)) std::cerr << "sbc: warning: " << warn << '\n';

  char* csv = nullptr;
  if ((st = sbc_run(sc, command.c_str(), &csv)) != SBC_OK) return report(st);
  const std::string text(csv);
  sbc_string_free(csv);

  if (out_path.empty()) {
    std::cout << text;
    return std::cout.good() ? 0 : 1;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "sbc: cannot write '" << out_path << "'\n";
    return 1;
  }
  return 0;
}
