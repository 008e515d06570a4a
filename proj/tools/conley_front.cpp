#include "conley/commands.hpp"
#include "conley/errors.hpp"
#include "conley/logging.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace {

std::pair<int, int> parse_range(const std::string& text) {
  std::stringstream ss(text);
  int a = 0, b = 0;
  char comma = 0;
  if (!(ss >> a >> comma >> b) || comma != ',' || !ss.eof())
    throw conley::ConfigError("multistart", "--seed-shift-range expects two integers 'a,b'");
  return {a, b};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Travelling fronts, Floer complexes and isolating blocks for nonlocal gradient-like systems"};
  app.require_subcommand(1, 1);

  std::string config, out = ".", range;
  int workers = 0;
  double beta = -1.0;
  app.add_option("--config", config, "JSON configuration file");
  app.add_option("--out", out, "Output directory for the report and CSV files");
  app.add_option("--workers", workers, "Worker threads (overrides the configuration)")->check(CLI::PositiveNumber);
  app.add_option("--seed-shift-range", range, "Multi-start shift range a,b");
  app.add_option("--beta", beta, "Coupling scale in [0, 1]")->check(CLI::Range(0.0, 1.0));
  static const std::map<std::string, std::string> about = {
      {"critical-points", "Locate and classify critical points of h in the search box"},
      {"solve-front", "Solve for the front between front.z_minus and front.z_plus"},
      {"count", "Mod-2 count of fronts between front.z_minus and front.z_plus"},
      {"complex", "Floer chain complex and its GF(2) homology"},
      {"lyapunov-check", "Quasi-Lyapunov samples and energy identity on a solved front"},
      {"block-verify", "Classify the block boundary; scan block.radii if a family is given"},
      {"rel-homology", "GF(2) homology of the block relative to its exit set"},
      {"forcing", "Lower bound on connecting orbits from ranks and critical point count"},
      {"symbol-scan", "Scan det L(xi) at every hyperbolic critical point"},
      {"decay", "Predicted and fitted tail exponents of a front"},
      {"reproduce-paper", "Neural-field ball and polygon pipelines with built-in parameters"}};
  for (const auto& name : conley::command_names()) {
    auto it = about.find(name);
    app.add_subcommand(name, it == about.end() ? std::string() : it->second)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return conley::kExitValidation;
  }

  conley::CommandOptions options;
  try {
    conley::log::level();
    if (!config.empty()) options.config = config;
    options.out_dir = out;
    if (workers > 0) options.workers = workers;
    if (!range.empty()) options.seed_shift_range = parse_range(range);
    if (beta >= 0.0) options.beta = beta;
  } catch (const conley::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return conley::kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const conley::CommandResult result = conley::run_command(command, options);
  if (result.exit_code != conley::kExitOk) std::cerr << "error: " << result.error << "\n";
  else conley::log::info(command + " finished; report in " + (options.out_dir / "report.json").string());
  return result.exit_code;
}
