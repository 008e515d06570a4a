#include "conley/commands.hpp"
#include "conley/config.hpp"
#include "conley/errors.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace conley;
using nlohmann::json;

namespace {

const std::filesystem::path kConfigs = CONLEY_CONFIG_DIR;

json load(const std::string& name) {
  std::ifstream in(kConfigs / name);
  return json::parse(in);
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("conley_cli_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::filesystem::path write_config(const std::filesystem::path& dir, const json& j) {
  const auto p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

std::string error_key(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

CommandOptions options_for(const std::filesystem::path& dir, const std::filesystem::path& config) {
  CommandOptions o;
  o.config = config;
  o.out_dir = dir;
  return o;
}

}  // namespace

TEST_CASE("shipped configurations parse and round trip") {
  for (const char* name : {"double_well.json", "tilted_double_well.json", "neural_field_ball.json", "polygon_k3.json"}) {
    CAPTURE(name);
    const RunConfig c = parse_config(load(name));
    CHECK(parse_config(to_json(c)) == c);
    CHECK(parse_config_text(to_json(c).dump()) == c);
  }
}

TEST_CASE("validation errors name the key") {
  json j = load("double_well.json");
  j["grid"]["n"] = 1600;
  CHECK(error_key(j) == "grid.n");

  j = load("double_well.json");
  j["bogus"] = 1;
  CHECK(error_key(j) == "bogus");

  j = load("double_well.json");
  j["system"]["kernel"]["continuous"][0]["family"] = "cauchy";
  CHECK(error_key(j) == "system.kernel.continuous[0].family");

  j = load("double_well.json");
  j["system"]["kernel"]["continuous"][0]["b"] = 3.0;
  CHECK(error_key(j).rfind("system.kernel", 0) == 0);

  j = load("double_well.json");
  j["system"]["potential"]["type"] = "quartic";
  CHECK(error_key(j) == "system.potential.type");

  j = load("double_well.json");
  j["search"]["lower"] = {-1.0, -1.0};
  CHECK(error_key(j) == "search.lower");

  j = load("double_well.json");
  j["system"]["potential"]["terms"][0]["powers"] = {4, 0};
  CHECK(error_key(j) == "system.potential.terms[0].powers");

  j = load("double_well.json");
  j["block"]["geometry"] = {{"type", "ball"}, {"dim", 2}, {"radius", -1.0}};
  CHECK(error_key(j).rfind("block.geometry", 0) == 0);

  j = load("double_well.json");
  j["system"].erase("kernel");
  CHECK(error_key(j) == "system.kernel");

  CHECK_THROWS_AS(parse_config_text("{\"system\": "), ConfigError);
}

TEST_CASE("command line overrides") {
  RunConfig c = parse_config(load("double_well.json"));
  CommandOptions o;
  o.workers = 3;
  o.seed_shift_range = std::make_pair(-2, 4);
  o.beta = 0.5;
  apply_overrides(c, o);
  CHECK(c.workers == 3);
  CHECK(c.multistart.shift_min == -2);
  CHECK(c.multistart.shift_max == 4);
  CHECK(c.system.beta == 0.5);
  o.beta = 1.5;
  CHECK_THROWS_AS(apply_overrides(c, o), ConfigError);
  o.beta.reset();
  o.seed_shift_range = std::make_pair(3, 1);
  CHECK_THROWS_AS(apply_overrides(c, o), ConfigError);
}

TEST_CASE("forcing and relative homology commands") {
  const auto dir = scratch("forcing");
  CommandResult r = run_command("forcing", options_for(dir, kConfigs / "polygon_k3.json"));
  CHECK(r.exit_code == kExitOk);
  CHECK(r.report["results"]["forcing_bound"] == 1);
  CHECK(std::filesystem::exists(dir / "report.json"));

  r = run_command("rel-homology", options_for(dir, kConfigs / "polygon_k3.json"));
  CHECK(r.exit_code == kExitOk);
  CHECK(r.report["results"]["ranks"] == json{{"0", 0}, {"1", 2}, {"2", 0}});

  r = run_command("rel-homology", options_for(dir, kConfigs / "neural_field_ball.json"));
  CHECK(r.exit_code == kExitOk);
  CHECK(r.report["results"]["ranks"] == json{{"0", 0}, {"1", 0}, {"2", 1}});
  CHECK(r.report["results"]["block"]["c_perp"].get<double>() == doctest::Approx(15.0).epsilon(1e-12));

  r = run_command("block-verify", options_for(dir, kConfigs / "neural_field_ball.json"));
  CHECK(r.exit_code == kExitOk);
  CHECK(r.report["results"]["hypothesis"]["pass"] == true);
  CHECK(r.report["results"]["stabilising_scan"]["r0_prime"].is_number());

  json j = load("double_well.json");
  j["forcing"] = {{"num_hyperbolic", 3}, {"ranks", {{"0", 1}, {"1", 0}}}};
  r = run_command("forcing", options_for(dir, write_config(dir, j)));
  CHECK(r.report["results"]["forcing_bound"] == 2);
}

TEST_CASE("reports are reproducible and echo the configuration") {
  const auto dir = scratch("determinism");
  json j = load("double_well.json");
  j["grid"]["n"] = 801;
  const auto path = write_config(dir, j);
  for (const char* cmd : {"critical-points", "solve-front", "symbol-scan", "block-verify"}) {
    CAPTURE(cmd);
    const CommandResult a = run_command(cmd, options_for(dir, path));
    const std::string first = strip_timings(json::parse(slurp(dir / "report.json"))).dump();
    const CommandResult b = run_command(cmd, options_for(dir, path));
    const std::string second = strip_timings(json::parse(slurp(dir / "report.json"))).dump();
    CHECK(a.exit_code == kExitOk);
    CHECK(first == second);
    CHECK(strip_timings(a.report) == strip_timings(b.report));
    CHECK(parse_config(a.report["config"]) == parse_config(j));
  }
  std::ifstream csv(dir / "front.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x,u_1");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 801);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  json j = load("double_well.json");
  j["grid"]["n"] = 800;
  CommandResult r = run_command("critical-points", options_for(dir, write_config(dir, j)));
  CHECK(r.exit_code == kExitValidation);
  CHECK(r.report["results"]["error_key"] == "grid.n");

  j = load("double_well.json");
  j["grid"]["n"] = 401;
  j["solver"] = {{"max_iterations", 1}};
  j["front"]["seed_shift"] = 20.0;
  r = run_command("solve-front", options_for(dir, write_config(dir, j)));
  CHECK(r.exit_code == kExitNumeric);

  j = load("double_well.json");
  j["block"]["geometry"] = {{"type", "interval"}, {"a", -1.0}, {"b", 2.0}};
  r = run_command("block-verify", options_for(dir, write_config(dir, j)));
  CHECK(r.exit_code == kExitProperty);

  j = load("double_well.json");
  j.erase("front");
  r = run_command("solve-front", options_for(dir, write_config(dir, j)));
  CHECK(r.exit_code == kExitValidation);
  CHECK(r.report["results"]["error_key"] == "front.z_minus");

  r = run_command("critical-points", CommandOptions{});
  CHECK(r.exit_code == kExitValidation);
}

TEST_CASE("command line binary") {
  const auto dir = scratch("binary");
  const std::string cli = CONLEY_CLI;
  const std::string cfg = (kConfigs / "polygon_k3.json").string();
  CHECK(shell(cli + " forcing --config " + cfg + " --out " + dir.string()) == 0);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(shell(cli + " --config " + cfg + " --out " + dir.string() + " rel-homology") == 0);
  CHECK(shell(cli + " nonsense --config " + cfg) == 1);
  CHECK(shell(cli + " forcing --config " + cfg + " --seed-shift-range 3") == 1);
  CHECK(shell(cli + " forcing --config " + cfg + " --beta 2") == 1);
  CHECK(shell(cli + " forcing --config /nonexistent.json --out " + dir.string()) == 1);
  CHECK(shell("CONLEY_FRONT_LOG=loud " + cli + " forcing --config " + cfg + " --out " + dir.string()) == 1);
  CHECK(shell("CONLEY_FRONT_LOG=quiet " + cli + " forcing --config " + cfg + " --out " + dir.string()) == 0);
}
