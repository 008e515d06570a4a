#pragma once

#include "conley/blocks.hpp"
#include "conley/front_solver.hpp"
#include "conley/grid.hpp"
#include "conley/system.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace conley {

struct SearchSettings {
  std::vector<double> lower;
  std::vector<double> upper;
  int seeds = 32;
  bool operator==(const SearchSettings&) const = default;
};

struct MultistartSettings {
  int shift_min = -5;
  int shift_max = 5;
  double perturbation = 0.2;
  bool operator==(const MultistartSettings&) const = default;
};

/// Approximate front endpoints; refined to nearby critical points before use.
struct FrontSettings {
  std::optional<std::vector<double>> z_minus;
  std::optional<std::vector<double>> z_plus;
  double seed_shift = 0.0;
  bool operator==(const FrontSettings&) const = default;
};

struct LyapunovSettings {
  int samples = 60;
  double margin = 5.0;  // τ ranges over [−L + margin, L − margin]
  int windows = 5;
  unsigned seed = 1;
  bool operator==(const LyapunovSettings&) const = default;
};

struct BlockSettings {
  std::optional<BlockGeometry> geometry;
  int samples = 200;
  std::optional<BlockFamily> family;
  std::vector<double> radii;
  bool operator==(const BlockSettings&) const = default;
};

struct SymbolSettings {
  double xi_max = 50.0;
  int samples = 2001;
  bool operator==(const SymbolSettings&) const = default;
};

struct ForcingSettings {
  std::optional<int> num_hyperbolic;
  std::optional<std::map<int, int>> ranks;
  bool operator==(const ForcingSettings&) const = default;
};

struct OutputSettings {
  std::string report = "report.json";
  std::string profile_csv = "front.csv";
  std::string lyapunov_csv = "lyapunov.csv";
  bool operator==(const OutputSettings&) const = default;
};

struct RunConfig {
  SystemSpec system;
  Grid grid{40.0, 4001};
  SolverOptions solver;
  SearchSettings search;
  MultistartSettings multistart;
  FrontSettings front;
  std::vector<double> beta_path;
  LyapunovSettings lyapunov;
  BlockSettings block;
  SymbolSettings symbol;
  ForcingSettings forcing;
  OutputSettings output;
  int workers = 1;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; every failure is a ConfigError naming the key.
RunConfig parse_config(const nlohmann::json& document);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const SystemSpec& system);
nlohmann::json to_json(const BlockGeometry& geometry);

}  // namespace conley
