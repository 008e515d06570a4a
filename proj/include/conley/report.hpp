#pragma once

#include "conley/blocks.hpp"
#include "conley/critical_points.hpp"
#include "conley/energy.hpp"
#include "conley/floer_complex.hpp"
#include "conley/front_solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace conley {

nlohmann::json vector_json(const Eigen::VectorXd& v);
nlohmann::json ranks_json(const std::map<int, int>& ranks);

nlohmann::json to_json(const CriticalPoint& point);
/// Front metadata only; the profile goes to CSV.
nlohmann::json to_json(const Front& front);
nlohmann::json to_json(const ConnectionCount& count);
nlohmann::json to_json(const EnergyReport& report);
nlohmann::json to_json(const SojournReport& report);
nlohmann::json to_json(const ChainComplexZ2& complex);
nlohmann::json to_json(const Block& block);
nlohmann::json to_json(const StabilisingScan& scan);
nlohmann::json to_json(const HyperbolicityScan& scan);

/// Header x,u_1,...,u_d; one row per node.
void write_profile_csv(const std::filesystem::path& path, const GridFunction& u);
/// Header tau,L.
void write_lyapunov_csv(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& samples);
void write_json(const std::filesystem::path& path, const nlohmann::json& document);

}  // namespace conley
