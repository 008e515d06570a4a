#include "conley/report.hpp"

#include "conley/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace conley {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_json(const std::optional<double>& v) { return v ? finite_or_null(*v) : json(nullptr); }

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("output", "cannot write " + path.string());
  return out;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(finite_or_null(v[i]));
  return a;
}

json ranks_json(const std::map<int, int>& ranks) {
  json r = json::object();
  for (const auto& [deg, rank] : ranks) r[std::to_string(deg)] = rank;
  return r;
}

json to_json(const CriticalPoint& p) {
  return {{"z", vector_json(p.z)},
          {"label", point_label(p.z)},
          {"h", p.h_value},
          {"gradient_norm", p.gradient_norm},
          {"morse_index", p.morse_index},
          {"hyperbolicity_margin", p.hyperbolicity_margin},
          {"hyperbolic", p.hyperbolic()}};
}

json to_json(const Front& f) {
  return {{"z_minus", to_json(f.z_minus)},
          {"z_plus", to_json(f.z_plus)},
          {"L", f.grid().half_width()},
          {"n", f.grid().size()},
          {"beta", f.beta},
          {"residual", f.residual},
          {"e_kin", f.e_kin},
          {"iterations", f.iterations},
          {"phase_component", f.phase_component},
          {"least_singular_value", f.least_singular_value},
          {"transversality_warning", f.transversality_warning},
          {"decay_fit_minus", optional_json(f.decay_fit_minus)},
          {"decay_fit_plus", optional_json(f.decay_fit_plus)}};
}

json to_json(const ConnectionCount& c) {
  json reps = json::array();
  for (const auto& f : c.representatives) reps.push_back(to_json(f));
  return {{"z_minus", point_label(c.z_minus.z)},
          {"z_plus", point_label(c.z_plus.z)},
          {"raw_count", c.raw_count},
          {"count_mod2", c.count_mod2},
          {"seeds_tried", c.seeds_tried},
          {"seeds_converged", c.seeds_converged},
          {"representatives", reps}};
}

json to_json(const EnergyReport& r) {
  json samples = json::array();
  for (const auto& [tau, value] : r.lyapunov_samples) samples.push_back({tau, value});
  return {{"e_kin", r.e_kin},
          {"delta_h", r.delta_h},
          {"identity_residual", r.identity_residual},
          {"lyapunov_samples", samples}};
}

json to_json(const SojournReport& r) {
  json iv = json::array();
  for (const auto& [a, b] : r.intervals) iv.push_back({a, b});
  return {{"rho", finite_or_null(r.rho)}, {"intervals", iv}, {"total_volume", r.total_volume}};
}

json to_json(const ChainComplexZ2& c) {
  json gens = json::object();
  for (const auto& [deg, list] : c.generators) {
    json names = json::array();
    for (const auto& g : list) names.push_back(g.label);
    gens[std::to_string(deg)] = names;
  }
  json bd = json::object();
  for (const auto& [deg, m] : c.boundary) bd[std::to_string(deg)] = m.to_strings();
  return {{"generators", gens}, {"boundary", bd}, {"ranks", ranks_json(c.ranks)}, {"warnings", c.warnings}};
}

json to_json(const Block& b) {
  json facets = json::array();
  for (const auto& f : b.facets)
    facets.push_back({{"name", f.name}, {"label", to_string(f.label)}, {"min_flux", f.min_flux}, {"max_flux", f.max_flux}});
  json out = {{"dimension", geometry_dimension(b.geometry)}, {"facets", facets}, {"c_perp", b.c_perp}};
  out["nonlocal_sup"] = optional_json(b.nonlocal_sup);
  return out;
}

json to_json(const StabilisingScan& s) {
  json entries = json::array();
  for (const auto& e : s.entries)
    entries.push_back({{"radius", e.radius},
                       {"valid", e.valid},
                       {"c_perp", e.c_perp},
                       {"bound", e.bound},
                       {"ratio", finite_or_null(e.ratio)},
                       {"message", e.message}});
  return {{"entries", entries},
          {"r0_prime", optional_json(s.r0_prime)},
          {"trend", s.trend},
          {"monotone_after_pass", s.monotone_after_pass}};
}

json to_json(const HyperbolicityScan& s) {
  return {{"min_abs_det", s.min_abs_det},
          {"argmin_xi", s.argmin_xi},
          {"l0_mismatch", s.l0_mismatch},
          {"max_imag_symbol", s.max_imag_symbol}};
}

void write_profile_csv(const std::filesystem::path& path, const GridFunction& u) {
  std::ofstream out = open_output(path);
  out << "x";
  for (int c = 0; c < u.dim(); ++c) out << ",u_" << c + 1;
  out << "\n";
  for (int i = 0; i < u.size(); ++i) {
    out << format_double(u.grid.x(i));
    for (int c = 0; c < u.dim(); ++c) out << "," << format_double(u.values(i, c));
    out << "\n";
  }
}

void write_lyapunov_csv(const std::filesystem::path& path, const std::vector<std::pair<double, double>>& samples) {
  std::ofstream out = open_output(path);
  out << "tau,L\n";
  for (const auto& [tau, value] : samples) out << format_double(tau) << "," << format_double(value) << "\n";
}

void write_json(const std::filesystem::path& path, const json& document) {
  std::ofstream out = open_output(path);
  out << document.dump(2) << "\n";
}

}  // namespace conley
