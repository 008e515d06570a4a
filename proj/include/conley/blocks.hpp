#pragma once

#include "conley/system.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace conley {

struct IntervalGeometry {
  double a = -1.0;
  double b = 1.0;
  bool operator==(const IntervalGeometry&) const = default;
};
struct BallGeometry {
  int dim = 2;
  double radius = 1.0;
  bool operator==(const BallGeometry&) const = default;
};
/// Convex polygon, vertices counter-clockwise.
struct PolygonGeometry {
  std::vector<Eigen::Vector2d> vertices;
  bool operator==(const PolygonGeometry& o) const { return vertices == o.vertices; }
};
/// {|x| ≤ R, |y| ≤ |x² − R²|}; facets are the upper and lower arcs.
struct LensGeometry {
  double radius = 1.0;
  bool operator==(const LensGeometry&) const = default;
};
using BlockGeometry = std::variant<IntervalGeometry, BallGeometry, PolygonGeometry, LensGeometry>;

int geometry_dimension(const BlockGeometry& geometry);
/// Throws ConfigError (key "block.geometry") for degenerate or non-convex input.
void validate_geometry(const BlockGeometry& geometry);
bool contains(const BlockGeometry& geometry, const Eigen::VectorXd& u, double tol = 1e-12);

/// 2k vertices at polar (R, iπ/k); for k = 1 the lens of radius R.
BlockGeometry polygon_family(int k, double radius);

enum class FacetLabel { ingress, egress };

struct Facet {
  std::string name;
  FacetLabel label = FacetLabel::ingress;
  double min_flux = 0.0;  // min of Φ₀·ν over the samples
  double max_flux = 0.0;
};

struct Block {
  BlockGeometry geometry;
  std::vector<Facet> facets;
  double c_perp = 0.0;
  std::optional<double> nonlocal_sup;
};

/// Labels each facet from Φ₀·ν (Φ₀ = G⁻¹∇F) on n_samples interior points:
/// positive → ingress, negative → egress; c_perp = min |Φ₀·ν|. Throws
/// PropertyViolation on a sign change ("not an isolating block") or |Φ₀·ν| < 1e-10.
Block classify_boundary(const SystemSpec& system, const BlockGeometry& geometry, int n_samples = 200);

/// ∫‖N‖ + Σ‖N_j‖ times sup‖G⁻¹DSᵀ‖ times sup|S| over a 50-per-axis grid of B.
double nonlocal_sup_bound(const SystemSpec& system, const BlockGeometry& geometry);

struct HypothesisResult {
  bool pass = false;
  double ratio = 0.0;
};
/// ratio = bound / c_perp, pass iff ratio < 1. PreconditionError if c_perp ≤ 0.
HypothesisResult morse_iso_hypothesis(const Block& block, double nonlocal_bound);

enum class FamilyKind { interval, ball, polygon };
struct BlockFamily {
  FamilyKind kind = FamilyKind::ball;
  int dim = 2;  // ball dimension
  int k = 2;    // polygon: 2k vertices (k = 1 lens)
  BlockGeometry at(double radius) const;
  bool operator==(const BlockFamily&) const = default;
};

struct ScanEntry {
  double radius = 0.0;
  bool valid = false;
  double c_perp = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  std::string message;
};
struct StabilisingScan {
  std::vector<ScanEntry> entries;
  /// Least scanned R from which every larger scanned R passes.
  std::optional<double> r0_prime;
  /// "decreasing", "nonincreasing" or "mixed" over the valid entries.
  std::string trend;
  /// ratio(R) nonincreasing for R ≥ the first passing radius.
  bool monotone_after_pass = true;
};
StabilisingScan stabilising_scan(const SystemSpec& system, const BlockFamily& family,
                                 const std::vector<double>& radii, int n_samples = 200);

/// H_*(B, ∂B_−; Z₂) from the CW structure of the labelled block; degrees 0..dim.
/// PreconditionError for a ball with mixed labels.
std::map<int, int> relative_homology(const Block& block);

/// max(0, #Z − Σ ranks). PreconditionError for negative input.
int forcing_bound(int num_hyperbolic_constants, const std::map<int, int>& ranks);
int forcing_bound(int num_hyperbolic_constants, int total_rank);

std::string to_string(FacetLabel label);

}  // namespace conley
