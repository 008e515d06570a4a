#pragma once

#include "conley/critical_points.hpp"
#include "conley/front_solver.hpp"
#include "conley/gf2.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace conley {

struct Generator {
  std::string label;
  std::optional<CriticalPoint> point;
};

/// Graded Z₂ complex: boundary[n] maps C_n → C_{n−1} (|C_{n−1}| × |C_n|).
/// Every degree present in `generators` gets a rank, possibly zero.
struct ChainComplexZ2 {
  std::map<int, std::vector<Generator>> generators;
  std::map<int, BitMatrix> boundary;
  std::map<int, int> ranks;
  std::vector<std::string> warnings;

  int size(int degree) const;
  /// ∂_n, or an all-zero matrix of the right shape when none was set.
  BitMatrix boundary_matrix(int degree) const;
};

/// Generators bucketed by Morse index (non-hyperbolic points dropped with a
/// warning); ∂(z', z) = count_mod2. PreconditionError on index-gap violations,
/// unknown endpoints or duplicate generators.
ChainComplexZ2 build_complex(const std::vector<CriticalPoint>& critical_points,
                             const std::vector<ConnectionCount>& counts);

/// Abstract complex from sizes per degree and boundary matrices.
ChainComplexZ2 make_complex(const std::map<int, int>& sizes, const std::map<int, BitMatrix>& boundaries);

struct BoundaryViolation {
  int degree = 0;  // ∂_degree ∂_{degree+1}
  std::string from;
  std::string to;
};

/// All generator pairs (c ∈ C_{n+1}, b ∈ C_{n−1}) with (∂_n ∂_{n+1})(b, c) ≠ 0.
std::vector<BoundaryViolation> boundary_squared_violations(const ChainComplexZ2& complex);
bool verify_boundary_squared(const ChainComplexZ2& complex);

/// H_n = |C_n| − rank ∂_n − rank ∂_{n+1}; also stored into complex.ranks.
/// Throws PropertyViolation if ∂∂ ≠ 0.
std::map<int, int> homology_ranks(ChainComplexZ2& complex);

/// Disjoint union of two complexes (block-diagonal boundaries).
ChainComplexZ2 direct_sum(const ChainComplexZ2& a, const ChainComplexZ2& b);

int euler_characteristic_chains(const ChainComplexZ2& complex);
int euler_characteristic_ranks(const std::map<int, int>& ranks);

/// Label used for a critical point generator, e.g. "(-0.707107)".
std::string point_label(const Eigen::VectorXd& z);

}  // namespace conley
