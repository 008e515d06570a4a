#pragma once

#include "conley/system.hpp"

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <vector>

namespace conley {

inline constexpr double kHyperbolicityThreshold = 1e-8;

/// h(z) = ½β S·ÑS + F, its Euclidean gradient and the pencil (H, G(z)).
struct PotentialEval {
  double h = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hessian;
  Eigen::MatrixXd metric;
};

PotentialEval reduced_potential(const SystemSpec& system, const Eigen::VectorXd& z);
double reduced_value(const SystemSpec& system, const Eigen::VectorXd& z);
Eigen::VectorXd reduced_gradient(const SystemSpec& system, const Eigen::VectorXd& z);
/// ∇_g h = G⁻¹ ∇h.
Eigen::VectorXd metric_gradient(const SystemSpec& system, const Eigen::VectorXd& z);

struct CriticalPoint {
  Eigen::VectorXd z;
  double h_value = 0.0;
  double gradient_norm = 0.0;
  int morse_index = 0;
  double hyperbolicity_margin = 0.0;

  bool hyperbolic() const { return hyperbolicity_margin > kHyperbolicityThreshold; }
};

/// Morse index and margin from the generalized pencil H v = λ G v at z.
/// Throws NumericError if G(z) is not positive definite.
CriticalPoint analyse_point(const SystemSpec& system, const Eigen::VectorXd& z);

struct SearchBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// Damped Newton on ∇h from an n_seeds-per-axis lattice; converged points
/// (‖∇h‖ < 1e-10) inside the box, deduplicated at 1e-6, sorted lexicographically.
std::vector<CriticalPoint> find_critical_points(const SystemSpec& system, const SearchBox& box, int n_seeds);

/// Newton-polishes z to a nearby critical point and analyses it; throws
/// NoConvergence if ‖∇h‖ < 1e-10 is not reached.
CriticalPoint refine_critical_point(const SystemSpec& system, const Eigen::VectorXd& z);

/// Central finite-difference Jacobian of ∇_g h at z (step 1e-5(1+|z|)).
Eigen::MatrixXd metric_gradient_jacobian(const SystemSpec& system, const Eigen::VectorXd& z);

/// L(ξ) = iξ + β ∇_gSᵀ 𝒩̂(ξ) DS + P_z. Throws PreconditionError off crit(h).
Eigen::MatrixXcd symbol(const SystemSpec& system, const Eigen::VectorXd& z, double xi);
/// Λ(μ) = μ + β ∇_gSᵀ 𝒩̌(μ) DS + P_z, |μ| < η₀.
Eigen::MatrixXd real_symbol(const SystemSpec& system, const Eigen::VectorXd& z, double mu);

struct HyperbolicityScan {
  double min_abs_det = 0.0;
  double argmin_xi = 0.0;
  /// max |L(0) − D[∇_g h](z)| relative to max(1, |D[∇_g h](z)|).
  double l0_mismatch = 0.0;
  double max_imag_symbol = 0.0;
};

/// Samples ξ uniformly on [−ξ_max, ξ_max] (n points).
HyperbolicityScan hyperbolicity_scan(const SystemSpec& system, const Eigen::VectorXd& z, double xi_max, int n);

/// m_h(z_−) − m_h(z_+); PreconditionError for a non-hyperbolic endpoint.
int fredholm_index(const CriticalPoint& z_minus, const CriticalPoint& z_plus);

/// χ_{ℓ,ρ}(y): e^{−1/(ℓ(1 − (2y/ρ − 3)²))} on ρ < y < 2ρ, zero elsewhere.
double localiser(int ell, double rho, double y);
/// ⅓ of the distance from z to the nearest other point of crit (∞ if none).
double rho_of(const Eigen::VectorXd& z, const std::vector<Eigen::VectorXd>& crit);
/// σ_{ℓ,z}(u) = χ_{ℓ,ρ(z)}(|u − z|).
double sigma(int ell, const Eigen::VectorXd& z, const Eigen::VectorXd& u, const std::vector<Eigen::VectorXd>& crit);

}  // namespace conley
