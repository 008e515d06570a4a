#pragma once

#include "conley/critical_points.hpp"
#include "conley/grid.hpp"
#include "conley/parallel_kernels.hpp"
#include "conley/system.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace conley {

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 40;
  int damping_retries = 8;
  double fd_step = 1e-6;
  double min_rcond = 1e-13;
  double transversality_threshold = 1e-6;
  bool estimate_singular_value = true;
  bool operator==(const SolverOptions&) const = default;
};

struct Front {
  GridFunction profile;
  CriticalPoint z_minus;
  CriticalPoint z_plus;
  double residual = 0.0;
  double e_kin = 0.0;
  std::optional<double> decay_fit_minus;
  std::optional<double> decay_fit_plus;
  double beta = 1.0;
  int iterations = 0;
  int phase_component = 0;
  double least_singular_value = 0.0;
  bool transversality_warning = false;

  const Grid& grid() const { return profile.grid; }
};

/// Damped Newton for u' + Φ_β(u) = 0 on the interior nodes with u(±L) = z_±,
/// tails z_± and the phase condition u_c(0) = ½(z_−,c + z_+,c).
/// Throws NoConvergence (also when the center-node equation fails) or SingularJacobian.
Front solve_front(const SystemSpec& system, const CriticalPoint& z_minus, const CriticalPoint& z_plus,
                  const GridFunction& seed, const SolverOptions& options = {});

/// z_− + (z_+ − z_−)(1 + tanh(x − shift))/2.
GridFunction tanh_seed(const Grid& grid, const Eigen::VectorXd& z_minus, const Eigen::VectorXd& z_plus,
                       double shift);

/// Re-solves along the β path (previous solution as seed, endpoints re-polished
/// per β), halving the step on failure down to 1/64. Throws ContinuationStuck.
Front continue_in_beta(const SystemSpec& system, const Front& start, const std::vector<double>& beta_path,
                       const SolverOptions& options = {});

struct MultistartConfig {
  Grid grid{40.0, 1601};
  int shift_min = -5;
  int shift_max = 5;
  double perturbation = 0.2;
  SolverOptions solver;
};

struct ConnectionCount {
  CriticalPoint z_minus;
  CriticalPoint z_plus;
  std::vector<Front> representatives;
  int raw_count = 0;
  int count_mod2 = 0;
  int seeds_tried = 0;
  int seeds_converged = 0;
};

/// Deterministic multi-start count of index-gap-1 fronts. PreconditionError
/// for any other index gap; z_− = z_+ gives zero connections.
ConnectionCount count_connections(const SystemSpec& system, const CriticalPoint& z_minus,
                                  const CriticalPoint& z_plus, const MultistartConfig& config = {});

/// Min over integer node shifts of the L² distance between two profiles.
double shift_distance(const GridFunction& a, const GridFunction& b, int max_shift);

/// Residual Jacobian on the interior unknowns (no phase row), row/column
/// block of node i at (i − 1)·d.
Eigen::MatrixXd residual_jacobian(const SystemSpec& system, const ConvolutionPlan& plan, const GridFunction& u,
                                  double fd_step = 1e-6);

/// ‖J·u'‖_∞ / ‖u'‖_∞ over interior nodes, u' from the 5-point stencil or given.
double translation_kernel_check(const SystemSpec& system, const Front& front);
double translation_kernel_check(const SystemSpec& system, const GridFunction& u, const Eigen::MatrixXd& du);

/// Real roots of det Λ(μ) on (−η₀, η₀)∖{0}, ascending; 400-point scan + bisection.
std::vector<double> decay_rates(const SystemSpec& system, const CriticalPoint& z, double eta0);

/// Predicted tail rates: η_+ from the negative root nearest 0 at z_+, η_− from
/// the positive root nearest 0 at z_−; nullopt = decay faster than η₀.
struct DecayPrediction {
  std::optional<double> minus;
  std::optional<double> plus;
};
DecayPrediction predicted_decay(const SystemSpec& system, const CriticalPoint& z_minus, const CriticalPoint& z_plus,
                                double eta0);

/// Log-linear least-squares fit of |u − z_±| over the band 1e-8 < |u − z_±| < 1e-3
/// on each half line; positive rates, nullopt if fewer than 5 samples.
struct DecayFit {
  std::optional<double> minus;
  std::optional<double> plus;
};
DecayFit decay_fit(const GridFunction& u);

}  // namespace conley
