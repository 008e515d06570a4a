#pragma once

#include "conley/grid.hpp"
#include "conley/parallel_kernels.hpp"
#include "conley/system.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace conley {

/// sup over interior nodes of |u' + Φ_β(u)|.
double residual(const SystemSpec& system, const GridFunction& u);
double residual(const SystemSpec& system, const ConvolutionPlan& plan, const GridFunction& u);

/// ½∫_a^b u'ᵀG(u)u' by the trapezoid rule; a and b must be nodes.
double kinetic_energy(const SystemSpec& system, const GridFunction& u, double a, double b);
double kinetic_energy(const SystemSpec& system, const GridFunction& u);

/// ℒ(τ·u); τ must be a node.
double lyapunov(const SystemSpec& system, const GridFunction& u, double tau);

/// Evaluates ℒ at several shifts with shared setup.
class LyapunovEvaluator {
 public:
  LyapunovEvaluator(const SystemSpec& system, const GridFunction& u);
  double operator()(double tau) const;
  double at_node(int p) const;

 private:
  const SystemSpec& system_;
  const GridFunction& u_;
  ConvolutionPlan plan_;
  GridFunction s_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd derivative_;
};

struct EnergyReport {
  double e_kin = 0.0;
  double delta_h = 0.0;
  double identity_residual = 0.0;
  std::vector<std::pair<double, double>> lyapunov_samples;
};

/// |∫_a^b u'ᵀG(u)u' − (ℒ(a·u) − ℒ(b·u))|. PreconditionError if residual(u) > 1e-6.
double energy_identity_check(const SystemSpec& system, const GridFunction& u, double a, double b);

/// Full-line version: e_kin, Δh = h(z_−) − h(z_+) and |2E_kin − Δh|, plus ℒ at
/// the given shifts. PreconditionError if residual(u) > 1e-6.
EnergyReport energy_report(const SystemSpec& system, const GridFunction& u, const std::vector<double>& taus);

struct SojournReport {
  double rho = 0.0;
  std::vector<std::pair<double, double>> intervals;
  double total_volume = 0.0;
};

/// Maximal intervals where the distance from u(x) to crit is at least ρ;
/// endpoints located by linear interpolation between nodes.
SojournReport sojourn(const GridFunction& u, double rho, const std::vector<Eigen::VectorXd>& crit);

}  // namespace conley
