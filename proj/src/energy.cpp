#include "conley/energy.hpp"

#include "conley/critical_points.hpp"
#include "conley/errors.hpp"
#include "conley/nonlocal.hpp"

#include <cmath>
#include <limits>

namespace conley {

namespace {

int require_node(const Grid& grid, double x, const char* what) {
  const int i = grid.node_at(x);
  if (i < 0) throw PreconditionError(std::string(what) + " = " + std::to_string(x) + " is not a grid node");
  return i;
}

Eigen::VectorXd tail_of(const std::optional<Eigen::VectorXd>& t, const char* side) {
  if (!t) throw PreconditionError(std::string("profile has no ") + side + " tail constant");
  return *t;
}

double weighted_square(const SystemSpec& system, const GridFunction& u, const Eigen::MatrixXd& du, int a,
                       int b) {
  const int n = u.size();
  Eigen::VectorXd f(n);
  for (int i = a; i <= b; ++i) {
    const Eigen::VectorXd v = du.row(i).transpose();
    f(i) = v.dot(system.G(u.values.row(i).transpose()) * v);
  }
  return trapezoid(f, u.grid.step(), a, b);
}

}  // namespace

double residual(const SystemSpec& system, const GridFunction& u) {
  return residual(system, ConvolutionPlan(system.kernel, u.grid), u);
}

double residual(const SystemSpec& system, const ConvolutionPlan& plan, const GridFunction& u) {
  const Eigen::MatrixXd r = derivative(u) + phi(system, plan, u);
  double sup = 0.0;
  for (int i = 1; i + 1 < u.size(); ++i) sup = std::max(sup, r.row(i).norm());
  return sup;
}

double kinetic_energy(const SystemSpec& system, const GridFunction& u, double a, double b) {
  const int ia = require_node(u.grid, a, "window start");
  const int ib = require_node(u.grid, b, "window end");
  if (ia > ib) throw PreconditionError("kinetic_energy: window start exceeds window end");
  return 0.5 * weighted_square(system, u, derivative(u), ia, ib);
}

double kinetic_energy(const SystemSpec& system, const GridFunction& u) {
  return 0.5 * weighted_square(system, u, derivative(u), 0, u.size() - 1);
}

LyapunovEvaluator::LyapunovEvaluator(const SystemSpec& system, const GridFunction& u)
    : system_(system), u_(u), plan_(system.kernel, u.grid), s_(apply_coupling(system, u)) {
  derivative_ = derivative(u);
  q_.resize(u.size(), system.coupling_dim);
  for (int i = 0; i < u.size(); ++i)
    q_.row(i) = (system.DS(u.values.row(i).transpose()) * derivative_.row(i).transpose()).transpose();
}

double LyapunovEvaluator::at_node(int p) const {
  const Eigen::VectorXd z = u_.values.row(p).transpose();
  double value = system_.F(z);
  if (system_.beta != 0.0) {
    const Eigen::VectorXd conv = kernels::convolve_node(plan_, s_, p);
    value += 0.5 * system_.beta * s_.values.row(p).dot(conv.transpose());
    value -= system_.beta * kernels::boundary_term(plan_, s_, q_, p);
  }
  return value;
}

double LyapunovEvaluator::operator()(double tau) const { return at_node(require_node(u_.grid, tau, "tau")); }

double lyapunov(const SystemSpec& system, const GridFunction& u, double tau) {
  return LyapunovEvaluator(system, u)(tau);
}

double energy_identity_check(const SystemSpec& system, const GridFunction& u, double a, double b) {
  const ConvolutionPlan plan(system.kernel, u.grid);
  const double res = residual(system, plan, u);
  if (res > 1e-6)
    throw PreconditionError("energy identity needs a solution (residual " + std::to_string(res) + ")");
  const int ia = require_node(u.grid, a, "window start");
  const int ib = require_node(u.grid, b, "window end");
  if (ia > ib) throw PreconditionError("energy identity: window start exceeds window end");
  const LyapunovEvaluator lyap(system, u);
  const double lhs = weighted_square(system, u, derivative(u), ia, ib);
  return std::abs(lhs - (lyap.at_node(ia) - lyap.at_node(ib)));
}

EnergyReport energy_report(const SystemSpec& system, const GridFunction& u, const std::vector<double>& taus) {
  const double res = residual(system, u);
  if (res > 1e-6)
    throw PreconditionError("energy identity needs a solution (residual " + std::to_string(res) + ")");
  EnergyReport r;
  r.e_kin = kinetic_energy(system, u);
  r.delta_h = reduced_value(system, tail_of(u.left_tail, "left")) - reduced_value(system, tail_of(u.right_tail, "right"));
  r.identity_residual = std::abs(2.0 * r.e_kin - r.delta_h);
  const LyapunovEvaluator lyap(system, u);
  for (double t : taus) r.lyapunov_samples.emplace_back(t, lyap(t));
  return r;
}

SojournReport sojourn(const GridFunction& u, double rho, const std::vector<Eigen::VectorXd>& crit) {
  if (!(rho > 0.0)) throw PreconditionError("sojourn: rho must be positive");
  SojournReport r;
  r.rho = rho;
  const Grid& g = u.grid;
  const int n = u.size();
  if (crit.empty()) {
    r.intervals.emplace_back(-g.half_width(), g.half_width());
    r.total_volume = 2.0 * g.half_width();
    return r;
  }
  Eigen::VectorXd f(n);
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : crit) best = std::min(best, (u.values.row(i).transpose() - c).norm());
    f(i) = best - rho;
  }
  auto crossing = [&](int i) {  // zero of the linear interpolant between nodes i and i+1
    const double t = f(i) / (f(i) - f(i + 1));
    return g.x(i) + t * g.step();
  };
  int i = 0;
  while (i < n) {
    if (f(i) < 0.0) {
      ++i;
      continue;
    }
    const double a = i == 0 ? g.x(0) : crossing(i - 1);
    int j = i;
    while (j + 1 < n && f(j + 1) >= 0.0) ++j;
    const double b = j == n - 1 ? g.x(n - 1) : crossing(j);
    r.intervals.emplace_back(a, b);
    r.total_volume += b - a;
    i = j + 1;
  }
  return r;
}

}  // namespace conley
