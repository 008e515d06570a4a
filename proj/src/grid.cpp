#include "conley/grid.hpp"

#include "conley/errors.hpp"

#include <cmath>
#include <string>

namespace conley {

Grid::Grid(double half_width, int nodes) : half_width_(half_width), nodes_(nodes) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw ConfigError("grid.L", "must be positive");
  if (nodes < 3) throw ConfigError("grid.n", "need at least 3 nodes");
  if (nodes % 2 == 0) throw ConfigError("grid.n", "node count must be odd so that x = 0 is a node");
}

Grid Grid::from_nodes(std::span<const double> nodes) {
  if (nodes.size() < 3 || nodes.size() % 2 == 0)
    throw ConfigError("grid", "need an odd number (>= 3) of nodes");
  const double lo = nodes.front();
  const double hi = nodes.back();
  if (std::abs(lo + hi) > 1e-9 * std::abs(hi))
    throw ConfigError("grid", "nodes must be symmetric about 0");
  const double h = (hi - lo) / static_cast<double>(nodes.size() - 1);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (std::abs((nodes[i] - nodes[i - 1]) - h) > 1e-6 * h)
      throw ConfigError("grid", "non-uniform grid at node " + std::to_string(i));
  }
  return Grid(hi, static_cast<int>(nodes.size()));
}

int Grid::node_at(double x) const {
  const double s = (x + half_width_) / step();
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9 || r < 0 || r > nodes_ - 1) return -1;
  return static_cast<int>(r);
}

GridFunction::GridFunction(Grid g, Eigen::MatrixXd v, std::optional<Eigen::VectorXd> left,
                           std::optional<Eigen::VectorXd> right)
    : grid(g), values(std::move(v)), left_tail(std::move(left)), right_tail(std::move(right)) {
  if (values.rows() != grid.size())
    throw PreconditionError("grid function has " + std::to_string(values.rows()) +
                            " rows, grid has " + std::to_string(grid.size()) + " nodes");
}

Eigen::VectorXd GridFunction::at(int i) const {
  if (i < 0) {
    if (!left_tail) throw PreconditionError("evaluation left of the grid without a tail constant");
    return *left_tail;
  }
  if (i >= size()) {
    if (!right_tail) throw PreconditionError("evaluation right of the grid without a tail constant");
    return *right_tail;
  }
  return values.row(i).transpose();
}

Eigen::VectorXd GridFunction::at_position(double s) const {
  const double fl = std::floor(s);
  const double theta = s - fl;
  const int i = static_cast<int>(fl);
  if (theta == 0.0) return at(i);
  return (1.0 - theta) * at(i) + theta * at(i + 1);
}

GridFunction GridFunction::constant(const Grid& grid, const Eigen::VectorXd& z) {
  Eigen::MatrixXd v = z.transpose().replicate(grid.size(), 1);
  return GridFunction(grid, std::move(v), z, z);
}

Eigen::MatrixXd derivative(const GridFunction& u) {
  const int n = u.size();
  const double h = u.grid.step();
  Eigen::MatrixXd d(n, u.dim());
  for (int i = 0; i < n; ++i) {
    d.row(i) = ((u.at(i - 2) - u.at(i + 2)) + 8.0 * (u.at(i + 1) - u.at(i - 1))).transpose() / (12.0 * h);
  }
  return d;
}

double trapezoid(const Eigen::VectorXd& f, double step, int first, int last) {
  if (last <= first) return 0.0;
  double s = 0.5 * (f(first) + f(last));
  for (int i = first + 1; i < last; ++i) s += f(i);
  return s * step;
}

}  // namespace conley
