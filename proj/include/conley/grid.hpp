#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>

namespace conley {

/// Uniform grid on [−L, L] with an odd number of nodes, so x = 0 is a node.
class Grid {
 public:
  Grid() = default;
  Grid(double half_width, int nodes);

  /// Rebuilds a grid from explicit node positions; throws ConfigError if the
  /// nodes are not uniform, symmetric and odd in number.
  static Grid from_nodes(std::span<const double> nodes);

  double half_width() const { return half_width_; }
  int size() const { return nodes_; }
  double step() const { return 2.0 * half_width_ / (nodes_ - 1); }
  double x(int i) const { return (i - center()) * step(); }
  int center() const { return (nodes_ - 1) / 2; }
  /// Index of the node at position x, or -1 if x is not (within 1e-9 Δx) a node.
  int node_at(double x) const;

  bool operator==(const Grid&) const = default;

 private:
  double half_width_ = 1.0;
  int nodes_ = 3;
};

/// Values on a grid (n × dim) together with the constant limits used to
/// extend the function beyond [−L, L].
struct GridFunction {
  Grid grid;
  Eigen::MatrixXd values;
  std::optional<Eigen::VectorXd> left_tail;
  std::optional<Eigen::VectorXd> right_tail;

  GridFunction() = default;
  GridFunction(Grid g, Eigen::MatrixXd v, std::optional<Eigen::VectorXd> left = std::nullopt,
               std::optional<Eigen::VectorXd> right = std::nullopt);

  int dim() const { return static_cast<int>(values.cols()); }
  int size() const { return static_cast<int>(values.rows()); }

  /// Node value with constant extension; throws PreconditionError when the
  /// index lies outside the grid and no tail constant was declared.
  Eigen::VectorXd at(int i) const;
  /// Linear interpolation at fractional index position s (s = (x + L)/Δx).
  Eigen::VectorXd at_position(double s) const;

  /// A constant function z on the grid (tails = z).
  static GridFunction constant(const Grid& grid, const Eigen::VectorXd& z);
};

/// Fourth-order (5-point) central difference at every node, using the tail
/// constants beyond the grid. Rows are nodes.
Eigen::MatrixXd derivative(const GridFunction& u);

/// Trapezoid rule of a node-sampled scalar over nodes [first, last].
double trapezoid(const Eigen::VectorXd& f, double step, int first, int last);

}  // namespace conley
