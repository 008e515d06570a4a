#pragma once

#include "conley/grid.hpp"
#include "conley/kernel.hpp"

#include <Eigen/Dense>

#include <vector>

namespace conley {

/// Product-quadrature weights of a kernel on a uniform grid step: v is
/// interpolated by piecewise-cubic Lagrange polynomials, the kernel is
/// integrated against each cardinal function (Gauss–Legendre per cell), and
/// the mass beyond the truncation radius is folded into the outermost weight.
/// Constants are therefore reproduced to roundoff.
struct ConvolutionPlan {
  struct Term {
    std::vector<double> weights;  // w[k], k = 0..reach (w[−k] = w[k])
    std::vector<double> prefix;   // prefix[k] = Σ_{m ≤ k} w[m]
    Eigen::MatrixXd matrix;
  };
  struct Shift {
    double offset;  // λ/Δx
    Eigen::MatrixXd matrix;
  };

  ConvolutionPlan() = default;
  ConvolutionPlan(const Kernel& kernel, const Grid& grid);

  Grid grid;
  int dim = 0;
  std::vector<Term> terms;
  std::vector<Shift> shifts;

  int reach() const;
};

namespace kernels {

/// Worker count used by the dispatching entry points below (1 = serial path).
void set_workers(int workers);
int workers();

/// out(i, :) = 𝒩[v](x_i) for every node.
void convolve_serial(const ConvolutionPlan& plan, const GridFunction& v, Eigen::MatrixXd& out);
void convolve_omp(const ConvolutionPlan& plan, const GridFunction& v, Eigen::MatrixXd& out);
void convolve(const ConvolutionPlan& plan, const GridFunction& v, Eigen::MatrixXd& out);

/// 𝒩[v](x_i) at a single node.
Eigen::VectorXd convolve_node(const ConvolutionPlan& plan, const GridFunction& v, int i);

/// Adds the coupling blocks  left[i] · W(i, j) · right[j]  to `jac` for the
/// unknown nodes i, j ∈ [first, last]; row/column block of node i starts at
/// (i − first)·d. W(i, j) is the convolution weight between nodes i and j.
void assemble_coupling_serial(const ConvolutionPlan& plan, const std::vector<Eigen::MatrixXd>& left,
                              const std::vector<Eigen::MatrixXd>& right, int first, int last,
                              Eigen::MatrixXd& jac);
void assemble_coupling_omp(const ConvolutionPlan& plan, const std::vector<Eigen::MatrixXd>& left,
                           const std::vector<Eigen::MatrixXd>& right, int first, int last,
                           Eigen::MatrixXd& jac);
void assemble_coupling(const ConvolutionPlan& plan, const std::vector<Eigen::MatrixXd>& left,
                       const std::vector<Eigen::MatrixXd>& right, int first, int last, Eigen::MatrixXd& jac);

/// Nonlocal boundary term of the quasi-Lyapunov functional at node p:
///   ½ ∫ ∫_{x_p}^{x_p+y} s(x−y) · N(y) q(x) dx dy  (+ the atom sums),
/// with s = S(u) extended by its tails and q = DS(u)u' vanishing off the grid.
double boundary_term_serial(const ConvolutionPlan& plan, const GridFunction& s, const Eigen::MatrixXd& q,
                            int p);
double boundary_term_omp(const ConvolutionPlan& plan, const GridFunction& s, const Eigen::MatrixXd& q, int p);
double boundary_term(const ConvolutionPlan& plan, const GridFunction& s, const Eigen::MatrixXd& q, int p);

}  // namespace kernels
}  // namespace conley
