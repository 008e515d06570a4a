#include "conley/nonlocal.hpp"

#include "conley/errors.hpp"

namespace conley {

GridFunction convolve(const Kernel& kernel, const GridFunction& v) {
  if (v.dim() != kernel.dim()) throw PreconditionError("convolve: function dimension does not match kernel");
  ConvolutionPlan plan(kernel, v.grid);
  GridFunction out;
  out.grid = v.grid;
  kernels::convolve(plan, v, out.values);
  const Eigen::MatrixXd nt = effective_matrix(kernel);
  if (v.left_tail) out.left_tail = nt * *v.left_tail;
  if (v.right_tail) out.right_tail = nt * *v.right_tail;
  return out;
}

GridFunction apply_coupling(const SystemSpec& system, const GridFunction& u) {
  GridFunction s;
  s.grid = u.grid;
  s.values.resize(u.size(), system.coupling_dim);
  for (int i = 0; i < u.size(); ++i) s.values.row(i) = system.S(u.values.row(i).transpose()).transpose();
  if (u.left_tail) s.left_tail = system.S(*u.left_tail);
  if (u.right_tail) s.right_tail = system.S(*u.right_tail);
  return s;
}

Eigen::MatrixXd phi(const SystemSpec& system, const GridFunction& u) {
  return phi(system, ConvolutionPlan(system.kernel, u.grid), u);
}

Eigen::MatrixXd phi(const SystemSpec& system, const ConvolutionPlan& plan, const GridFunction& u) {
  if (u.dim() != system.state_dim) throw PreconditionError("phi: profile dimension does not match the system");
  const int n = u.size();
  Eigen::MatrixXd conv;
  if (system.beta != 0.0) kernels::convolve(plan, apply_coupling(system, u), conv);
  Eigen::MatrixXd out(n, system.state_dim);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd z = u.values.row(i).transpose();
    if (system.metric_condition(z) > 1e12)
      throw NumericError("metric G(u) is singular (condition number > 1e12) at node " + std::to_string(i));
    Eigen::VectorXd r = system.metric_solve(z, system.gradF(z));
    if (system.beta != 0.0) r += system.beta * system.metric_coupling(z) * conv.row(i).transpose();
    out.row(i) = r.transpose();
  }
  return out;
}

}  // namespace conley
