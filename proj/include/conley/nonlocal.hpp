#pragma once

#include "conley/grid.hpp"
#include "conley/kernel.hpp"
#include "conley/parallel_kernels.hpp"
#include "conley/system.hpp"

#include <Eigen/Dense>

namespace conley {

/// 𝒩[v] at every node; v is extended by its tail constants.
GridFunction convolve(const Kernel& kernel, const GridFunction& v);

/// S(u) nodewise, tails mapped through S.
GridFunction apply_coupling(const SystemSpec& system, const GridFunction& u);

/// Φ_β(u) = β G⁻¹DSᵀ 𝒩[S(u)] + G⁻¹∇F(u) at every node (rows).
/// Throws NumericError where cond G(u) exceeds 1e12.
Eigen::MatrixXd phi(const SystemSpec& system, const GridFunction& u);
Eigen::MatrixXd phi(const SystemSpec& system, const ConvolutionPlan& plan, const GridFunction& u);

}  // namespace conley
