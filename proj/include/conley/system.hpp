#pragma once

#include "conley/kernel.hpp"

#include <Eigen/Dense>

#include <variant>
#include <vector>

namespace conley {

/// c · Π u_i^{p_i}
struct Monomial {
  double coef = 0.0;
  std::vector<int> powers;
  bool operator==(const Monomial&) const = default;
};

struct Polynomial {
  int dim = 1;
  std::vector<Monomial> terms;

  double value(const Eigen::VectorXd& u) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const;
  bool operator==(const Polynomial&) const = default;
};

enum class SigmoidKind { logistic, tanh };

/// σ(s) = scale · f(gain · (s − threshold)), f ∈ {logistic, tanh}.
struct Sigmoid {
  SigmoidKind kind = SigmoidKind::logistic;
  double scale = 1.0;
  double gain = 1.0;
  double threshold = 0.0;

  double value(double s) const;
  double derivative(double s) const;
  /// ∫_0^s σ(r) dr
  double antiderivative(double s) const;
  bool operator==(const Sigmoid&) const = default;
};

// Coupling maps S : R^d -> R^D.
struct IdentityCoupling {
  bool operator==(const IdentityCoupling&) const = default;
};
struct SigmoidCoupling {
  Sigmoid sigmoid;
  bool operator==(const SigmoidCoupling&) const = default;
};
struct PolynomialCoupling {
  std::vector<Polynomial> components;
  bool operator==(const PolynomialCoupling&) const = default;
};
using Coupling = std::variant<IdentityCoupling, SigmoidCoupling, PolynomialCoupling>;

// Potentials F : R^d -> R.
struct PolynomialPotential {
  Polynomial poly;
  bool operator==(const PolynomialPotential&) const = default;
};
/// ρⁿ sin(kθ) in polar coordinates on R², plus a polynomial.
struct FknPotential {
  int k = 1;
  int n = 3;
  Polynomial extra{2, {}};
  bool operator==(const FknPotential&) const = default;
};
/// −c⁻² Σ_i ∫_0^{u_i} σ'(s) s ds; with S = c⁻¹σ and the DS-induced metric
/// its metric gradient is −u/c.
struct NeuralFieldPotential {
  double c = 1.0;
  Sigmoid sigmoid;
  bool operator==(const NeuralFieldPotential&) const = default;
};
using Potential = std::variant<PolynomialPotential, FknPotential, NeuralFieldPotential>;

// Metrics G(u), symmetric positive definite.
struct IdentityMetric {
  double scale = 1.0;
  bool operator==(const IdentityMetric&) const = default;
};
/// G(u) = diag(DS(u)); requires a componentwise increasing coupling.
struct CouplingInducedMetric {
  bool operator==(const CouplingInducedMetric&) const = default;
};
using Metric = std::variant<IdentityMetric, CouplingInducedMetric>;

/// The data (d, D, S, F, G, kernel, β) defining Φ_β and the reduced potential.
struct SystemSpec {
  int state_dim = 1;
  int coupling_dim = 1;
  Coupling coupling = IdentityCoupling{};
  Potential potential = PolynomialPotential{};
  Metric metric = IdentityMetric{};
  Kernel kernel;
  double beta = 1.0;

  /// Throws ConfigError naming the inconsistent key.
  void validate() const;

  Eigen::VectorXd S(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd DS(const Eigen::VectorXd& u) const;
  double F(const Eigen::VectorXd& u) const;
  Eigen::VectorXd gradF(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd G(const Eigen::VectorXd& u) const;

  /// G(u)⁻¹ v. Throws NumericError if G(u) is not positive definite.
  Eigen::VectorXd metric_solve(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  /// G(u)⁻¹ DS(u)ᵀ, the transpose of the metric gradient of S.
  Eigen::MatrixXd metric_coupling(const Eigen::VectorXd& u) const;
  /// Condition number of G(u).
  double metric_condition(const Eigen::VectorXd& u) const;

  bool operator==(const SystemSpec&) const = default;
};

/// Scalar double well F = z⁴/4 − z²/2 + tilt·z, S = id, G = 1, with kernel
/// ε·(b/2)e^{−b|x|} (unit mass times ε).
SystemSpec double_well_system(double epsilon, double tilt = 0.0, double rate = 4.0,
                              double decay_rate = 3.5);

/// d-layer neural field: S = c⁻¹σ, F as NeuralFieldPotential, G = diag(DS).
SystemSpec neural_field_system(int dim, double c, const Sigmoid& sigmoid, const Kernel& kernel);

/// F = ρⁿ sin(kθ) + extra on R², S = id, G = I.
SystemSpec fkn_system(int k, int n, const Kernel& kernel, Polynomial extra = {2, {}});

}  // namespace conley
