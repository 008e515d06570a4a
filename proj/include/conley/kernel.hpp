#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace conley {

enum class KernelFamily { exponential, gaussian, bump };

/// One scalar profile times a symmetric D×D weight.
///
///   exponential: a·exp(−b|y|)
///   gaussian:    a·exp(−b y²)
///   bump:        a·(1 − (y/b)²)² on |y| < b, zero outside (b is the support radius)
struct ContinuousTerm {
  KernelFamily family = KernelFamily::exponential;
  double a = 0.0;
  double b = 1.0;
  Eigen::MatrixXd weight;

  double profile(double y) const;
  double mass() const;
  /// ∫_r^∞ profile, r ≥ 0.
  double upper_tail(double r) const;
  /// ∫_{-∞}^y profile.
  double cumulative(double y) const;
  /// ∫ profile(y) e^{-iξy} dy; real because the profile is even.
  double fourier(double xi) const;
  /// ∫ profile(y) e^{-μy} dy. Infinite for the exponential family when |μ| ≥ b.
  double laplace(double mu) const;
};

struct Atom {
  double shift = 0.0;
  Eigen::MatrixXd weight;
};

/// Matrix-valued convolution kernel: a continuous density plus discrete
/// shifted atoms. Even in y, symmetric matrix weights, atoms in mirrored pairs.
class Kernel {
 public:
  Kernel() = default;
  /// Validates every invariant; throws ConfigError (key prefixed "kernel.").
  Kernel(int dim, std::vector<ContinuousTerm> continuous, std::vector<Atom> atoms,
         double decay_rate, std::optional<double> quadrature_cutoff = std::nullopt);

  int dim() const { return dim_; }
  const std::vector<ContinuousTerm>& continuous() const { return continuous_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double decay_rate() const { return decay_rate_; }
  const std::optional<double>& requested_cutoff() const { return requested_cutoff_; }

  /// N(y) for the continuous part.
  Eigen::MatrixXd density(double y) const;
  /// Truncation radius: explicit cutoff if given, otherwise the radius where
  /// the residual continuous mass drops below 1e-12.
  double cutoff() const { return cutoff_; }
  /// ∫‖N(x)‖dx + Σ‖N_j‖ in the spectral norm.
  double operator_mass() const;

  Eigen::MatrixXcd fourier_symbol(double xi) const;
  /// ∫N(y)e^{-μy}dy + Σ N_j e^{-μλ_j}, defined for |μ| < decay_rate().
  Eigen::MatrixXd laplace_symbol(double mu) const;

  /// Sum of weights of all parts scaled by `factor` (used for ε-scaling).
  Kernel scaled(double factor) const;

  bool operator==(const Kernel&) const;

 private:
  int dim_ = 0;
  std::vector<ContinuousTerm> continuous_;
  std::vector<Atom> atoms_;
  double decay_rate_ = 1.0;
  std::optional<double> requested_cutoff_;
  double cutoff_ = 0.0;
};

/// Ñ = ∫N + ΣN_j, by closed form.
Eigen::MatrixXd effective_matrix(const Kernel& kernel);

/// Convenience: scalar exponential a·e^{-b|y|}.
Kernel scalar_exponential_kernel(double a, double b, double decay_rate);

}  // namespace conley
