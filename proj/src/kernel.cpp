#include "conley/kernel.hpp"

#include "conley/errors.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

namespace conley {

namespace {

constexpr double kResidualMass = 1e-12;

// ∫_{-1}^{1} (1−t²)² cos(ωt) dt (sign = -1) or cosh(ωt) (sign = +1).
double bump_transform(double omega, double sign) {
  const double w = std::abs(omega);
  if (w < 2.0) {
    // Σ_m (sign ω²)^m/(2m)! · 16/((2m+1)(2m+3)(2m+5))
    double term = 1.0;
    double sum = 0.0;
    for (int m = 0; m < 40; ++m) {
      sum += term * 16.0 / ((2.0 * m + 1) * (2.0 * m + 3) * (2.0 * m + 5));
      term *= sign * w * w / ((2.0 * m + 1) * (2.0 * m + 2));
      if (std::abs(term) < 1e-20) break;
    }
    return sum;
  }
  const double w5 = std::pow(w, 5);
  if (sign < 0) return 16.0 * ((3.0 - w * w) * std::sin(w) - 3.0 * w * std::cos(w)) / w5;
  return 16.0 * ((3.0 + w * w) * std::sinh(w) - 3.0 * w * std::cosh(w)) / w5;
}

bool symmetric(const Eigen::MatrixXd& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + m.cwiseAbs().maxCoeff());
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double ContinuousTerm::profile(double y) const {
  switch (family) {
    case KernelFamily::exponential:
      return a * std::exp(-b * std::abs(y));
    case KernelFamily::gaussian:
      return a * std::exp(-b * y * y);
    case KernelFamily::bump: {
      if (std::abs(y) >= b) return 0.0;
      const double t = 1.0 - (y / b) * (y / b);
      return a * t * t;
    }
  }
  return 0.0;
}

double ContinuousTerm::mass() const {
  switch (family) {
    case KernelFamily::exponential:
      return 2.0 * a / b;
    case KernelFamily::gaussian:
      return a * std::sqrt(std::numbers::pi / b);
    case KernelFamily::bump:
      return a * b * 16.0 / 15.0;
  }
  return 0.0;
}

double ContinuousTerm::upper_tail(double r) const {
  r = std::max(r, 0.0);
  switch (family) {
    case KernelFamily::exponential:
      return a / b * std::exp(-b * r);
    case KernelFamily::gaussian:
      return 0.5 * a * std::sqrt(std::numbers::pi / b) * std::erfc(std::sqrt(b) * r);
    case KernelFamily::bump: {
      if (r >= b) return 0.0;
      const double t = r / b;
      const double prim = t - 2.0 * t * t * t / 3.0 + std::pow(t, 5) / 5.0;
      return a * b * (8.0 / 15.0 - prim);
    }
  }
  return 0.0;
}

double ContinuousTerm::cumulative(double y) const {
  return y < 0.0 ? upper_tail(-y) : mass() - upper_tail(y);
}

double ContinuousTerm::fourier(double xi) const {
  switch (family) {
    case KernelFamily::exponential:
      return 2.0 * a * b / (b * b + xi * xi);
    case KernelFamily::gaussian:
      return a * std::sqrt(std::numbers::pi / b) * std::exp(-xi * xi / (4.0 * b));
    case KernelFamily::bump:
      return a * b * bump_transform(xi * b, -1.0);
  }
  return 0.0;
}

double ContinuousTerm::laplace(double mu) const {
  switch (family) {
    case KernelFamily::exponential:
      if (std::abs(mu) >= b) return std::numeric_limits<double>::infinity();
      return 2.0 * a * b / (b * b - mu * mu);
    case KernelFamily::gaussian:
      return a * std::sqrt(std::numbers::pi / b) * std::exp(mu * mu / (4.0 * b));
    case KernelFamily::bump:
      return a * b * bump_transform(mu * b, 1.0);
  }
  return 0.0;
}

Kernel::Kernel(int dim, std::vector<ContinuousTerm> continuous, std::vector<Atom> atoms,
               double decay_rate, std::optional<double> quadrature_cutoff)
    : dim_(dim),
      continuous_(std::move(continuous)),
      atoms_(std::move(atoms)),
      decay_rate_(decay_rate),
      requested_cutoff_(quadrature_cutoff) {
  if (dim_ < 1) throw ConfigError("kernel", "dimension must be positive");
  if (!(decay_rate_ > 0.0) || !std::isfinite(decay_rate_))
    throw ConfigError("kernel.decay_rate", "must be a positive finite number");

  for (std::size_t i = 0; i < continuous_.size(); ++i) {
    const auto& t = continuous_[i];
    const std::string key = "kernel.continuous[" + std::to_string(i) + "]";
    if (t.weight.rows() != dim_ || t.weight.cols() != dim_)
      throw ConfigError(key + ".weight", "expected a " + std::to_string(dim_) + "x" +
                                             std::to_string(dim_) + " matrix");
    if (!symmetric(t.weight)) throw ConfigError(key + ".weight", "matrix weight must be symmetric");
    if (!(t.b > 0.0) || !std::isfinite(t.b))
      throw ConfigError(key + ".b", "non-integrable kernel: b must be positive");
    if (!std::isfinite(t.a)) throw ConfigError(key + ".a", "must be finite");
    if (t.family == KernelFamily::exponential && !(t.b > decay_rate_))
      throw ConfigError(key + ".b", "exponential rate b must exceed the decay rate eta0");
  }

  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& at = atoms_[i];
    const std::string key = "kernel.atoms[" + std::to_string(i) + "]";
    if (at.weight.rows() != dim_ || at.weight.cols() != dim_)
      throw ConfigError(key + ".weight", "expected a " + std::to_string(dim_) + "x" +
                                             std::to_string(dim_) + " matrix");
    if (!symmetric(at.weight)) throw ConfigError(key + ".weight", "atom weight must be symmetric");
    if (!std::isfinite(at.shift)) throw ConfigError(key + ".shift", "must be finite");
    if (at.shift == 0.0) continue;
    bool mirrored = false;
    for (const auto& other : atoms_) {
      if (std::abs(other.shift + at.shift) <= 1e-12 * (1.0 + std::abs(at.shift)) &&
          (other.weight - at.weight).cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + at.weight.norm())) {
        mirrored = true;
        break;
      }
    }
    if (!mirrored)
      throw ConfigError(key, "atom at shift " + std::to_string(at.shift) +
                                 " has no mirrored partner with equal weight");
  }

  if (requested_cutoff_) {
    if (!(*requested_cutoff_ > 0.0)) throw ConfigError("kernel.quadrature_cutoff", "must be positive");
    cutoff_ = *requested_cutoff_;
  } else if (!continuous_.empty()) {
    auto residual = [&](double r) {
      double m = 0.0;
      for (const auto& t : continuous_) m += 2.0 * std::abs(t.upper_tail(r)) * spectral_norm(t.weight);
      return m;
    };
    double hi = 1.0;
    while (residual(hi) >= kResidualMass) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (residual(mid) >= kResidualMass ? lo : hi) = mid;
    }
    cutoff_ = hi;
  }
}

Eigen::MatrixXd Kernel::density(double y) const {
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& t : continuous_) n += t.profile(y) * t.weight;
  return n;
}

double Kernel::operator_mass() const {
  double c = 0.0;
  for (const auto& t : continuous_) {
    // ∫|profile| = mass for nonnegative a; families are single-signed.
    c += std::abs(t.mass()) * spectral_norm(t.weight);
  }
  for (const auto& at : atoms_) c += spectral_norm(at.weight);
  return c;
}

Eigen::MatrixXcd Kernel::fourier_symbol(double xi) const {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (const auto& t : continuous_) s += std::complex<double>(t.fourier(xi), 0.0) * t.weight.cast<std::complex<double>>();
  for (const auto& at : atoms_)
    s += std::polar(1.0, -at.shift * xi) * at.weight.cast<std::complex<double>>();
  return s;
}

Eigen::MatrixXd Kernel::laplace_symbol(double mu) const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& t : continuous_) s += t.laplace(mu) * t.weight;
  for (const auto& at : atoms_) s += std::exp(-mu * at.shift) * at.weight;
  return s;
}

Kernel Kernel::scaled(double factor) const {
  auto c = continuous_;
  for (auto& t : c) t.a *= factor;
  auto at = atoms_;
  for (auto& x : at) x.weight *= factor;
  return Kernel(dim_, std::move(c), std::move(at), decay_rate_, requested_cutoff_);
}

bool Kernel::operator==(const Kernel& o) const {
  if (dim_ != o.dim_ || decay_rate_ != o.decay_rate_ || requested_cutoff_ != o.requested_cutoff_ ||
      continuous_.size() != o.continuous_.size() || atoms_.size() != o.atoms_.size())
    return false;
  for (std::size_t i = 0; i < continuous_.size(); ++i) {
    const auto& x = continuous_[i];
    const auto& y = o.continuous_[i];
    if (x.family != y.family || x.a != y.a || x.b != y.b || x.weight != y.weight) return false;
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (atoms_[i].shift != o.atoms_[i].shift || atoms_[i].weight != o.atoms_[i].weight) return false;
  return true;
}

Eigen::MatrixXd effective_matrix(const Kernel& kernel) {
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(kernel.dim(), kernel.dim());
  for (const auto& t : kernel.continuous()) n += t.mass() * t.weight;
  for (const auto& at : kernel.atoms()) n += at.weight;
  return 0.5 * (n + n.transpose());
}

Kernel scalar_exponential_kernel(double a, double b, double decay_rate) {
  ContinuousTerm t{KernelFamily::exponential, a, b, Eigen::MatrixXd::Identity(1, 1)};
  return Kernel(1, {t}, {}, decay_rate);
}

}  // namespace conley
