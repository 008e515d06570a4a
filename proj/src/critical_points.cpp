#include "conley/critical_points.hpp"

#include "conley/errors.hpp"
#include "conley/logging.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>

namespace conley {

namespace {

Eigen::MatrixXd fd_hessian(const SystemSpec& system, const Eigen::VectorXd& z, double h) {
  const int d = static_cast<int>(z.size());
  Eigen::MatrixXd H(d, d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd zp = z, zm = z;
    zp(j) += h;
    zm(j) -= h;
    H.col(j) = (reduced_gradient(system, zp) - reduced_gradient(system, zm)) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

Eigen::MatrixXd coupling_term(const SystemSpec& system, const Eigen::VectorXd& z, const Eigen::MatrixXd& nhat) {
  return system.beta * system.metric_coupling(z) * nhat * system.DS(z);
}

void require_critical(const SystemSpec& system, const Eigen::VectorXd& z) {
  const double g = metric_gradient(system, z).norm();
  if (g > 1e-8)
    throw PreconditionError("symbol: z is not a critical point (|grad_g h| = " + std::to_string(g) + ")");
}

bool inside(const SearchBox& box, const Eigen::VectorXd& z) {
  for (int i = 0; i < z.size(); ++i) {
    const double slack = 1e-9 * (1.0 + box.upper(i) - box.lower(i));
    if (z(i) < box.lower(i) - slack || z(i) > box.upper(i) + slack) return false;
  }
  return true;
}

std::optional<Eigen::VectorXd> newton(const SystemSpec& system, Eigen::VectorXd z) {
  Eigen::VectorXd g = reduced_gradient(system, z);
  double merit = g.norm();
  for (int it = 0; it < 200 && std::isfinite(merit); ++it) {
    const Eigen::MatrixXd H = fd_hessian(system, z, 1e-8 * (1.0 + z.norm()));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(H);
    if (!lu.isInvertible()) break;
    const Eigen::VectorXd step = lu.solve(-g);
    if (!step.allFinite()) break;
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k, t *= 0.5) {
      const Eigen::VectorXd trial = z + t * step;
      const Eigen::VectorXd gt = reduced_gradient(system, trial);
      if (gt.norm() < merit) {
        z = trial;
        g = gt;
        merit = gt.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted || t * step.norm() < 1e-14 * (1.0 + z.norm())) break;
  }
  if (!(merit < 1e-10)) return std::nullopt;
  return z;
}

}  // namespace

double reduced_value(const SystemSpec& system, const Eigen::VectorXd& z) {
  const Eigen::VectorXd s = system.S(z);
  return 0.5 * system.beta * s.dot(effective_matrix(system.kernel) * s) + system.F(z);
}

Eigen::VectorXd reduced_gradient(const SystemSpec& system, const Eigen::VectorXd& z) {
  return system.beta * system.DS(z).transpose() * (effective_matrix(system.kernel) * system.S(z)) +
         system.gradF(z);
}

Eigen::VectorXd metric_gradient(const SystemSpec& system, const Eigen::VectorXd& z) {
  return system.metric_solve(z, reduced_gradient(system, z));
}

PotentialEval reduced_potential(const SystemSpec& system, const Eigen::VectorXd& z) {
  PotentialEval e;
  e.h = reduced_value(system, z);
  e.grad = reduced_gradient(system, z);
  e.hessian = fd_hessian(system, z, 1e-5 * (1.0 + z.norm()));
  e.metric = system.G(z);
  return e;
}

CriticalPoint analyse_point(const SystemSpec& system, const Eigen::VectorXd& z) {
  const PotentialEval e = reduced_potential(system, z);
  Eigen::LLT<Eigen::MatrixXd> llt(e.metric);
  if (llt.info() != Eigen::Success) throw NumericError("metric G(z) is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(e.hessian, e.metric, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("generalized eigenproblem failed");
  CriticalPoint cp;
  cp.z = z;
  cp.h_value = e.h;
  cp.gradient_norm = e.grad.norm();
  const Eigen::VectorXd lam = es.eigenvalues();
  cp.morse_index = static_cast<int>((lam.array() < 0.0).count());
  cp.hyperbolicity_margin = lam.cwiseAbs().minCoeff();
  return cp;
}

std::vector<CriticalPoint> find_critical_points(const SystemSpec& system, const SearchBox& box, int n_seeds) {
  const int d = system.state_dim;
  if (box.lower.size() != d || box.upper.size() != d)
    throw PreconditionError("search box dimension does not match the system");
  if (n_seeds < 1) throw PreconditionError("n_seeds must be positive");
  std::vector<Eigen::VectorXd> found;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= n_seeds;
  std::vector<int> idx(d, 0);
  for (long s = 0; s < total; ++s) {
    long r = s;
    Eigen::VectorXd seed(d);
    for (int i = 0; i < d; ++i) {
      idx[i] = static_cast<int>(r % n_seeds);
      r /= n_seeds;
      const double t = n_seeds == 1 ? 0.5 : static_cast<double>(idx[i]) / (n_seeds - 1);
      seed(i) = box.lower(i) + t * (box.upper(i) - box.lower(i));
    }
    auto z = newton(system, seed);
    if (!z || !inside(box, *z)) continue;
    bool dup = false;
    for (const auto& f : found)
      if ((f - *z).norm() < 1e-6) {
        dup = true;
        break;
      }
    if (!dup) found.push_back(*z);
  }
  std::sort(found.begin(), found.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  std::vector<CriticalPoint> out;
  for (const auto& z : found) {
    out.push_back(analyse_point(system, z));
    if (!out.back().hyperbolic()) log::info("degenerate critical point (margin " +
                                            std::to_string(out.back().hyperbolicity_margin) + ")");
  }
  return out;
}

CriticalPoint refine_critical_point(const SystemSpec& system, const Eigen::VectorXd& z) {
  auto r = newton(system, z);
  if (!r) throw NoConvergence("critical point refinement did not converge");
  return analyse_point(system, *r);
}

Eigen::MatrixXd metric_gradient_jacobian(const SystemSpec& system, const Eigen::VectorXd& z) {
  const int d = static_cast<int>(z.size());
  const double h = 1e-5 * (1.0 + z.norm());
  Eigen::MatrixXd J(d, d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd zp = z, zm = z;
    zp(j) += h;
    zm(j) -= h;
    J.col(j) = (metric_gradient(system, zp) - metric_gradient(system, zm)) / (2.0 * h);
  }
  return J;
}

Eigen::MatrixXcd symbol(const SystemSpec& system, const Eigen::VectorXd& z, double xi) {
  require_critical(system, z);
  const int d = system.state_dim;
  const Eigen::MatrixXd pz =
      metric_gradient_jacobian(system, z) - coupling_term(system, z, effective_matrix(system.kernel));
  const Eigen::MatrixXcd nhat = system.kernel.fourier_symbol(xi);
  Eigen::MatrixXcd L = pz.cast<std::complex<double>>();
  L += system.beta * system.metric_coupling(z).cast<std::complex<double>>() * nhat *
       system.DS(z).cast<std::complex<double>>();
  L.diagonal().array() += std::complex<double>(0.0, xi);
  (void)d;
  return L;
}

Eigen::MatrixXd real_symbol(const SystemSpec& system, const Eigen::VectorXd& z, double mu) {
  require_critical(system, z);
  const Eigen::MatrixXd pz =
      metric_gradient_jacobian(system, z) - coupling_term(system, z, effective_matrix(system.kernel));
  Eigen::MatrixXd L = pz + coupling_term(system, z, system.kernel.laplace_symbol(mu));
  L.diagonal().array() += mu;
  return L;
}

HyperbolicityScan hyperbolicity_scan(const SystemSpec& system, const Eigen::VectorXd& z, double xi_max, int n) {
  if (n < 2) throw PreconditionError("hyperbolicity scan needs at least two samples");
  HyperbolicityScan r;
  r.min_abs_det = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double xi = -xi_max + 2.0 * xi_max * k / (n - 1);
    const double a = std::abs(symbol(system, z, xi).determinant());
    if (a < r.min_abs_det) {
      r.min_abs_det = a;
      r.argmin_xi = xi;
    }
    r.max_imag_symbol = std::max(r.max_imag_symbol, system.kernel.fourier_symbol(xi).imag().cwiseAbs().maxCoeff());
  }
  const Eigen::MatrixXd jac = metric_gradient_jacobian(system, z);
  const Eigen::MatrixXcd l0 = symbol(system, z, 0.0);
  r.l0_mismatch = (l0 - jac.cast<std::complex<double>>()).cwiseAbs().maxCoeff() /
                  std::max(1.0, jac.cwiseAbs().maxCoeff());
  return r;
}

int fredholm_index(const CriticalPoint& z_minus, const CriticalPoint& z_plus) {
  if (!z_minus.hyperbolic() || !z_plus.hyperbolic())
    throw PreconditionError("fredholm_index: endpoints must be hyperbolic");
  return z_minus.morse_index - z_plus.morse_index;
}

double localiser(int ell, double rho, double y) {
  if (ell < 1 || !(rho > 0.0)) throw PreconditionError("localiser needs l >= 1 and rho > 0");
  if (!(y > rho && y < 2.0 * rho)) return 0.0;
  const double t = 2.0 * y / rho - 3.0;
  return std::exp(-1.0 / (ell * (1.0 - t * t)));
}

double rho_of(const Eigen::VectorXd& z, const std::vector<Eigen::VectorXd>& crit) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : crit) {
    const double dist = (c - z).norm();
    if (dist > 0.0) best = std::min(best, dist);
  }
  return best / 3.0;
}

double sigma(int ell, const Eigen::VectorXd& z, const Eigen::VectorXd& u, const std::vector<Eigen::VectorXd>& crit) {
  const double rho = rho_of(z, crit);
  if (!std::isfinite(rho)) return 0.0;
  return localiser(ell, rho, (u - z).norm());
}

}  // namespace conley
