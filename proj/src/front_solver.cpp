#include "conley/front_solver.hpp"

#include "conley/energy.hpp"
#include "conley/errors.hpp"
#include "conley/logging.hpp"
#include "conley/nonlocal.hpp"

#include <Eigen/Eigenvalues>
#include <omp.h>

#include <algorithm>
#include <cmath>

namespace conley {

namespace {

constexpr double kSameEndpoint = 1e-12;
constexpr double kMaxFullResidual = 1e-6;

Eigen::VectorXd pack(const GridFunction& u) {
  const int n = u.size(), d = u.dim();
  Eigen::VectorXd x((n - 2) * d);
  for (int i = 1; i < n - 1; ++i)
    for (int k = 0; k < d; ++k) x((i - 1) * d + k) = u.values(i, k);
  return x;
}

void unpack(const Eigen::VectorXd& x, GridFunction& u) {
  const int n = u.size(), d = u.dim();
  for (int i = 1; i < n - 1; ++i)
    for (int k = 0; k < d; ++k) u.values(i, k) = x((i - 1) * d + k);
}

Eigen::VectorXd residual_vector(const SystemSpec& system, const ConvolutionPlan& plan, const GridFunction& u) {
  const Eigen::MatrixXd r = derivative(u) + phi(system, plan, u);
  const int n = u.size(), d = u.dim();
  Eigen::VectorXd out((n - 2) * d);
  for (int i = 1; i < n - 1; ++i)
    for (int k = 0; k < d; ++k) out((i - 1) * d + k) = r(i, k);
  return out;
}

struct Phase {
  int row = 0;
  int component = 0;
  double target = 0.0;
};

Phase phase_condition(const GridFunction& u, const Eigen::VectorXd& zm, const Eigen::VectorXd& zp) {
  Phase p;
  (zp - zm).cwiseAbs().maxCoeff(&p.component);
  p.target = 0.5 * (zm(p.component) + zp(p.component));
  p.row = (u.grid.center() - 1) * u.dim() + p.component;
  return p;
}

Eigen::VectorXd augmented_residual(const SystemSpec& system, const ConvolutionPlan& plan, const GridFunction& u,
                                   const Phase& phase) {
  Eigen::VectorXd r = residual_vector(system, plan, u);
  r(phase.row) = u.values(u.grid.center(), phase.component) - phase.target;
  return r;
}

double least_singular_value(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, int size) {
  // Inverse power iteration on (JᵀJ)⁻¹.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(size).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 30; ++it) {
    const Eigen::VectorXd w = lu.solve(lu.transpose().solve(v));
    const double nrm = w.norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) return 0.0;
    const double next = nrm;
    v = w / nrm;
    if (it > 3 && std::abs(next - lambda) <= 1e-6 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return 1.0 / std::sqrt(lambda);
}

GridFunction with_endpoints(const GridFunction& seed, const Eigen::VectorXd& zm, const Eigen::VectorXd& zp) {
  GridFunction u(seed.grid, seed.values, zm, zp);
  u.values.row(0) = zm.transpose();
  u.values.row(u.size() - 1) = zp.transpose();
  return u;
}

Front constant_front(const SystemSpec& system, const CriticalPoint& z, const Grid& grid) {
  Front f;
  f.profile = GridFunction::constant(grid, z.z);
  f.z_minus = z;
  f.z_plus = z;
  f.beta = system.beta;
  f.residual = residual(system, f.profile);
  f.e_kin = 0.0;
  return f;
}

}  // namespace

GridFunction tanh_seed(const Grid& grid, const Eigen::VectorXd& zm, const Eigen::VectorXd& zp, double shift) {
  Eigen::MatrixXd v(grid.size(), zm.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double t = 0.5 * (1.0 + std::tanh(grid.x(i) - shift));
    v.row(i) = (zm + t * (zp - zm)).transpose();
  }
  return GridFunction(grid, v, zm, zp);
}

Eigen::MatrixXd residual_jacobian(const SystemSpec& system, const ConvolutionPlan& plan, const GridFunction& u,
                                  double fd_step) {
  const int n = u.size(), d = u.dim();
  const int N = (n - 2) * d;
  const double h = u.grid.step();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N, N);

  static constexpr int offs[4] = {-2, -1, 1, 2};
  static constexpr double coef[4] = {1.0, -8.0, 8.0, -1.0};
  for (int i = 1; i < n - 1; ++i)
    for (int s = 0; s < 4; ++s) {
      const int j = i + offs[s];
      if (j < 1 || j > n - 2) continue;
      for (int k = 0; k < d; ++k) J((i - 1) * d + k, (j - 1) * d + k) += coef[s] / (12.0 * h);
    }

  Eigen::MatrixXd conv;
  const bool nonlocal = system.beta != 0.0;
  if (nonlocal) kernels::convolve(plan, apply_coupling(system, u), conv);
  auto local = [&](const Eigen::VectorXd& w, int i) {
    Eigen::VectorXd r = system.metric_solve(w, system.gradF(w));
    if (nonlocal) r += system.beta * system.metric_coupling(w) * conv.row(i).transpose();
    return r;
  };
  std::vector<Eigen::MatrixXd> left, right;
  if (nonlocal) {
    left.resize(n);
    right.resize(n);
  }
  for (int i = 1; i < n - 1; ++i) {
    const Eigen::VectorXd z = u.values.row(i).transpose();
    const double delta = fd_step * (1.0 + z.norm());
    for (int k = 0; k < d; ++k) {
      Eigen::VectorXd zp = z, zm = z;
      zp(k) += delta;
      zm(k) -= delta;
      J.block((i - 1) * d, (i - 1) * d + k, d, 1) += (local(zp, i) - local(zm, i)) / (2.0 * delta);
    }
    if (nonlocal) {
      left[i] = system.beta * system.metric_coupling(z);
      right[i] = system.DS(z);
    }
  }
  if (nonlocal) kernels::assemble_coupling(plan, left, right, 1, n - 2, J);
  return J;
}

Front solve_front(const SystemSpec& system, const CriticalPoint& z_minus, const CriticalPoint& z_plus,
                  const GridFunction& seed, const SolverOptions& options) {
  const int d = system.state_dim;
  if (seed.dim() != d) throw PreconditionError("seed dimension does not match the system");
  if ((z_minus.z - z_plus.z).norm() < kSameEndpoint) return constant_front(system, z_minus, seed.grid);
  if (!z_minus.hyperbolic() || !z_plus.hyperbolic())
    throw PreconditionError("solve_front: endpoints must be hyperbolic");
  if (z_minus.morse_index - z_plus.morse_index != 1)
    log::debug("solve_front: index gap " + std::to_string(z_minus.morse_index - z_plus.morse_index));

  const ConvolutionPlan plan(system.kernel, seed.grid);
  GridFunction u = with_endpoints(seed, z_minus.z, z_plus.z);
  const Phase phase = phase_condition(u, z_minus.z, z_plus.z);
  Eigen::VectorXd x = pack(u);
  Eigen::VectorXd r = augmented_residual(system, plan, u, phase);
  double norm = r.lpNorm<Eigen::Infinity>();

  Front front;
  int it = 0;
  for (; it <= options.max_iterations; ++it) {
    log::debug("newton iteration " + std::to_string(it) + " residual " + std::to_string(norm));
    if (norm <= options.tolerance) break;
    if (it == options.max_iterations)
      throw NoConvergence("front solver: no convergence after " + std::to_string(it) + " iterations (residual " +
                          std::to_string(norm) + ")");
    Eigen::MatrixXd J = residual_jacobian(system, plan, u, options.fd_step);
    J.row(phase.row).setZero();
    J(phase.row, phase.row) = 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    const double rc = lu.rcond();
    if (!(rc > options.min_rcond))
      throw SingularJacobian("front solver: singular Jacobian (rcond " + std::to_string(rc) +
                             "); try continuation in beta");
    const Eigen::VectorXd dx = lu.solve(-r);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k <= options.damping_retries; ++k, t *= 0.5) {
      const Eigen::VectorXd xt = x + t * dx;
      unpack(xt, u);
      Eigen::VectorXd rt;
      try {
        rt = augmented_residual(system, plan, u, phase);
      } catch (const NumericError&) {
        continue;
      }
      const double nt = rt.lpNorm<Eigen::Infinity>();
      if (std::isfinite(nt) && nt < norm) {
        x = xt;
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      unpack(x, u);
      throw NoConvergence("front solver diverged: residual " + std::to_string(norm) + " not reduced after " +
                          std::to_string(options.damping_retries) + " damped retries");
    }
  }
  unpack(x, u);

  front.profile = u;
  front.z_minus = z_minus;
  front.z_plus = z_plus;
  front.beta = system.beta;
  front.iterations = it;
  front.phase_component = phase.component;
  front.residual = residual(system, plan, u);
  // the phase row hides the equation at the center node
  if (!(front.residual <= kMaxFullResidual))
    throw NoConvergence("front solver: profile solves all but the phase row (residual " +
                        std::to_string(front.residual) + "); no connecting orbit between these endpoints");
  front.e_kin = kinetic_energy(system, u);
  const DecayFit fit = decay_fit(u);
  front.decay_fit_minus = fit.minus;
  front.decay_fit_plus = fit.plus;
  if (options.estimate_singular_value) {
    Eigen::MatrixXd J = residual_jacobian(system, plan, u, options.fd_step);
    J.row(phase.row).setZero();
    J(phase.row, phase.row) = 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    front.least_singular_value = least_singular_value(lu, static_cast<int>(J.rows()));
    front.transversality_warning = front.least_singular_value < options.transversality_threshold;
    if (front.transversality_warning)
      log::info("transversality warning: least singular value " + std::to_string(front.least_singular_value));
  }
  return front;
}

Front continue_in_beta(const SystemSpec& system, const Front& start, const std::vector<double>& beta_path,
                       const SolverOptions& options) {
  Front current = start;
  double beta = start.beta;
  for (double target : beta_path) {
    double step = target - beta;
    bool first = true;
    while (first || std::abs(target - beta) > 1e-15) {
      first = false;
      const double next = std::abs(step) >= std::abs(target - beta) ? target : beta + step;
      SystemSpec sb = system;
      sb.beta = next;
      try {
        const CriticalPoint zm = refine_critical_point(sb, current.z_minus.z);
        const CriticalPoint zp = refine_critical_point(sb, current.z_plus.z);
        current = solve_front(sb, zm, zp, current.profile, options);
        log::debug("continuation reached beta " + std::to_string(next));
        beta = next;
      } catch (const NumericError& e) {
        step *= 0.5;
        if (std::abs(step) < 1.0 / 64.0 - 1e-15)
          throw ContinuationStuck("beta continuation stuck near " + std::to_string(next) + ": " + e.what(), beta);
      }
    }
  }
  return current;
}

double shift_distance(const GridFunction& a, const GridFunction& b, int max_shift) {
  const int n = a.size();
  const double h = a.grid.step();
  double best = std::numeric_limits<double>::infinity();
  for (int s = -max_shift; s <= max_shift; ++s) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += (a.at(i) - b.at(i + s)).squaredNorm();
    best = std::min(best, std::sqrt(sum * h));
  }
  return best;
}

ConnectionCount count_connections(const SystemSpec& system, const CriticalPoint& z_minus,
                                  const CriticalPoint& z_plus, const MultistartConfig& config) {
  ConnectionCount cc;
  cc.z_minus = z_minus;
  cc.z_plus = z_plus;
  if ((z_minus.z - z_plus.z).norm() < kSameEndpoint) return cc;
  const int gap = fredholm_index(z_minus, z_plus);
  if (gap != 1)
    throw PreconditionError("count_connections: index gap must be 1, got " + std::to_string(gap));

  const Grid& grid = config.grid;
  std::vector<GridFunction> seeds;
  for (int s = config.shift_min; s <= config.shift_max; ++s)
    seeds.push_back(tanh_seed(grid, z_minus.z, z_plus.z, s));
  if (system.state_dim >= 2) {
    const PotentialEval e = reduced_potential(system, z_minus.z);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(e.hessian, e.metric);
    const GridFunction line = tanh_seed(grid, z_minus.z, z_plus.z, 0.0);
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      if (es.eigenvalues()(k) >= 0.0) continue;
      const Eigen::VectorXd v = es.eigenvectors().col(k).normalized();
      for (double amp : {config.perturbation, -config.perturbation}) {
        GridFunction g = line;
        for (int i = 0; i < grid.size(); ++i) g.values.row(i) += (amp / std::cosh(grid.x(i))) * v.transpose();
        seeds.push_back(g);
      }
    }
  }
  cc.seeds_tried = static_cast<int>(seeds.size());

  std::vector<std::optional<Front>> results(seeds.size());
  auto run = [&](std::size_t k) {
    try {
      results[k] = solve_front(system, z_minus, z_plus, seeds[k], config.solver);
    } catch (const NumericError& e) {
      log::debug("seed " + std::to_string(k) + " failed: " + e.what());
    }
  };
  if (kernels::workers() > 1) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < seeds.size(); ++k) run(k);
  } else {
    for (std::size_t k = 0; k < seeds.size(); ++k) run(k);
  }

  const double threshold = 1e-3 * std::sqrt(2.0 * grid.half_width());
  const int max_shift = std::max(1, grid.size() / 20);
  for (auto& r : results) {
    if (!r) continue;
    ++cc.seeds_converged;
    if (!(r->e_kin > 1e-8)) continue;
    bool dup = false;
    for (const auto& rep : cc.representatives)
      if (shift_distance(rep.profile, r->profile, max_shift) < threshold) {
        dup = true;
        break;
      }
    if (!dup) cc.representatives.push_back(std::move(*r));
  }
  cc.raw_count = static_cast<int>(cc.representatives.size());
  cc.count_mod2 = cc.raw_count % 2;
  return cc;
}

double translation_kernel_check(const SystemSpec& system, const Front& front) {
  return translation_kernel_check(system, front.profile, derivative(front.profile));
}

double translation_kernel_check(const SystemSpec& system, const GridFunction& u, const Eigen::MatrixXd& du) {
  const int n = u.size(), d = u.dim();
  Eigen::VectorXd v((n - 2) * d);
  for (int i = 1; i < n - 1; ++i)
    for (int k = 0; k < d; ++k) v((i - 1) * d + k) = du(i, k);
  const double vn = v.lpNorm<Eigen::Infinity>();
  if (vn == 0.0) return 0.0;
  const ConvolutionPlan plan(system.kernel, u.grid);
  const Eigen::MatrixXd J = residual_jacobian(system, plan, u);
  return (J * v).lpNorm<Eigen::Infinity>() / vn;
}

std::vector<double> decay_rates(const SystemSpec& system, const CriticalPoint& z, double eta0) {
  if (!z.hyperbolic()) throw PreconditionError("decay_rates: critical point is not hyperbolic");
  auto det = [&](double mu) { return real_symbol(system, z.z, mu).determinant(); };
  constexpr int kScan = 400;
  std::vector<double> roots;
  const double lo = -eta0 * (1.0 - 1e-9);
  const double hi = eta0 * (1.0 - 1e-9);
  double xa = lo, fa = det(lo);
  for (int k = 1; k <= kScan; ++k) {
    const double xb = lo + (hi - lo) * k / kScan;
    const double fb = det(xb);
    if (fa == 0.0) {
      roots.push_back(xa);
    } else if (fa * fb < 0.0) {
      double a = xa, b = xb, fla = fa;
      for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = det(m);
        if (fm == 0.0) {
          a = b = m;
          break;
        }
        if (fla * fm < 0.0) {
          b = m;
        } else {
          a = m;
          fla = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    xa = xb;
    fa = fb;
  }
  std::erase_if(roots, [](double r) { return std::abs(r) < 1e-12; });
  return roots;
}

DecayPrediction predicted_decay(const SystemSpec& system, const CriticalPoint& z_minus, const CriticalPoint& z_plus,
                                double eta0) {
  DecayPrediction p;
  for (double r : decay_rates(system, z_minus, eta0))
    if (r > 0.0 && (!p.minus || r < *p.minus)) p.minus = r;
  for (double r : decay_rates(system, z_plus, eta0))
    if (r < 0.0 && (!p.plus || -r < *p.plus)) p.plus = -r;
  return p;
}

DecayFit decay_fit(const GridFunction& u) {
  DecayFit fit;
  const Grid& g = u.grid;
  auto fit_side = [&](const Eigen::VectorXd& z, bool right) -> std::optional<double> {
    std::vector<double> xs, ys;
    for (int i = 0; i < u.size(); ++i) {
      const double x = g.x(i);
      if (right ? x <= 0.0 : x >= 0.0) continue;
      const double a = (u.values.row(i).transpose() - z).norm();
      if (a > 1e-8 && a < 1e-3) {
        xs.push_back(x);
        ys.push_back(std::log(a));
      }
    }
    if (xs.size() < 5) return std::nullopt;
    Eigen::MatrixXd A(xs.size(), 2);
    Eigen::VectorXd b(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      A(k, 0) = xs[k];
      A(k, 1) = 1.0;
      b(k) = ys[k];
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    return right ? -c(0) : c(0);
  };
  if (u.left_tail) fit.minus = fit_side(*u.left_tail, false);
  if (u.right_tail) fit.plus = fit_side(*u.right_tail, true);
  return fit;
}

}  // namespace conley
