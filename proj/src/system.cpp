#include "conley/system.hpp"

#include "conley/errors.hpp"

#include <cmath>
#include <string>

namespace conley {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double softplus(double s) { return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s))); }
double log_cosh(double s) {
  const double a = std::abs(s);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

double Polynomial::value(const Eigen::VectorXd& u) const {
  double v = 0.0;
  for (const auto& m : terms) {
    double t = m.coef;
    for (int i = 0; i < dim; ++i) t *= std::pow(u(i), m.powers[i]);
    v += t;
  }
  return v;
}

Eigen::VectorXd Polynomial::gradient(const Eigen::VectorXd& u) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
  for (const auto& m : terms) {
    for (int j = 0; j < dim; ++j) {
      if (m.powers[j] == 0) continue;
      double t = m.coef * m.powers[j];
      for (int i = 0; i < dim; ++i) t *= std::pow(u(i), i == j ? m.powers[i] - 1 : m.powers[i]);
      g(j) += t;
    }
  }
  return g;
}

double Sigmoid::value(double s) const {
  const double x = gain * (s - threshold);
  const double f = kind == SigmoidKind::logistic ? 1.0 / (1.0 + std::exp(-x)) : std::tanh(x);
  return scale * f;
}

double Sigmoid::derivative(double s) const {
  const double x = std::abs(gain * (s - threshold));
  double fp;
  if (kind == SigmoidKind::logistic) {
    const double e = std::exp(-x);
    fp = e / ((1.0 + e) * (1.0 + e));
  } else {
    const double e = std::exp(-2.0 * x);
    fp = 4.0 * e / ((1.0 + e) * (1.0 + e));
  }
  return scale * gain * fp;
}

double Sigmoid::antiderivative(double s) const {
  auto prim = [&](double x) { return kind == SigmoidKind::logistic ? softplus(x) : log_cosh(x); };
  return scale / gain * (prim(gain * (s - threshold)) - prim(-gain * threshold));
}

void SystemSpec::validate() const {
  if (state_dim < 1) throw ConfigError("system.state_dim", "must be positive");
  if (coupling_dim < 1) throw ConfigError("system.coupling_dim", "must be positive");
  std::visit(overloaded{
                 [&](const IdentityCoupling&) {
                   if (coupling_dim != state_dim)
                     throw ConfigError("system.coupling", "identity coupling requires D = d");
                 },
                 [&](const SigmoidCoupling& s) {
                   if (coupling_dim != state_dim)
                     throw ConfigError("system.coupling", "sigmoid coupling requires D = d");
                   if (!(s.sigmoid.gain != 0.0)) throw ConfigError("system.coupling.gain", "must be nonzero");
                 },
                 [&](const PolynomialCoupling& p) {
                   if (static_cast<int>(p.components.size()) != coupling_dim)
                     throw ConfigError("system.coupling.components", "expected D components");
                   for (const auto& c : p.components) {
                     if (c.dim != state_dim)
                       throw ConfigError("system.coupling.components", "component dimension must equal d");
                     for (const auto& m : c.terms)
                       if (static_cast<int>(m.powers.size()) != state_dim)
                         throw ConfigError("system.coupling.components", "monomial exponent count must equal d");
                   }
                 },
             },
             coupling);
  std::visit(overloaded{
                 [&](const PolynomialPotential& p) {
                   if (p.poly.dim != state_dim)
                     throw ConfigError("system.potential", "polynomial dimension must equal d");
                   for (const auto& m : p.poly.terms)
                     if (static_cast<int>(m.powers.size()) != state_dim)
                       throw ConfigError("system.potential.terms", "monomial exponent count must equal d");
                 },
                 [&](const FknPotential& f) {
                   if (state_dim != 2) throw ConfigError("system.potential", "fkn potential requires d = 2");
                   if (f.k < 1) throw ConfigError("system.potential.k", "must be >= 1");
                   if (f.n < 2) throw ConfigError("system.potential.n", "must be >= 2");
                   for (const auto& m : f.extra.terms)
                     if (m.powers.size() != 2)
                       throw ConfigError("system.potential.terms", "monomial exponent count must equal 2");
                 },
                 [&](const NeuralFieldPotential& nf) {
                   if (!(nf.c > 0.0)) throw ConfigError("system.potential.c", "wave speed c must be positive");
                   if (!(nf.sigmoid.gain != 0.0)) throw ConfigError("system.potential.gain", "must be nonzero");
                 },
             },
             potential);
  std::visit(overloaded{
                 [&](const IdentityMetric& m) {
                   if (!(m.scale > 0.0)) throw ConfigError("system.metric.scale", "must be positive");
                 },
                 [&](const CouplingInducedMetric&) {
                   if (coupling_dim != state_dim)
                     throw ConfigError("system.metric", "coupling-induced metric requires D = d");
                   if (std::holds_alternative<PolynomialCoupling>(coupling))
                     throw ConfigError("system.metric", "coupling-induced metric needs identity or sigmoid coupling");
                   if (const auto* s = std::get_if<SigmoidCoupling>(&coupling);
                       s && !(s->sigmoid.scale * s->sigmoid.gain > 0.0))
                     throw ConfigError("system.metric", "coupling-induced metric needs an increasing sigmoid");
                 },
             },
             metric);
  if (kernel.dim() != coupling_dim) throw ConfigError("system.kernel", "kernel dimension must equal D");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("system.beta", "must lie in [0, 1]");
}

Eigen::VectorXd SystemSpec::S(const Eigen::VectorXd& u) const {
  return std::visit(overloaded{
                        [&](const IdentityCoupling&) -> Eigen::VectorXd { return u; },
                        [&](const SigmoidCoupling& s) -> Eigen::VectorXd {
                          Eigen::VectorXd r(u.size());
                          for (int i = 0; i < u.size(); ++i) r(i) = s.sigmoid.value(u(i));
                          return r;
                        },
                        [&](const PolynomialCoupling& p) -> Eigen::VectorXd {
                          Eigen::VectorXd r(p.components.size());
                          for (std::size_t i = 0; i < p.components.size(); ++i) r(i) = p.components[i].value(u);
                          return r;
                        },
                    },
                    coupling);
}

Eigen::MatrixXd SystemSpec::DS(const Eigen::VectorXd& u) const {
  return std::visit(overloaded{
                        [&](const IdentityCoupling&) -> Eigen::MatrixXd {
                          return Eigen::MatrixXd::Identity(state_dim, state_dim);
                        },
                        [&](const SigmoidCoupling& s) -> Eigen::MatrixXd {
                          Eigen::MatrixXd j = Eigen::MatrixXd::Zero(state_dim, state_dim);
                          for (int i = 0; i < state_dim; ++i) j(i, i) = s.sigmoid.derivative(u(i));
                          return j;
                        },
                        [&](const PolynomialCoupling& p) -> Eigen::MatrixXd {
                          Eigen::MatrixXd j(p.components.size(), state_dim);
                          for (std::size_t i = 0; i < p.components.size(); ++i)
                            j.row(i) = p.components[i].gradient(u).transpose();
                          return j;
                        },
                    },
                    coupling);
}

double SystemSpec::F(const Eigen::VectorXd& u) const {
  return std::visit(overloaded{
                        [&](const PolynomialPotential& p) { return p.poly.value(u); },
                        [&](const FknPotential& f) {
                          const double rho = u.norm();
                          const double theta = std::atan2(u(1), u(0));
                          return std::pow(rho, f.n) * std::sin(f.k * theta) + f.extra.value(u);
                        },
                        [&](const NeuralFieldPotential& nf) {
                          double v = 0.0;
                          for (int i = 0; i < u.size(); ++i)
                            v += u(i) * nf.sigmoid.value(u(i)) - nf.sigmoid.antiderivative(u(i));
                          return -v / (nf.c * nf.c);
                        },
                    },
                    potential);
}

Eigen::VectorXd SystemSpec::gradF(const Eigen::VectorXd& u) const {
  return std::visit(overloaded{
                        [&](const PolynomialPotential& p) -> Eigen::VectorXd { return p.poly.gradient(u); },
                        [&](const FknPotential& f) -> Eigen::VectorXd {
                          Eigen::VectorXd g = f.extra.gradient(u);
                          const double rho = u.norm();
                          if (rho == 0.0) return g;
                          const double theta = std::atan2(u(1), u(0));
                          const double radial = f.n * std::pow(rho, f.n - 1) * std::sin(f.k * theta);
                          const double angular = f.k * std::pow(rho, f.n - 1) * std::cos(f.k * theta);
                          const double c = u(0) / rho;
                          const double s = u(1) / rho;
                          g(0) += radial * c - angular * s;
                          g(1) += radial * s + angular * c;
                          return g;
                        },
                        [&](const NeuralFieldPotential& nf) -> Eigen::VectorXd {
                          Eigen::VectorXd g(u.size());
                          for (int i = 0; i < u.size(); ++i)
                            g(i) = -nf.sigmoid.derivative(u(i)) * u(i) / (nf.c * nf.c);
                          return g;
                        },
                    },
                    potential);
}

Eigen::MatrixXd SystemSpec::G(const Eigen::VectorXd& u) const {
  return std::visit(overloaded{
                        [&](const IdentityMetric& m) -> Eigen::MatrixXd {
                          return m.scale * Eigen::MatrixXd::Identity(state_dim, state_dim);
                        },
                        [&](const CouplingInducedMetric&) -> Eigen::MatrixXd {
                          return DS(u).diagonal().asDiagonal();
                        },
                    },
                    metric);
}

Eigen::VectorXd SystemSpec::metric_solve(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  // Builtin metrics are diagonal.
  const Eigen::VectorXd g = G(u).diagonal();
  for (int i = 0; i < g.size(); ++i)
    if (!(g(i) > 0.0) || !std::isfinite(g(i)))
      throw NumericError("metric G(u) is not positive definite");
  return v.cwiseQuotient(g);
}

Eigen::MatrixXd SystemSpec::metric_coupling(const Eigen::VectorXd& u) const {
  const Eigen::VectorXd g = G(u).diagonal();
  for (int i = 0; i < g.size(); ++i)
    if (!(g(i) > 0.0) || !std::isfinite(g(i)))
      throw NumericError("metric G(u) is not positive definite");
  return g.cwiseInverse().asDiagonal() * DS(u).transpose();
}

double SystemSpec::metric_condition(const Eigen::VectorXd& u) const {
  const Eigen::VectorXd g = G(u).diagonal();
  if (g.minCoeff() <= 0.0) return std::numeric_limits<double>::infinity();
  return g.maxCoeff() / g.minCoeff();
}

SystemSpec double_well_system(double epsilon, double tilt, double rate, double decay_rate) {
  SystemSpec s;
  s.state_dim = 1;
  s.coupling_dim = 1;
  Polynomial p{1, {{0.25, {4}}, {-0.5, {2}}}};
  if (tilt != 0.0) p.terms.push_back({tilt, {1}});
  s.potential = PolynomialPotential{p};
  ContinuousTerm t{KernelFamily::exponential, 0.5 * rate * epsilon, rate, Eigen::MatrixXd::Identity(1, 1)};
  s.kernel = Kernel(1, {t}, {}, decay_rate);
  return s;
}

SystemSpec neural_field_system(int dim, double c, const Sigmoid& sigmoid, const Kernel& kernel) {
  SystemSpec s;
  s.state_dim = dim;
  s.coupling_dim = dim;
  Sigmoid scaled = sigmoid;
  scaled.scale = sigmoid.scale / c;
  s.coupling = SigmoidCoupling{scaled};
  s.potential = NeuralFieldPotential{c, sigmoid};
  s.metric = CouplingInducedMetric{};
  s.kernel = kernel;
  s.validate();
  return s;
}

SystemSpec fkn_system(int k, int n, const Kernel& kernel, Polynomial extra) {
  SystemSpec s;
  s.state_dim = 2;
  s.coupling_dim = 2;
  s.potential = FknPotential{k, n, std::move(extra)};
  s.kernel = kernel;
  s.validate();
  return s;
}

}  // namespace conley
