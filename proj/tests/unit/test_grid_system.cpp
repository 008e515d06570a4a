#include "conley/errors.hpp"
#include "conley/grid.hpp"
#include "conley/system.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace conley;

TEST_CASE("grid validation") {
  CHECK_NOTHROW(Grid(40.0, 4001));
  try {
    Grid(40.0, 4000);
    FAIL("even node count accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "grid.n");
  }
  CHECK_THROWS_AS(Grid(-1.0, 101), ConfigError);
  const Grid g(10.0, 201);
  CHECK(g.step() == doctest::Approx(0.1));
  CHECK(g.x(g.center()) == 0.0);
  CHECK(g.node_at(2.5) == 125);
  CHECK(g.node_at(2.55) == -1);
  std::vector<double> nodes;
  for (int i = 0; i < g.size(); ++i) nodes.push_back(g.x(i));
  const Grid rebuilt = Grid::from_nodes(nodes);
  CHECK(rebuilt.size() == g.size());
  CHECK(rebuilt.half_width() == doctest::Approx(g.half_width()).epsilon(1e-15));
  nodes[7] += 1e-3;
  CHECK_THROWS_AS(Grid::from_nodes(nodes), ConfigError);
}

TEST_CASE("five-point derivative with tails") {
  const Grid g(20.0, 2001);
  Eigen::MatrixXd v(g.size(), 1);
  for (int i = 0; i < g.size(); ++i) v(i, 0) = std::tanh(g.x(i));
  const GridFunction u(g, v, Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0));
  const Eigen::MatrixXd d = derivative(u);
  double err = 0.0;
  for (int i = 0; i < g.size(); ++i) err = std::max(err, std::abs(d(i, 0) - 1.0 / std::pow(std::cosh(g.x(i)), 2)));
  CHECK(err < 1e-6);
  const GridFunction no_tails(g, v);
  CHECK_THROWS_AS(no_tails.at(-1), PreconditionError);
  CHECK(u.at(-5)(0) == -1.0);
  CHECK(u.at_position(1000.5)(0) == doctest::Approx(0.5 * (std::tanh(0.0) + std::tanh(0.02))));
}

namespace {

SystemSpec sample_system(int which) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(2, 2);
  const Kernel k2(2, {{KernelFamily::gaussian, 1.0, 1.0, w}}, {}, 0.5);
  switch (which) {
    case 0:
      return double_well_system(0.3, 0.1);
    case 1:
      return neural_field_system(2, 2.0, Sigmoid{SigmoidKind::logistic, 1.0, 1.5, 0.2}, k2);
    case 2:
      return fkn_system(3, 4, k2, Polynomial{2, {{0.3, {2, 0}}, {-0.1, {1, 1}}}});
    default: {
      SystemSpec s;
      s.state_dim = 2;
      s.coupling_dim = 2;
      s.coupling = PolynomialCoupling{{Polynomial{2, {{1.0, {1, 0}}, {0.2, {0, 3}}}},
                                       Polynomial{2, {{1.0, {0, 1}}, {-0.3, {2, 1}}}}}};
      s.potential = PolynomialPotential{Polynomial{2, {{0.25, {4, 0}}, {0.25, {0, 4}}, {-0.5, {2, 0}}}}};
      s.metric = IdentityMetric{2.0};
      s.kernel = k2;
      s.validate();
      return s;
    }
  }
}

}  // namespace

TEST_CASE("DS and grad F match central differences on random points") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> pick(-1.5, 1.5);
  for (int which = 0; which < 4; ++which) {
    const SystemSpec s = sample_system(which);
    const int d = s.state_dim;
    for (int t = 0; t < 100; ++t) {
      Eigen::VectorXd u(d);
      for (int i = 0; i < d; ++i) u[i] = pick(rng);
      if (which == 2 && u.norm() < 0.1) continue;
      const Eigen::MatrixXd ds = s.DS(u);
      const Eigen::VectorXd gf = s.gradF(u);
      for (int j = 0; j < d; ++j) {
        const double h = 1e-6 * (1.0 + std::abs(u[j]));
        Eigen::VectorXd up = u, um = u;
        up[j] += h;
        um[j] -= h;
        const Eigen::VectorXd col = (s.S(up) - s.S(um)) / (2 * h);
        CHECK((col - ds.col(j)).norm() <= 1e-6 * std::max(1.0, ds.col(j).norm()));
        const double fd = (s.F(up) - s.F(um)) / (2 * h);
        CHECK(std::abs(fd - gf[j]) <= 1e-6 * std::max(1.0, std::abs(gf[j])));
      }
      const Eigen::MatrixXd g = s.G(u);
      CHECK((g - g.transpose()).norm() == 0.0);
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("neural field metric gradient of F is -u/c") {
  const Kernel k(3, {{KernelFamily::exponential, 0.5, 1.0, Eigen::MatrixXd::Identity(3, 3)}}, {}, 0.5);
  const SystemSpec s = neural_field_system(3, 2.0, Sigmoid{SigmoidKind::tanh, 1.0, 0.7, 0.1}, k);
  const Eigen::Vector3d u(0.3, -1.2, 2.5);
  CHECK((s.metric_solve(u, s.gradF(u)) + u / 2.0).norm() < 1e-13);
  CHECK((s.metric_coupling(u) - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-13);
}

TEST_CASE("system validation names the key") {
  SystemSpec s = double_well_system(0.1);
  s.state_dim = 2;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  SystemSpec f = fkn_system(2, 4, Kernel(2, {{KernelFamily::gaussian, 1.0, 1.0, Eigen::MatrixXd::Identity(2, 2)}}, {}, 0.5));
  f.potential = FknPotential{0, 4, {2, {}}};
  try {
    f.validate();
    FAIL("k = 0 accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "system.potential.k");
  }
}

TEST_CASE("sigmoid antiderivative") {
  for (auto kind : {SigmoidKind::logistic, SigmoidKind::tanh}) {
    const Sigmoid sg{kind, 1.3, 0.8, 0.4};
    const double a = sg.antiderivative(1.7);
    double trap = 0.0;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) trap += (i == 0 || i == n ? 0.5 : 1.0) * sg.value(1.7 * i / n);
    CHECK(a == doctest::Approx(trap * 1.7 / n).epsilon(1e-8));
  }
}
