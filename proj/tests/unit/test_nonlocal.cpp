#include "conley/errors.hpp"
#include "conley/nonlocal.hpp"
#include "conley/parallel_kernels.hpp"
#include "oracles/oracle_values.hpp"

#include <doctest.h>

#include <cmath>

using namespace conley;

namespace {

Eigen::MatrixXd scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

GridFunction tanh_function(const Grid& g) {
  Eigen::MatrixXd v(g.size(), 1);
  for (int i = 0; i < g.size(); ++i) v(i, 0) = std::tanh(g.x(i));
  return GridFunction(g, v, Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0));
}

std::vector<Kernel> builtin_kernels() {
  Eigen::MatrixXd w(2, 2);
  w << 1.0, 0.4, 0.4, 0.7;
  return {
      Kernel(2, {{KernelFamily::exponential, 0.5, 1.0, w}}, {}, 0.5),
      Kernel(2, {{KernelFamily::gaussian, 1.3, 0.8, w}}, {}, 0.5),
      Kernel(2, {{KernelFamily::bump, 0.9, 1.7, w}}, {}, 0.5),
      Kernel(2, {}, {{0.0, w}, {1.3, 0.5 * w}, {-1.3, 0.5 * w}, {2.71, w}, {-2.71, w}}, 0.5),
      Kernel(2, {{KernelFamily::exponential, 0.5, 1.0, w}, {KernelFamily::gaussian, 0.2, 3.0, w}},
             {{0.37, w}, {-0.37, w}}, 0.5),
  };
}

}  // namespace

TEST_CASE("constants are eigenfunctions of the nonlocal operator") {
  const Grid g(40.0, 4001);
  Eigen::VectorXd z(2);
  z << 0.7, -1.9;
  for (const Kernel& k : builtin_kernels()) {
    const GridFunction c = GridFunction::constant(g, z);
    const GridFunction out = convolve(k, c);
    const Eigen::VectorXd expected = effective_matrix(k) * z;
    double err = 0.0;
    for (int i = 0; i < g.size(); ++i) err = std::max(err, (out.values.row(i).transpose() - expected).cwiseAbs().maxCoeff());
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("tanh convolution against an adaptive quadrature oracle") {
  const Grid g(40.0, 4001);
  const Kernel k(1, {{KernelFamily::exponential, 0.5, 1.0, scalar(1.0)}}, {}, 0.5);
  const GridFunction out = convolve(k, tanh_function(g));
  CHECK(std::abs(out.values(g.center(), 0)) < 1e-14);
  CHECK(std::abs(out.values(g.node_at(1.0), 0) - oracle::kConvTanh1) <= 1e-6);
  CHECK(std::abs(out.values(g.node_at(5.0), 0) - oracle::kConvTanh5) <= 1e-6);
  CHECK(std::abs(out.values(g.node_at(20.0), 0) - oracle::kConvTanh20) <= 1e-6);
  CHECK(std::abs(out.values(g.node_at(-5.0), 0) + oracle::kConvTanh5) <= 1e-6);
}

TEST_CASE("atoms between nodes and beyond the window") {
  const Grid g(10.0, 1001);
  const Kernel k(1, {}, {{0.335, scalar(0.5)}, {-0.335, scalar(0.5)}}, 0.5);
  Eigen::MatrixXd v(g.size(), 1);
  for (int i = 0; i < g.size(); ++i) v(i, 0) = 2.0 * g.x(i) + 1.0;
  const GridFunction lin(g, v, Eigen::VectorXd::Constant(1, -19.0), Eigen::VectorXd::Constant(1, 21.0));
  const GridFunction out = convolve(k, lin);
  // linear functions are reproduced by symmetric pairs whenever x ± λ stays in the window
  for (int i = 17; i < g.size() - 17; ++i) CHECK(out.values(i, 0) == doctest::Approx(v(i, 0)).epsilon(1e-12));
  const Kernel far(1, {}, {{50.0, scalar(0.5)}, {-50.0, scalar(0.5)}}, 0.01);
  const GridFunction o2 = convolve(far, lin);
  CHECK(o2.values(g.center(), 0) == doctest::Approx(1.0));
  const GridFunction bare(g, v);
  CHECK_THROWS_AS(convolve(far, bare), PreconditionError);
}

TEST_CASE("serial and OpenMP kernels agree bit for bit") {
  const Grid g(30.0, 1201);
  Eigen::MatrixXd w(2, 2);
  w << 1.0, 0.2, 0.2, 0.5;
  const Kernel k(2, {{KernelFamily::exponential, 0.5, 1.0, w}}, {{0.73, w}, {-0.73, w}}, 0.5);
  const ConvolutionPlan plan(k, g);
  Eigen::MatrixXd v(g.size(), 2);
  for (int i = 0; i < g.size(); ++i) v.row(i) << std::tanh(g.x(i)), std::sin(g.x(i)) / (1 + g.x(i) * g.x(i));
  const GridFunction u(g, v, Eigen::Vector2d(-1.0, 0.0), Eigen::Vector2d(1.0, 0.0));
  Eigen::MatrixXd a, b;
  kernels::convolve_serial(plan, u, a);
  kernels::convolve_omp(plan, u, b);
  CHECK(a == b);
  for (int i : {0, 17, 600, 1200}) CHECK(kernels::convolve_node(plan, u, i) == a.row(i).transpose());

  std::vector<Eigen::MatrixXd> left(g.size(), w), right(g.size(), Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd j1 = Eigen::MatrixXd::Zero(2 * 99, 2 * 99), j2 = j1;
  kernels::assemble_coupling_serial(plan, left, right, 500, 598, j1);
  kernels::assemble_coupling_omp(plan, left, right, 500, 598, j2);
  CHECK(j1 == j2);

  const Eigen::MatrixXd q = v.array().square();
  for (int p : {100, 600, 1100})
    CHECK(kernels::boundary_term_serial(plan, u, q, p) == kernels::boundary_term_omp(plan, u, q, p));
}

TEST_CASE("field evaluation") {
  const Grid g(20.0, 401);
  SUBCASE("beta = 0 leaves only the metric gradient of F") {
    SystemSpec s = double_well_system(0.5);
    s.beta = 0.0;
    const GridFunction u = tanh_function(g);
    const Eigen::MatrixXd f = phi(s, u);
    for (int i = 0; i < g.size(); i += 37) {
      const double x = u.values(i, 0);
      CHECK(f(i, 0) == doctest::Approx(x * x * x - x).epsilon(1e-14));
    }
  }
  SUBCASE("double well at u = 1") {
    const SystemSpec s = double_well_system(0.5);
    const Eigen::MatrixXd f = phi(s, GridFunction::constant(g, Eigen::VectorXd::Constant(1, 1.0)));
    CHECK(f.col(0).maxCoeff() == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(f.col(0).minCoeff() == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("constants give the metric gradient of h") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(2, 2);
    const Kernel k(2, {{KernelFamily::gaussian, 1.0, 1.0, w}}, {}, 0.5);
    const SystemSpec s = neural_field_system(2, 2.0, Sigmoid{}, k);
    const Eigen::Vector2d z(0.4, -0.3);
    const Eigen::MatrixXd f = phi(s, GridFunction::constant(g, z));
    const Eigen::VectorXd expected =
        s.metric_solve(z, s.DS(z).transpose() * effective_matrix(k) * s.S(z) + s.gradF(z));
    CHECK((f.row(g.center()).transpose() - expected).norm() < 1e-10);
    CHECK((f.row(0).transpose() - expected).norm() < 1e-10);
  }
}
