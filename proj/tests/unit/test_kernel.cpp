#include "conley/errors.hpp"
#include "conley/kernel.hpp"
#include "oracles/oracle_values.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace conley;

namespace {

Eigen::MatrixXd one() { return Eigen::MatrixXd::Identity(1, 1); }

Eigen::MatrixXd scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

}  // namespace

TEST_CASE("effective matrix of builtin kernels") {
  SUBCASE("normalised exponential") {
    const Kernel k(1, {{KernelFamily::exponential, 0.5, 1.0, one()}}, {}, 0.5);
    CHECK(effective_matrix(k)(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("atoms only") {
    const Kernel k(1, {}, {{1.0, scalar(0.5)}, {-1.0, scalar(0.5)}}, 0.5);
    CHECK(effective_matrix(k)(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("exponential plus a central atom") {
    const Kernel k(1, {{KernelFamily::exponential, 0.5, 1.0, one()}}, {{0.0, scalar(2.0)}}, 0.5);
    CHECK(std::abs(effective_matrix(k)(0, 0) - 3.0) < 1e-14);
    CHECK(std::abs(effective_matrix(k)(0, 0) - oracle::kEffectiveExpAtom) < 1e-10);
  }
  SUBCASE("gaussian closed form") {
    const Kernel k(1, {{KernelFamily::gaussian, 2.0, 3.0, one()}}, {}, 1.0);
    CHECK(effective_matrix(k)(0, 0) == doctest::Approx(2.0 * std::sqrt(M_PI / 3.0)).epsilon(1e-14));
  }
  SUBCASE("matrix weight") {
    Eigen::MatrixXd w(2, 2);
    w << 1.0, 0.25, 0.25, 2.0;
    const Kernel k(2, {{KernelFamily::exponential, 1.0, 2.0, w}}, {}, 1.0);
    const Eigen::MatrixXd n = effective_matrix(k);
    CHECK((n - w).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((n - n.transpose()).norm() == 0.0);
  }
}

TEST_CASE("kernel invariants are enforced") {
  CHECK_THROWS_AS(Kernel(1, {{KernelFamily::exponential, 1.0, 0.0, one()}}, {}, 0.5), ConfigError);
  CHECK_THROWS_AS(Kernel(1, {{KernelFamily::exponential, 1.0, 0.4, one()}}, {}, 0.5), ConfigError);
  CHECK_THROWS_AS(Kernel(1, {}, {{1.0, scalar(0.5)}}, 0.5), ConfigError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.3, 0.0, 1.0;
  CHECK_THROWS_AS(Kernel(2, {{KernelFamily::gaussian, 1.0, 1.0, asym}}, {}, 0.5), ConfigError);
  CHECK_THROWS_AS(Kernel(1, {{KernelFamily::gaussian, 1.0, 1.0, one()}}, {}, -1.0), ConfigError);
  try {
    Kernel(1, {{KernelFamily::exponential, 1.0, 0.4, one()}}, {}, 0.5);
  } catch (const ConfigError& e) {
    CHECK(e.key().rfind("kernel", 0) == 0);
  }
}

TEST_CASE("kernel density is even and symmetric") {
  Eigen::MatrixXd w(2, 2);
  w << 1.0, -0.5, -0.5, 0.5;
  const Kernel k(2,
                 {{KernelFamily::exponential, 1.0, 2.0, w},
                  {KernelFamily::gaussian, 0.3, 1.5, Eigen::MatrixXd::Identity(2, 2)},
                  {KernelFamily::bump, 0.7, 2.5, w}},
                 {}, 1.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> pick(-6.0, 6.0);
  for (int t = 0; t < 100; ++t) {
    const double y = pick(rng);
    const Eigen::MatrixXd a = k.density(y);
    CHECK((a - k.density(-y)).norm() == 0.0);
    CHECK((a - a.transpose()).norm() == 0.0);
  }
}

TEST_CASE("fourier symbol of mirrored kernels is real") {
  const Kernel k(1, {{KernelFamily::exponential, 0.5, 1.0, one()}, {KernelFamily::gaussian, 1.0, 2.0, one()}},
                 {{0.7, scalar(0.2)}, {-0.7, scalar(0.2)}, {0.0, scalar(1.0)}}, 0.5);
  for (double xi = -50.0; xi <= 50.0; xi += 0.37) {
    const auto s = k.fourier_symbol(xi);
    CHECK(std::abs(s(0, 0).imag()) <= 1e-14);
    const double expected = 2 * 0.5 * 1.0 / (1.0 + xi * xi) + std::sqrt(M_PI / 2.0) * std::exp(-xi * xi / 8.0) +
                            0.4 * std::cos(0.7 * xi) + 1.0;
    CHECK(s(0, 0).real() == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(k.fourier_symbol(0.0)(0, 0).real() == doctest::Approx(effective_matrix(k)(0, 0)).epsilon(1e-14));
}

TEST_CASE("laplace symbol") {
  const Kernel k(1, {{KernelFamily::exponential, 2.0, 4.0, one()}}, {{1.0, scalar(0.5)}, {-1.0, scalar(0.5)}}, 3.5);
  for (double mu : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
    const double expected = 2.0 * 2.0 * 4.0 / (16.0 - mu * mu) + std::cosh(mu);
    CHECK(k.laplace_symbol(mu)(0, 0) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("bump family") {
  const ContinuousTerm t{KernelFamily::bump, 1.5, 2.0, one()};
  CHECK(t.profile(2.5) == 0.0);
  CHECK(t.profile(0.0) == 1.5);
  CHECK(t.mass() == doctest::Approx(1.5 * 2.0 * 16.0 / 15.0).epsilon(1e-14));
  CHECK(t.cumulative(2.0) == doctest::Approx(t.mass()).epsilon(1e-14));
  CHECK(t.cumulative(0.0) == doctest::Approx(0.5 * t.mass()).epsilon(1e-14));
}

TEST_CASE("cutoff leaves less than 1e-12 of the mass") {
  const ContinuousTerm t{KernelFamily::exponential, 0.5, 1.0, one()};
  const Kernel k(1, {t}, {}, 0.5);
  CHECK(2.0 * t.upper_tail(k.cutoff()) < 1e-12);
  const Kernel g(1, {{KernelFamily::gaussian, 1.0, 1.0, one()}}, {}, 0.5);
  CHECK(2.0 * g.continuous()[0].upper_tail(g.cutoff()) < 1e-12);
}
