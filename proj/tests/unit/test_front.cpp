#include "conley/energy.hpp"
#include "conley/errors.hpp"
#include "conley/front_solver.hpp"
#include "oracles/oracle_values.hpp"

#include <doctest.h>

#include <cmath>

using namespace conley;

namespace {

const Grid& grid() {
  static const Grid g(40.0, 1601);
  return g;
}

CriticalPoint point(const SystemSpec& s, double z) { return refine_critical_point(s, Eigen::VectorXd::Constant(1, z)); }

const Front& symmetric_front() {
  static const Front f = [] {
    const SystemSpec s = double_well_system(0.1);
    const CriticalPoint zm = point(s, 0.0), zp = point(s, 0.95);
    return solve_front(s, zm, zp, tanh_seed(grid(), zm.z, zp.z, 0.0));
  }();
  return f;
}

}  // namespace

TEST_CASE("front from the saddle to a minimum") {
  const SystemSpec s = double_well_system(0.1);
  const Front& f = symmetric_front();
  CHECK(f.residual <= 1e-10);
  CHECK(residual(s, f.profile) <= 1e-10);
  CHECK(f.z_plus.z[0] == doctest::Approx(std::sqrt(0.9)).epsilon(1e-12));
  CHECK(f.profile.values(grid().center(), 0) == doctest::Approx(0.5 * std::sqrt(0.9)).epsilon(1e-12));
  CHECK(f.profile.values(0, 0) == 0.0);
  const double dh = f.z_minus.h_value - f.z_plus.h_value;
  CHECK(std::abs(2 * f.e_kin - dh) <= 1e-3 * std::abs(dh));
  CHECK_FALSE(f.transversality_warning);
  CHECK(f.least_singular_value > 1e-6);
  CHECK(translation_kernel_check(s, f) <= 1e-4);
}

TEST_CASE("decay rates follow the characteristic roots") {
  const SystemSpec s = double_well_system(0.1);
  const Front& f = symmetric_front();
  const DecayPrediction p = predicted_decay(s, f.z_minus, f.z_plus, s.kernel.decay_rate());
  REQUIRE(p.minus);
  REQUIRE(p.plus);
  // P_z comes from a central-difference Hessian (step 1e-5), O(1e-10) per entry
  CHECK(*p.minus == doctest::Approx(oracle::kDecayMinus).epsilon(1e-8));
  CHECK(*p.plus == doctest::Approx(oracle::kDecayPlus).epsilon(1e-8));
  REQUIRE(f.decay_fit_minus);
  REQUIRE(f.decay_fit_plus);
  CHECK(std::abs(*f.decay_fit_minus - *p.minus) <= 0.2 * *p.minus);
  CHECK(std::abs(*f.decay_fit_plus - *p.plus) <= 0.2 * *p.plus);
}

TEST_CASE("lyapunov functional decreases along the front") {
  const SystemSpec s = double_well_system(0.1);
  const Front& f = symmetric_front();
  LyapunovEvaluator lyap(s, f.profile);
  double prev = lyap.at_node(1);
  for (int p = 20; p < grid().size() - 1; p += 20) {
    const double cur = lyap.at_node(p);
    CHECK(cur <= prev + 1e-6);
    prev = cur;
  }
  CHECK(lyap.at_node(0) == doctest::Approx(f.z_minus.h_value).epsilon(1e-9));
  const double window = energy_identity_check(s, f.profile, -3.0, 4.0);
  CHECK(window <= 1e-3 * std::abs(f.z_minus.h_value - f.z_plus.h_value));
}

TEST_CASE("constant front and index-gap precondition") {
  const SystemSpec s = double_well_system(0.1);
  const CriticalPoint zp = point(s, 0.95);
  const Front c = solve_front(s, zp, zp, GridFunction::constant(grid(), zp.z));
  CHECK(c.e_kin == 0.0);
  CHECK(c.residual < 1e-12);
  const CriticalPoint zm = point(s, -0.95);
  CHECK_THROWS_AS(count_connections(s, zm, zp), PreconditionError);
  const ConnectionCount self = count_connections(s, point(s, 0.0), point(s, 0.0));
  CHECK(self.count_mod2 == 0);
}

TEST_CASE("mod-2 count of saddle-to-minimum fronts") {
  const SystemSpec s = double_well_system(0.1);
  MultistartConfig cfg;
  cfg.grid = grid();
  const ConnectionCount c = count_connections(s, point(s, 0.0), point(s, 0.95), cfg);
  CHECK(c.raw_count == 1);
  CHECK(c.count_mod2 == 1);
  CHECK(c.seeds_tried == 11);
  CHECK(c.seeds_converged >= 1);
}

TEST_CASE("continuation in beta") {
  const SystemSpec s = double_well_system(0.1);
  SystemSpec s0 = s;
  s0.beta = 0.0;
  const CriticalPoint zm = point(s0, 0.0), zp = point(s0, 0.95);
  const Front f0 = solve_front(s0, zm, zp, tanh_seed(grid(), zm.z, zp.z, 0.0));
  CHECK(f0.z_plus.z[0] == doctest::Approx(1.0).epsilon(1e-12));
  const Front f1 = continue_in_beta(s, f0, {0.0, 0.5, 1.0});
  CHECK(f1.beta == 1.0);
  CHECK(f1.z_plus.z[0] == doctest::Approx(std::sqrt(0.9)).epsilon(1e-12));
  CHECK(f1.residual <= 1e-10);
  CHECK(shift_distance(f1.profile, symmetric_front().profile, 80) < 1e-6);
}

TEST_CASE("non-convergence is reported") {
  const SystemSpec s = double_well_system(0.1);
  SolverOptions o;
  o.max_iterations = 1;
  const CriticalPoint zm = point(s, 0.0), zp = point(s, 0.95);
  CHECK_THROWS_AS(solve_front(s, zm, zp, tanh_seed(grid(), zm.z, zp.z, 15.0), o), NumericError);
}

TEST_CASE("local front agrees with the closed form") {
  // β = 0: u' = u − u³ from 0 to 1 with u(0) = ½ is (1 + 3e^{−2x})^{−1/2}
  SystemSpec s = double_well_system(0.1);
  s.beta = 0.0;
  const Grid g(40.0, 4001);
  const CriticalPoint zm = point(s, 0.0), zp = point(s, 1.0);
  const Front f = solve_front(s, zm, zp, tanh_seed(g, zm.z, zp.z, 0.0));
  double err = 0.0;
  Eigen::MatrixXd exact(g.size(), 1), du(g.size(), 1);
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    const double e = std::exp(-2.0 * x);
    exact(i, 0) = x < -30.0 ? 0.0 : 1.0 / std::sqrt(1.0 + 3.0 * e);
    du(i, 0) = x < -30.0 ? 0.0 : 3.0 * e * std::pow(1.0 + 3.0 * e, -1.5);
    err = std::max(err, std::abs(f.profile.values(i, 0) - exact(i, 0)));
  }
  CHECK(err <= 1e-6);
  CHECK(f.e_kin == doctest::Approx(0.125).epsilon(1e-6));
  const GridFunction analytic(g, exact, zm.z, zp.z);
  CHECK(translation_kernel_check(s, analytic, du) <= 1e-6);
  const DecayPrediction p = predicted_decay(s, zm, zp, s.kernel.decay_rate());
  REQUIRE(p.plus);
  CHECK(*p.plus == doctest::Approx(2.0).epsilon(1e-8));
  REQUIRE(f.decay_fit_plus);
  CHECK(*f.decay_fit_plus == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("nonlocal front kinetic energy matches the well depth") {
  const Front& f = symmetric_front();
  CHECK(f.residual <= 1e-8);
  // 2 E_kin = h(0) - h(sqrt(1 - eps)) = (1 - eps)^2 / 4
  CHECK(f.e_kin == doctest::Approx(0.9 * 0.9 / 8).epsilon(1e-3));
}

TEST_CASE("continuation round trip and translation equivariance") {
  const SystemSpec s = double_well_system(0.1);
  SystemSpec s0 = s;
  s0.beta = 0.0;
  const CriticalPoint zm = point(s0, 0.0), zp = point(s0, 0.95);
  const Front f0 = solve_front(s0, zm, zp, tanh_seed(grid(), zm.z, zp.z, 0.0));
  const Front same = continue_in_beta(s0, f0, {0.0});
  CHECK((same.profile.values - f0.profile.values).cwiseAbs().maxCoeff() < 1e-9);
  const Front up = continue_in_beta(s, f0, {0.0, 0.25, 0.5, 0.75, 1.0});
  const Front back = continue_in_beta(s, up, {1.0, 0.75, 0.5, 0.25, 0.0});
  CHECK(back.beta == 0.0);
  CHECK((back.profile.values - f0.profile.values).cwiseAbs().maxCoeff() <= 1e-6);

  // shift the converged front by one node and re-converge
  const Front& f = symmetric_front();
  GridFunction shifted = f.profile;
  for (int i = 1; i < grid().size(); ++i) shifted.values.row(i) = f.profile.values.row(i - 1);
  const Front g = solve_front(s, f.z_minus, f.z_plus, shifted);
  CHECK((g.profile.values - f.profile.values).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("counts are deterministic") {
  const SystemSpec s = double_well_system(0.1);
  MultistartConfig cfg;
  cfg.grid = Grid(40.0, 801);
  const ConnectionCount a = count_connections(s, point(s, 0.0), point(s, -0.95), cfg);
  const ConnectionCount b = count_connections(s, point(s, 0.0), point(s, -0.95), cfg);
  CHECK(a.raw_count == 1);
  CHECK(a.raw_count == b.raw_count);
  REQUIRE(a.representatives.size() == b.representatives.size());
  for (std::size_t i = 0; i < a.representatives.size(); ++i)
    CHECK(a.representatives[i].profile.values == b.representatives[i].profile.values);
}

TEST_CASE("tilted well: front only from the saddle") {
  const SystemSpec s = double_well_system(0.1, 0.1);
  const CriticalPoint saddle = point(s, oracle::kTiltZMinus), deep = point(s, oracle::kTiltZPlus);
  const CriticalPoint shallow = point(s, 0.89);
  const Front f = solve_front(s, saddle, deep, tanh_seed(grid(), saddle.z, deep.z, 0.0));
  CHECK(f.residual <= 1e-10);
  CHECK(f.z_minus.h_value - f.z_plus.h_value == doctest::Approx(oracle::kTiltDeltaH).epsilon(1e-10));
  // minimum to minimum would have to pass the saddle
  CHECK_THROWS_AS(solve_front(s, shallow, deep, tanh_seed(grid(), shallow.z, deep.z, 0.0)), NoConvergence);
}
