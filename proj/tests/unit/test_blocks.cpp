#include "conley/blocks.hpp"
#include "conley/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace conley;

namespace {

Kernel planar(double a) {
  return Kernel(2, {{KernelFamily::exponential, a, 1.0, Eigen::MatrixXd::Identity(2, 2)}}, {}, 0.5);
}

SystemSpec neural(int d, double a) {
  const Kernel k(d, {{KernelFamily::exponential, a, 1.0, Eigen::MatrixXd::Identity(d, d)}}, {}, 0.5);
  return neural_field_system(d, 2.0, Sigmoid{}, k);
}

}  // namespace

TEST_CASE("double well interval block") {
  const SystemSpec s = double_well_system(0.1);
  const Block b = classify_boundary(s, IntervalGeometry{-2.0, 2.0});
  CHECK(std::abs(b.c_perp - 6.0) <= 1e-12 * 6.0);
  REQUIRE(b.facets.size() == 2);
  CHECK(b.facets[0].label == FacetLabel::ingress);
  CHECK(b.facets[1].label == FacetLabel::ingress);
  CHECK(relative_homology(b) == std::map<int, int>{{0, 1}, {1, 0}});
  CHECK(nonlocal_sup_bound(s, IntervalGeometry{-2.0, 2.0}) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("hypothesis flips at epsilon = 3") {
  for (double eps : {0.1, 2.9, 3.1, 5.0}) {
    const SystemSpec s = double_well_system(eps);
    Block b = classify_boundary(s, IntervalGeometry{-2.0, 2.0});
    const HypothesisResult h = morse_iso_hypothesis(b, nonlocal_sup_bound(s, IntervalGeometry{-2.0, 2.0}));
    CHECK(h.ratio == doctest::Approx(eps / 3.0).epsilon(1e-12));
    CHECK(h.pass == (eps < 3.0));
  }
}

TEST_CASE("polygon law") {
  for (int k = 1; k <= 4; ++k) {
    const SystemSpec s = fkn_system(k, 4, planar(0.5));
    const Block b = classify_boundary(s, polygon_family(k, 3.0));
    REQUIRE(b.facets.size() == static_cast<std::size_t>(2 * k));
    for (std::size_t i = 0; i < b.facets.size(); ++i) CHECK(b.facets[i].label != b.facets[(i + 1) % b.facets.size()].label);
    const auto h = relative_homology(b);
    CHECK(h.at(0) == 0);
    CHECK(h.at(1) == k - 1);
    CHECK(h.at(2) == 0);
  }
}

TEST_CASE("neural field balls") {
  for (int d = 1; d <= 3; ++d) {
    const SystemSpec s = neural(d, 0.5);
    for (double r : {1.0, 4.0, 7.5}) {
      const Block b = classify_boundary(s, BallGeometry{d, r});
      CHECK(std::abs(b.c_perp - r / 2.0) <= 1e-12 * r / 2.0);
      for (const auto& f : b.facets) CHECK(f.label == FacetLabel::egress);
      std::map<int, int> sphere;
      for (int n = 0; n <= d; ++n) sphere[n] = n == d;
      CHECK(relative_homology(b) == sphere);
    }
  }
}

TEST_CASE("stabilising scan for the neural field") {
  const SystemSpec s = neural(2, 5.0);
  std::vector<double> radii;
  for (int r = 2; r <= 40; r += 2) radii.push_back(r);
  const StabilisingScan scan = stabilising_scan(s, BlockFamily{FamilyKind::ball, 2, 0}, radii);
  REQUIRE(scan.r0_prime);
  CHECK(*scan.r0_prime > radii.front());
  CHECK(scan.trend == "decreasing");
  CHECK(scan.monotone_after_pass);
  CHECK(scan.entries.front().ratio > 1.0);
  CHECK(scan.entries.back().ratio < 1.0);
  for (const auto& e : scan.entries) CHECK(e.valid);
  // ratio·R stays bounded: sup|S| saturates, so the decay is C/R up to a bounded factor
  double lo = 1e300, hi = 0.0;
  for (const auto& e : scan.entries) {
    lo = std::min(lo, e.ratio * e.radius);
    hi = std::max(hi, e.ratio * e.radius);
  }
  CHECK(hi <= 2.0 * lo);
}

TEST_CASE("non-isolating boundaries") {
  // saddle field −x, +y on the unit ball: sign change along the circle
  SystemSpec s;
  s.state_dim = 2;
  s.coupling_dim = 2;
  s.potential = PolynomialPotential{Polynomial{2, {{-0.5, {2, 0}}, {0.5, {0, 2}}}}};
  s.kernel = planar(0.5);
  s.validate();
  CHECK_THROWS_AS(classify_boundary(s, BallGeometry{2, 1.0}), PropertyViolation);
  // a critical point on the boundary
  CHECK_THROWS_AS(classify_boundary(double_well_system(0.1), IntervalGeometry{-1.0, 2.0}), PropertyViolation);
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(validate_geometry(IntervalGeometry{1.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(validate_geometry(BallGeometry{4, 1.0}), ConfigError);
  CHECK_THROWS_AS(validate_geometry(BallGeometry{2, -1.0}), ConfigError);
  PolygonGeometry cw{{Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0)}};
  CHECK_THROWS_AS(validate_geometry(cw), ConfigError);
  CHECK(geometry_dimension(polygon_family(3, 2.0)) == 2);
  CHECK(contains(polygon_family(2, 2.0), Eigen::Vector2d(0.5, 0.5)));
  CHECK_FALSE(contains(polygon_family(2, 2.0), Eigen::Vector2d(1.5, 1.5)));
  CHECK(contains(LensGeometry{1.0}, Eigen::Vector2d(0.0, 0.9)));
  CHECK_FALSE(contains(LensGeometry{1.0}, Eigen::Vector2d(0.9, 0.5)));
}

TEST_CASE("forcing bound") {
  CHECK(forcing_bound(3, {{0, 1}, {1, 0}}) == 2);
  for (int k = 1; k <= 6; ++k) CHECK(forcing_bound(k, {{1, k - 1}}) == 1);
  CHECK(forcing_bound(1, 3) == 0);
  CHECK_THROWS_AS(forcing_bound(-1, 0), PreconditionError);
  CHECK_THROWS_AS(forcing_bound(2, {{0, -1}}), PreconditionError);
}
