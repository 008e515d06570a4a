#include "conley/blocks.hpp"

#include "conley/errors.hpp"
#include "conley/floer_complex.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace conley {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

struct Sample {
  Eigen::VectorXd point;
  Eigen::VectorXd normal;
};

struct FacetSamples {
  std::string name;
  std::vector<Sample> samples;
};

std::vector<FacetSamples> facet_samples(const BlockGeometry& geometry, int n) {
  using V = Eigen::VectorXd;
  return std::visit(
      overloaded{
          [&](const IntervalGeometry& g) {
            return std::vector<FacetSamples>{{"a", {{V::Constant(1, g.a), V::Constant(1, -1.0)}}},
                                             {"b", {{V::Constant(1, g.b), V::Constant(1, 1.0)}}}};
          },
          [&](const BallGeometry& g) {
            FacetSamples f{"sphere", {}};
            if (g.dim == 1) {
              f.samples.push_back({V::Constant(1, -g.radius), V::Constant(1, -1.0)});
              f.samples.push_back({V::Constant(1, g.radius), V::Constant(1, 1.0)});
            } else if (g.dim == 2) {
              for (int k = 0; k < n; ++k) {
                const double t = 2.0 * std::numbers::pi * k / n;
                V nu(2);
                nu << std::cos(t), std::sin(t);
                f.samples.push_back({g.radius * nu, nu});
              }
            } else {
              // Fibonacci points on S².
              const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
              for (int k = 0; k < n; ++k) {
                const double z = 1.0 - 2.0 * (k + 0.5) / n;
                const double r = std::sqrt(1.0 - z * z);
                V nu(3);
                nu << r * std::cos(golden * k), r * std::sin(golden * k), z;
                f.samples.push_back({g.radius * nu, nu});
              }
            }
            return std::vector<FacetSamples>{f};
          },
          [&](const PolygonGeometry& g) {
            std::vector<FacetSamples> out;
            const int m = static_cast<int>(g.vertices.size());
            for (int i = 0; i < m; ++i) {
              const Eigen::Vector2d p = g.vertices[i], q = g.vertices[(i + 1) % m];
              const Eigen::Vector2d e = q - p;
              V nu(2);
              nu << e.y(), -e.x();
              nu.normalize();
              FacetSamples f{"edge" + std::to_string(i), {}};
              for (int k = 0; k < n; ++k) {
                const double t = (k + 0.5) / n;
                f.samples.push_back({V(p + t * e), nu});
              }
              out.push_back(std::move(f));
            }
            return out;
          },
          [&](const LensGeometry& g) {
            const double R = g.radius;
            FacetSamples top{"upper", {}}, bottom{"lower", {}};
            for (int k = 0; k < n; ++k) {
              const double x = -R + 2.0 * R * (k + 0.5) / n;
              const double y = std::abs(x * x - R * R);
              V p(2), nu(2);
              p << x, y;
              nu << 2.0 * x, 1.0;
              top.samples.push_back({p, nu.normalized()});
              p << x, -y;
              nu << 2.0 * x, -1.0;
              bottom.samples.push_back({p, nu.normalized()});
            }
            return std::vector<FacetSamples>{top, bottom};
          },
      },
      geometry);
}

std::string format_point(const Eigen::VectorXd& p) {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p(i);
  os << ")";
  return os.str();
}

struct BoundingBox {
  Eigen::VectorXd lo, hi;
};

BoundingBox bounding_box(const BlockGeometry& geometry) {
  return std::visit(overloaded{
                        [](const IntervalGeometry& g) {
                          return BoundingBox{Eigen::VectorXd::Constant(1, g.a), Eigen::VectorXd::Constant(1, g.b)};
                        },
                        [](const BallGeometry& g) {
                          return BoundingBox{Eigen::VectorXd::Constant(g.dim, -g.radius),
                                             Eigen::VectorXd::Constant(g.dim, g.radius)};
                        },
                        [](const PolygonGeometry& g) {
                          Eigen::VectorXd lo = g.vertices[0], hi = g.vertices[0];
                          for (const auto& v : g.vertices) {
                            lo = lo.cwiseMin(Eigen::VectorXd(v));
                            hi = hi.cwiseMax(Eigen::VectorXd(v));
                          }
                          return BoundingBox{lo, hi};
                        },
                        [](const LensGeometry& g) {
                          const double R = g.radius;
                          Eigen::VectorXd lo(2), hi(2);
                          lo << -R, -R * R;
                          hi << R, R * R;
                          return BoundingBox{lo, hi};
                        },
                    },
                    geometry);
}

// Relative cellular chain complex of a closed cycle of m edges bounding one
// face: vertex i, edge i from vertex i to vertex i+1. Cells on egress edges
// (and their vertices) are quotiented out.
ChainComplexZ2 cycle_pair(const std::vector<bool>& egress) {
  const int m = static_cast<int>(egress.size());
  std::vector<int> vertex_id(m, -1), edge_id(m, -1);
  int nv = 0, ne = 0;
  for (int i = 0; i < m; ++i) {
    const bool removed = egress[i] || egress[(i + m - 1) % m];
    if (!removed) vertex_id[i] = nv++;
  }
  for (int i = 0; i < m; ++i)
    if (!egress[i]) edge_id[i] = ne++;
  BitMatrix d1(nv, ne), d2(ne, 1);
  for (int i = 0; i < m; ++i) {
    if (edge_id[i] < 0) continue;
    d2.set(edge_id[i], 0, true);
    for (int v : {i, (i + 1) % m})
      if (vertex_id[v] >= 0) d1.flip(vertex_id[v], edge_id[i]);
  }
  return make_complex({{0, nv}, {1, ne}, {2, 1}}, {{1, d1}, {2, d2}});
}

}  // namespace

std::string to_string(FacetLabel label) { return label == FacetLabel::ingress ? "ingress" : "egress"; }

int geometry_dimension(const BlockGeometry& geometry) {
  return std::visit(overloaded{
                        [](const IntervalGeometry&) { return 1; },
                        [](const BallGeometry& g) { return g.dim; },
                        [](const PolygonGeometry&) { return 2; },
                        [](const LensGeometry&) { return 2; },
                    },
                    geometry);
}

void validate_geometry(const BlockGeometry& geometry) {
  std::visit(overloaded{
                 [](const IntervalGeometry& g) {
                   if (!(g.a < g.b)) throw ConfigError("block.geometry.interval", "need a < b");
                 },
                 [](const BallGeometry& g) {
                   if (g.dim < 1 || g.dim > 3) throw ConfigError("block.geometry.dim", "balls need 1 <= d <= 3");
                   if (!(g.radius > 0.0)) throw ConfigError("block.geometry.radius", "must be positive");
                 },
                 [](const PolygonGeometry& g) {
                   const int m = static_cast<int>(g.vertices.size());
                   if (m < 3) throw ConfigError("block.geometry.vertices", "a polygon needs at least 3 vertices");
                   for (int i = 0; i < m; ++i) {
                     const Eigen::Vector2d a = g.vertices[(i + 1) % m] - g.vertices[i];
                     const Eigen::Vector2d b = g.vertices[(i + 2) % m] - g.vertices[(i + 1) % m];
                     if (!(a.x() * b.y() - a.y() * b.x() > 0.0))
                       throw ConfigError("block.geometry.vertices",
                                         "polygon must be strictly convex and counter-clockwise");
                   }
                 },
                 [](const LensGeometry& g) {
                   if (!(g.radius > 0.0)) throw ConfigError("block.geometry.radius", "must be positive");
                 },
             },
             geometry);
}

bool contains(const BlockGeometry& geometry, const Eigen::VectorXd& u, double tol) {
  return std::visit(overloaded{
                        [&](const IntervalGeometry& g) { return u(0) >= g.a - tol && u(0) <= g.b + tol; },
                        [&](const BallGeometry& g) { return u.norm() <= g.radius * (1.0 + tol) + tol; },
                        [&](const PolygonGeometry& g) {
                          const int m = static_cast<int>(g.vertices.size());
                          for (int i = 0; i < m; ++i) {
                            const Eigen::Vector2d e = g.vertices[(i + 1) % m] - g.vertices[i];
                            const Eigen::Vector2d w = Eigen::Vector2d(u(0), u(1)) - g.vertices[i];
                            if (e.x() * w.y() - e.y() * w.x() < -tol * (1.0 + e.norm() * w.norm())) return false;
                          }
                          return true;
                        },
                        [&](const LensGeometry& g) {
                          const double R = g.radius;
                          return std::abs(u(0)) <= R + tol &&
                                 std::abs(u(1)) <= std::abs(u(0) * u(0) - R * R) + tol * (1.0 + R * R);
                        },
                    },
                    geometry);
}

BlockGeometry polygon_family(int k, double radius) {
  if (k < 1) throw ConfigError("block.family.k", "must be at least 1");
  if (k == 1) return LensGeometry{radius};
  PolygonGeometry g;
  for (int i = 0; i < 2 * k; ++i) {
    const double t = i * std::numbers::pi / k;
    g.vertices.emplace_back(radius * std::cos(t), radius * std::sin(t));
  }
  return g;
}

Block classify_boundary(const SystemSpec& system, const BlockGeometry& geometry, int n_samples) {
  validate_geometry(geometry);
  if (geometry_dimension(geometry) != system.state_dim)
    throw PreconditionError("block dimension does not match the system state dimension");
  if (n_samples < 1) throw PreconditionError("classify_boundary: n_samples must be positive");
  Block block;
  block.geometry = geometry;
  block.c_perp = std::numeric_limits<double>::infinity();
  for (const auto& fs : facet_samples(geometry, n_samples)) {
    Facet f;
    f.name = fs.name;
    f.min_flux = std::numeric_limits<double>::infinity();
    f.max_flux = -std::numeric_limits<double>::infinity();
    for (const auto& s : fs.samples) {
      const double flux = system.metric_solve(s.point, system.gradF(s.point)).dot(s.normal);
      if (!std::isfinite(flux)) throw NumericError("non-finite field on facet " + fs.name);
      if (std::abs(flux) < 1e-10)
        throw PropertyViolation("tangency on facet " + fs.name + " at " + format_point(s.point) +
                                " (|flux| = " + std::to_string(std::abs(flux)) + ")");
      if ((f.min_flux < 0.0 && flux > 0.0) || (f.max_flux > 0.0 && flux < 0.0))
        throw PropertyViolation("not an isolating block: flux changes sign on facet " + fs.name + " at " +
                                format_point(s.point));
      f.min_flux = std::min(f.min_flux, flux);
      f.max_flux = std::max(f.max_flux, flux);
      block.c_perp = std::min(block.c_perp, std::abs(flux));
    }
    f.label = f.min_flux > 0.0 ? FacetLabel::ingress : FacetLabel::egress;
    block.facets.push_back(f);
  }
  return block;
}

double nonlocal_sup_bound(const SystemSpec& system, const BlockGeometry& geometry) {
  validate_geometry(geometry);
  const int d = geometry_dimension(geometry);
  if (d != system.state_dim) throw PreconditionError("block dimension does not match the system state dimension");
  const BoundingBox box = bounding_box(geometry);
  constexpr int kPerAxis = 50;
  long total = 1;
  for (int i = 0; i < d; ++i) total *= kPerAxis;
  double sup_coupling = 0.0, sup_s = 0.0;
  Eigen::VectorXd u(d);
  for (long s = 0; s < total; ++s) {
    long r = s;
    for (int i = 0; i < d; ++i) {
      const int k = static_cast<int>(r % kPerAxis);
      r /= kPerAxis;
      u(i) = box.lo(i) + (box.hi(i) - box.lo(i)) * k / (kPerAxis - 1);
    }
    if (!contains(geometry, u, 1e-12)) continue;
    const Eigen::MatrixXd a = system.metric_coupling(u);
    const double na = a.cols() == 1 && a.rows() == 1 ? std::abs(a(0, 0))
                                                      : Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
    sup_coupling = std::max(sup_coupling, na);
    sup_s = std::max(sup_s, system.S(u).norm());
  }
  return system.kernel.operator_mass() * sup_coupling * sup_s;
}

HypothesisResult morse_iso_hypothesis(const Block& block, double nonlocal_bound) {
  if (!(block.c_perp > 0.0)) throw PreconditionError("morse_iso_hypothesis: c_perp must be positive");
  HypothesisResult r;
  r.ratio = nonlocal_bound / block.c_perp;
  r.pass = r.ratio < 1.0;
  return r;
}

BlockGeometry BlockFamily::at(double radius) const {
  switch (kind) {
    case FamilyKind::interval:
      return IntervalGeometry{-radius, radius};
    case FamilyKind::ball:
      return BallGeometry{dim, radius};
    case FamilyKind::polygon:
      return polygon_family(k, radius);
  }
  throw PreconditionError("unknown block family");
}

StabilisingScan stabilising_scan(const SystemSpec& system, const BlockFamily& family,
                                 const std::vector<double>& radii, int n_samples) {
  StabilisingScan scan;
  SystemSpec local = system;
  local.beta = 0.0;
  for (double R : radii) {
    ScanEntry e;
    e.radius = R;
    try {
      const BlockGeometry g = family.at(R);
      const Block b = classify_boundary(local, g, n_samples);
      e.c_perp = b.c_perp;
      e.bound = nonlocal_sup_bound(system, g);
      e.ratio = morse_iso_hypothesis(b, e.bound).ratio;
      e.valid = true;
    } catch (const PropertyViolation& ex) {
      e.message = ex.what();
    }
    scan.entries.push_back(e);
  }
  for (auto it = scan.entries.rbegin(); it != scan.entries.rend(); ++it) {
    if (!it->valid || !(it->ratio < 1.0)) break;
    scan.r0_prime = it->radius;
  }
  bool strict = true, nonincreasing = true;
  const ScanEntry* prev = nullptr;
  std::optional<double> first_pass;
  for (const auto& e : scan.entries) {
    if (!e.valid) continue;
    if (prev) {
      if (e.ratio > prev->ratio) nonincreasing = false;
      if (!(e.ratio < prev->ratio)) strict = false;
      if (first_pass && e.ratio > prev->ratio) scan.monotone_after_pass = false;
    }
    if (!first_pass && e.ratio < 1.0) first_pass = e.radius;
    prev = &e;
  }
  scan.trend = strict ? "decreasing" : (nonincreasing ? "nonincreasing" : "mixed");
  return scan;
}

std::map<int, int> relative_homology(const Block& block) {
  const int dim = geometry_dimension(block.geometry);
  std::vector<bool> egress;
  for (const auto& f : block.facets) egress.push_back(f.label == FacetLabel::egress);
  auto pad = [&](std::map<int, int> r) {
    for (int n = 0; n <= dim; ++n) r[n];
    for (auto it = r.begin(); it != r.end();) it = it->first > dim ? r.erase(it) : std::next(it);
    return r;
  };
  return std::visit(
      overloaded{
          [&](const IntervalGeometry&) {
            if (egress.size() != 2) throw PreconditionError("interval block needs two endpoint labels");
            std::vector<int> vid(2, -1);
            int nv = 0;
            for (int i = 0; i < 2; ++i)
              if (!egress[i]) vid[i] = nv++;
            BitMatrix d1(nv, 1);
            for (int i = 0; i < 2; ++i)
              if (vid[i] >= 0) d1.set(vid[i], 0, true);
            ChainComplexZ2 c = make_complex({{0, nv}, {1, 1}}, {{1, d1}});
            return pad(homology_ranks(c));
          },
          [&](const BallGeometry& g) {
            if (egress.size() != 1) throw PreconditionError("ball block needs one sphere label");
            std::map<int, int> r;
            if (egress[0])
              r[g.dim] = 1;
            else
              r[0] = 1;
            return pad(r);
          },
          [&](const PolygonGeometry& g) {
            if (egress.size() != g.vertices.size()) throw PreconditionError("polygon block needs one label per edge");
            ChainComplexZ2 c = cycle_pair(egress);
            return pad(homology_ranks(c));
          },
          [&](const LensGeometry&) {
            if (egress.size() != 2) throw PreconditionError("lens block needs two arc labels");
            ChainComplexZ2 c = cycle_pair(egress);
            return pad(homology_ranks(c));
          },
      },
      block.geometry);
}

int forcing_bound(int num_hyperbolic_constants, const std::map<int, int>& ranks) {
  int total = 0;
  for (const auto& [deg, r] : ranks) {
    (void)deg;
    if (r < 0) throw PreconditionError("forcing_bound: ranks must be nonnegative");
    total += r;
  }
  return forcing_bound(num_hyperbolic_constants, total);
}

int forcing_bound(int num_hyperbolic_constants, int total_rank) {
  if (num_hyperbolic_constants < 0 || total_rank < 0)
    throw PreconditionError("forcing_bound: inputs must be nonnegative");
  return std::max(0, num_hyperbolic_constants - total_rank);
}

}  // namespace conley
