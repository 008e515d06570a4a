#include "conley/floer_complex.hpp"

#include "conley/errors.hpp"
#include "conley/logging.hpp"

#include <cstdio>

namespace conley {

namespace {

constexpr double kSamePoint = 1e-6;

std::pair<int, int> locate(const ChainComplexZ2& c, const Eigen::VectorXd& z) {
  for (const auto& [deg, gens] : c.generators)
    for (std::size_t k = 0; k < gens.size(); ++k)
      if (gens[k].point && (gens[k].point->z - z).norm() < kSamePoint) return {deg, static_cast<int>(k)};
  return {0, -1};
}

}  // namespace

int ChainComplexZ2::size(int degree) const {
  auto it = generators.find(degree);
  return it == generators.end() ? 0 : static_cast<int>(it->second.size());
}

BitMatrix ChainComplexZ2::boundary_matrix(int degree) const {
  auto it = boundary.find(degree);
  if (it != boundary.end()) return it->second;
  return BitMatrix(size(degree - 1), size(degree));
}

std::string point_label(const Eigen::VectorXd& z) {
  std::string s = "(";
  char buf[32];
  for (int i = 0; i < z.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", z(i) == 0.0 ? 0.0 : z(i));
    if (i) s += ", ";
    s += buf;
  }
  return s + ")";
}

ChainComplexZ2 build_complex(const std::vector<CriticalPoint>& critical_points,
                             const std::vector<ConnectionCount>& counts) {
  ChainComplexZ2 c;
  int top = -1;
  for (const auto& cp : critical_points) {
    if (!cp.hyperbolic()) {
      c.warnings.push_back("degenerate critical point " + point_label(cp.z) + " excluded");
      log::info(c.warnings.back());
      continue;
    }
    if (locate(c, cp.z).second >= 0)
      throw PreconditionError("build_complex: duplicate generator " + point_label(cp.z));
    c.generators[cp.morse_index].push_back({point_label(cp.z), cp});
    top = std::max(top, cp.morse_index);
  }
  for (int n = 0; n <= top; ++n) c.generators[n];
  for (int n = 1; n <= top; ++n) c.boundary[n] = BitMatrix(c.size(n - 1), c.size(n));
  for (const auto& cc : counts) {
    const auto [dm, im] = locate(c, cc.z_minus.z);
    const auto [dp, ip] = locate(c, cc.z_plus.z);
    if (im < 0 || ip < 0)
      throw PreconditionError("build_complex: count endpoint " + point_label(im < 0 ? cc.z_minus.z : cc.z_plus.z) +
                              " is not a hyperbolic generator");
    if (dm - dp != 1)
      throw PreconditionError("build_complex: count between " + point_label(cc.z_minus.z) + " and " +
                              point_label(cc.z_plus.z) + " has index gap " + std::to_string(dm - dp));
    c.boundary[dm].set(ip, im, cc.count_mod2 == 1);
  }
  return c;
}

ChainComplexZ2 make_complex(const std::map<int, int>& sizes, const std::map<int, BitMatrix>& boundaries) {
  ChainComplexZ2 c;
  for (const auto& [deg, n] : sizes) {
    auto& g = c.generators[deg];
    for (int k = 0; k < n; ++k) g.push_back({"c" + std::to_string(deg) + "_" + std::to_string(k), std::nullopt});
  }
  for (const auto& [deg, m] : boundaries) {
    if (m.rows() != c.size(deg - 1) || m.cols() != c.size(deg))
      throw PreconditionError("make_complex: boundary " + std::to_string(deg) + " has the wrong shape");
    c.boundary[deg] = m;
  }
  return c;
}

std::vector<BoundaryViolation> boundary_squared_violations(const ChainComplexZ2& complex) {
  std::vector<BoundaryViolation> out;
  for (const auto& [deg, gens] : complex.generators) {
    (void)gens;
    if (!complex.generators.count(deg + 1) || !complex.generators.count(deg - 1)) continue;
    const BitMatrix prod = complex.boundary_matrix(deg) * complex.boundary_matrix(deg + 1);
    for (int r = 0; r < prod.rows(); ++r)
      for (int col = 0; col < prod.cols(); ++col)
        if (prod.get(r, col))
          out.push_back({deg, complex.generators.at(deg + 1)[col].label, complex.generators.at(deg - 1)[r].label});
  }
  return out;
}

bool verify_boundary_squared(const ChainComplexZ2& complex) { return boundary_squared_violations(complex).empty(); }

std::map<int, int> homology_ranks(ChainComplexZ2& complex) {
  const auto violations = boundary_squared_violations(complex);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw PropertyViolation("boundary squared is nonzero: " + v.from + " -> " + v.to + " in degree " +
                            std::to_string(v.degree));
  }
  std::map<int, int> ranks;
  for (const auto& [deg, gens] : complex.generators) {
    const int rank_n = complex.boundary_matrix(deg).rank();
    const int rank_up = complex.boundary_matrix(deg + 1).rank();
    ranks[deg] = static_cast<int>(gens.size()) - rank_n - rank_up;
  }
  complex.ranks = ranks;
  return ranks;
}

ChainComplexZ2 direct_sum(const ChainComplexZ2& a, const ChainComplexZ2& b) {
  ChainComplexZ2 c;
  for (const auto* part : {&a, &b})
    for (const auto& [deg, gens] : part->generators) {
      auto& dst = c.generators[deg];
      dst.insert(dst.end(), gens.begin(), gens.end());
    }
  for (const auto& [deg, gens] : c.generators) {
    (void)gens;
    if (!c.generators.count(deg - 1)) continue;
    BitMatrix m(c.size(deg - 1), c.size(deg));
    const BitMatrix ma = a.boundary_matrix(deg), mb = b.boundary_matrix(deg);
    for (int r = 0; r < ma.rows(); ++r)
      for (int col = 0; col < ma.cols(); ++col)
        if (ma.get(r, col)) m.set(r, col, true);
    for (int r = 0; r < mb.rows(); ++r)
      for (int col = 0; col < mb.cols(); ++col)
        if (mb.get(r, col)) m.set(a.size(deg - 1) + r, a.size(deg) + col, true);
    c.boundary[deg] = m;
  }
  c.warnings = a.warnings;
  c.warnings.insert(c.warnings.end(), b.warnings.begin(), b.warnings.end());
  return c;
}

int euler_characteristic_chains(const ChainComplexZ2& complex) {
  int chi = 0;
  for (const auto& [deg, gens] : complex.generators) chi += (deg % 2 == 0 ? 1 : -1) * static_cast<int>(gens.size());
  return chi;
}

int euler_characteristic_ranks(const std::map<int, int>& ranks) {
  int chi = 0;
  for (const auto& [deg, r] : ranks) chi += (deg % 2 == 0 ? 1 : -1) * r;
  return chi;
}

}  // namespace conley
