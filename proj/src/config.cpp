#include "conley/config.hpp"

#include "conley/errors.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace conley {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "config" : path, "expected an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  check_object(j, path);
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (!ok.count(k)) throw ConfigError(join(path, k), "unknown key");
  }
}

const json& require(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(join(path, key), "missing required key");
  return j.at(key);
}

double get_double(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError(key, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError(key, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_vector(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError(key, "expected an array of numbers");
  std::vector<double> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(get_double(j[i], key + "[" + std::to_string(i) + "]"));
  return v;
}

template <class T, class F>
T opt(const json& j, const std::string& path, const char* key, T fallback, F&& getter) {
  if (!j.contains(key)) return fallback;
  return getter(j.at(key), join(path, key));
}

Eigen::MatrixXd get_matrix(const json& j, const std::string& key, int dim) {
  if (j.is_number()) {
    if (dim != 1) throw ConfigError(key, "scalar weight only allowed for D = 1");
    return Eigen::MatrixXd::Constant(1, 1, j.get<double>());
  }
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError(key, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  Eigen::MatrixXd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto row = get_vector(j[r], key + "[" + std::to_string(r) + "]");
    if (static_cast<int>(row.size()) != dim)
      throw ConfigError(key, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
    for (int c = 0; c < dim; ++c) m(r, c) = row[c];
  }
  return m;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Polynomial parse_polynomial(const json& j, const std::string& key, int dim) {
  if (!j.is_array()) throw ConfigError(key, "expected an array of monomials");
  Polynomial p{dim, {}};
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string k = key + "[" + std::to_string(i) + "]";
    check_keys(j[i], k, {"coef", "powers"});
    Monomial m;
    m.coef = get_double(require(j[i], k, "coef"), join(k, "coef"));
    const json& pw = require(j[i], k, "powers");
    if (!pw.is_array()) throw ConfigError(join(k, "powers"), "expected an array of integers");
    for (std::size_t q = 0; q < pw.size(); ++q) {
      const int e = get_int(pw[q], join(k, "powers"));
      if (e < 0) throw ConfigError(join(k, "powers"), "exponents must be nonnegative");
      m.powers.push_back(e);
    }
    if (static_cast<int>(m.powers.size()) != dim)
      throw ConfigError(join(k, "powers"), "expected " + std::to_string(dim) + " exponents");
    p.terms.push_back(m);
  }
  return p;
}

json polynomial_json(const Polynomial& p) {
  json a = json::array();
  for (const auto& m : p.terms) a.push_back({{"coef", m.coef}, {"powers", m.powers}});
  return a;
}

Sigmoid parse_sigmoid(const json& j, const std::string& path, std::initializer_list<const char*> extra_keys = {}) {
  std::vector<const char*> keys = {"type", "kind", "scale", "gain", "threshold"};
  keys.insert(keys.end(), extra_keys.begin(), extra_keys.end());
  check_object(j, path);
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::find_if(keys.begin(), keys.end(), [&](const char* a) { return k == a; }) == keys.end())
      throw ConfigError(join(path, k), "unknown key");
  }
  Sigmoid s;
  const std::string kind = opt<std::string>(j, path, "kind", "logistic", get_string);
  if (kind == "logistic")
    s.kind = SigmoidKind::logistic;
  else if (kind == "tanh")
    s.kind = SigmoidKind::tanh;
  else
    throw ConfigError(join(path, "kind"), "unknown sigmoid '" + kind + "' (logistic, tanh)");
  s.scale = opt<double>(j, path, "scale", 1.0, get_double);
  s.gain = opt<double>(j, path, "gain", 1.0, get_double);
  s.threshold = opt<double>(j, path, "threshold", 0.0, get_double);
  return s;
}

json sigmoid_fields(const Sigmoid& s) {
  return {{"kind", s.kind == SigmoidKind::logistic ? "logistic" : "tanh"},
          {"scale", s.scale},
          {"gain", s.gain},
          {"threshold", s.threshold}};
}

Kernel parse_kernel(const json& j, const std::string& path, int dim) {
  check_keys(j, path, {"continuous", "atoms", "decay_rate", "quadrature_cutoff"});
  std::vector<ContinuousTerm> terms;
  if (j.contains("continuous")) {
    const json& c = j.at("continuous");
    if (!c.is_array()) throw ConfigError(join(path, "continuous"), "expected an array");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string k = join(path, "continuous[" + std::to_string(i) + "]");
      check_keys(c[i], k, {"family", "a", "b", "weight"});
      ContinuousTerm t;
      const std::string fam = get_string(require(c[i], k, "family"), join(k, "family"));
      if (fam == "exponential")
        t.family = KernelFamily::exponential;
      else if (fam == "gaussian")
        t.family = KernelFamily::gaussian;
      else if (fam == "bump")
        t.family = KernelFamily::bump;
      else
        throw ConfigError(join(k, "family"), "unknown kernel family '" + fam + "' (exponential, gaussian, bump)");
      t.a = get_double(require(c[i], k, "a"), join(k, "a"));
      t.b = get_double(require(c[i], k, "b"), join(k, "b"));
      t.weight = c[i].contains("weight") ? get_matrix(c[i].at("weight"), join(k, "weight"), dim)
                                         : Eigen::MatrixXd::Identity(dim, dim);
      terms.push_back(t);
    }
  }
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    const json& a = j.at("atoms");
    if (!a.is_array()) throw ConfigError(join(path, "atoms"), "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string k = join(path, "atoms[" + std::to_string(i) + "]");
      check_keys(a[i], k, {"shift", "weight"});
      Atom at;
      at.shift = get_double(require(a[i], k, "shift"), join(k, "shift"));
      at.weight = get_matrix(require(a[i], k, "weight"), join(k, "weight"), dim);
      atoms.push_back(at);
    }
  }
  const double decay = get_double(require(j, path, "decay_rate"), join(path, "decay_rate"));
  std::optional<double> cutoff;
  if (j.contains("quadrature_cutoff") && !j.at("quadrature_cutoff").is_null())
    cutoff = get_double(j.at("quadrature_cutoff"), join(path, "quadrature_cutoff"));
  try {
    return Kernel(dim, std::move(terms), std::move(atoms), decay, cutoff);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    throw ConfigError("system." + e.key(), msg.substr(msg.find(": ") + 2));
  }
}

json kernel_json(const Kernel& k) {
  json c = json::array();
  for (const auto& t : k.continuous()) {
    const char* fam = t.family == KernelFamily::exponential ? "exponential"
                      : t.family == KernelFamily::gaussian  ? "gaussian"
                                                            : "bump";
    c.push_back({{"family", fam}, {"a", t.a}, {"b", t.b}, {"weight", matrix_json(t.weight)}});
  }
  json a = json::array();
  for (const auto& at : k.atoms()) a.push_back({{"shift", at.shift}, {"weight", matrix_json(at.weight)}});
  json out = {{"continuous", c}, {"atoms", a}, {"decay_rate", k.decay_rate()}};
  out["quadrature_cutoff"] = k.requested_cutoff() ? json(*k.requested_cutoff()) : json(nullptr);
  return out;
}

SystemSpec parse_system(const json& j) {
  const std::string path = "system";
  check_keys(j, path, {"state_dim", "coupling_dim", "coupling", "potential", "metric", "kernel", "beta"});
  SystemSpec s;
  s.state_dim = get_int(require(j, path, "state_dim"), "system.state_dim");
  if (s.state_dim < 1) throw ConfigError("system.state_dim", "must be positive");
  s.coupling_dim = opt<int>(j, path, "coupling_dim", s.state_dim, get_int);
  if (s.coupling_dim < 1) throw ConfigError("system.coupling_dim", "must be positive");
  const int d = s.state_dim;

  if (j.contains("coupling")) {
    const json& c = j.at("coupling");
    check_object(c, "system.coupling");
    const std::string type = get_string(require(c, "system.coupling", "type"), "system.coupling.type");
    if (type == "identity") {
      check_keys(c, "system.coupling", {"type"});
      s.coupling = IdentityCoupling{};
    } else if (type == "sigmoid") {
      s.coupling = SigmoidCoupling{parse_sigmoid(c, "system.coupling")};
    } else if (type == "polynomial") {
      check_keys(c, "system.coupling", {"type", "components"});
      const json& comps = require(c, "system.coupling", "components");
      if (!comps.is_array()) throw ConfigError("system.coupling.components", "expected an array");
      PolynomialCoupling pc;
      for (std::size_t i = 0; i < comps.size(); ++i)
        pc.components.push_back(
            parse_polynomial(comps[i], "system.coupling.components[" + std::to_string(i) + "]", d));
      s.coupling = pc;
    } else {
      throw ConfigError("system.coupling.type", "unknown coupling '" + type + "' (identity, sigmoid, polynomial)");
    }
  }

  const json& p = require(j, path, "potential");
  check_object(p, "system.potential");
  const std::string ptype = get_string(require(p, "system.potential", "type"), "system.potential.type");
  if (ptype == "polynomial") {
    check_keys(p, "system.potential", {"type", "terms"});
    s.potential = PolynomialPotential{parse_polynomial(require(p, "system.potential", "terms"), "system.potential.terms", d)};
  } else if (ptype == "fkn") {
    check_keys(p, "system.potential", {"type", "k", "n", "terms"});
    FknPotential f;
    f.k = get_int(require(p, "system.potential", "k"), "system.potential.k");
    f.n = get_int(require(p, "system.potential", "n"), "system.potential.n");
    f.extra = p.contains("terms") ? parse_polynomial(p.at("terms"), "system.potential.terms", d) : Polynomial{d, {}};
    s.potential = f;
  } else if (ptype == "neural_field") {
    NeuralFieldPotential nf;
    nf.sigmoid = parse_sigmoid(p, "system.potential", {"c"});
    nf.c = get_double(require(p, "system.potential", "c"), "system.potential.c");
    s.potential = nf;
  } else {
    throw ConfigError("system.potential.type", "unknown potential '" + ptype + "' (polynomial, fkn, neural_field)");
  }

  if (j.contains("metric")) {
    const json& m = j.at("metric");
    check_object(m, "system.metric");
    const std::string type = get_string(require(m, "system.metric", "type"), "system.metric.type");
    if (type == "identity") {
      check_keys(m, "system.metric", {"type", "scale"});
      s.metric = IdentityMetric{opt<double>(m, "system.metric", "scale", 1.0, get_double)};
    } else if (type == "coupling_induced") {
      check_keys(m, "system.metric", {"type"});
      s.metric = CouplingInducedMetric{};
    } else {
      throw ConfigError("system.metric.type", "unknown metric '" + type + "' (identity, coupling_induced)");
    }
  }

  s.kernel = parse_kernel(require(j, path, "kernel"), "system.kernel", s.coupling_dim);
  s.beta = opt<double>(j, path, "beta", 1.0, get_double);
  s.validate();
  return s;
}

BlockGeometry parse_geometry(const json& j, const std::string& path) {
  check_object(j, path);
  const std::string type = get_string(require(j, path, "type"), join(path, "type"));
  BlockGeometry g;
  if (type == "interval") {
    check_keys(j, path, {"type", "a", "b"});
    g = IntervalGeometry{get_double(require(j, path, "a"), join(path, "a")),
                         get_double(require(j, path, "b"), join(path, "b"))};
  } else if (type == "ball") {
    check_keys(j, path, {"type", "dim", "radius"});
    g = BallGeometry{get_int(require(j, path, "dim"), join(path, "dim")),
                     get_double(require(j, path, "radius"), join(path, "radius"))};
  } else if (type == "polygon") {
    check_keys(j, path, {"type", "vertices"});
    const json& vs = require(j, path, "vertices");
    if (!vs.is_array()) throw ConfigError(join(path, "vertices"), "expected an array of [x, y]");
    PolygonGeometry pg;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const auto v = get_vector(vs[i], join(path, "vertices"));
      if (v.size() != 2) throw ConfigError(join(path, "vertices"), "each vertex needs two coordinates");
      pg.vertices.emplace_back(v[0], v[1]);
    }
    g = pg;
  } else if (type == "lens") {
    check_keys(j, path, {"type", "radius"});
    g = LensGeometry{get_double(require(j, path, "radius"), join(path, "radius"))};
  } else if (type == "regular_polygon") {
    check_keys(j, path, {"type", "k", "radius"});
    const int k = get_int(require(j, path, "k"), join(path, "k"));
    if (k < 1) throw ConfigError(join(path, "k"), "must be at least 1");
    g = polygon_family(k, get_double(require(j, path, "radius"), join(path, "radius")));
  } else {
    throw ConfigError(join(path, "type"), "unknown geometry '" + type + "' (interval, ball, polygon, lens, regular_polygon)");
  }
  try {
    validate_geometry(g);
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    throw ConfigError(path, msg.substr(msg.find(": ") + 2));
  }
  return g;
}

BlockSettings parse_block(const json& j) {
  const std::string path = "block";
  check_keys(j, path, {"geometry", "samples", "family", "radii"});
  BlockSettings b;
  if (j.contains("geometry")) b.geometry = parse_geometry(j.at("geometry"), "block.geometry");
  b.samples = opt<int>(j, path, "samples", 200, get_int);
  if (b.samples < 1) throw ConfigError("block.samples", "must be positive");
  if (j.contains("family")) {
    const json& f = j.at("family");
    check_keys(f, "block.family", {"kind", "dim", "k"});
    BlockFamily fam;
    const std::string kind = get_string(require(f, "block.family", "kind"), "block.family.kind");
    if (kind == "interval")
      fam.kind = FamilyKind::interval;
    else if (kind == "ball")
      fam.kind = FamilyKind::ball;
    else if (kind == "polygon")
      fam.kind = FamilyKind::polygon;
    else
      throw ConfigError("block.family.kind", "unknown family '" + kind + "' (interval, ball, polygon)");
    fam.dim = opt<int>(f, "block.family", "dim", 2, get_int);
    fam.k = opt<int>(f, "block.family", "k", 2, get_int);
    if (fam.kind == FamilyKind::ball && (fam.dim < 1 || fam.dim > 3))
      throw ConfigError("block.family.dim", "balls need 1 <= d <= 3");
    if (fam.kind == FamilyKind::polygon && fam.k < 1) throw ConfigError("block.family.k", "must be at least 1");
    b.family = fam;
  }
  if (j.contains("radii")) {
    b.radii = get_vector(j.at("radii"), "block.radii");
    for (double r : b.radii)
      if (!(r > 0.0)) throw ConfigError("block.radii", "radii must be positive");
  }
  return b;
}

json family_json(const BlockFamily& f) {
  const char* kind = f.kind == FamilyKind::interval ? "interval" : f.kind == FamilyKind::ball ? "ball" : "polygon";
  return {{"kind", kind}, {"dim", f.dim}, {"k", f.k}};
}

}  // namespace

RunConfig parse_config(const json& j) {
  check_keys(j, "", {"system", "grid", "solver", "search", "multistart", "front", "beta_path", "lyapunov", "block",
                     "symbol", "forcing", "output", "workers"});
  RunConfig c;
  c.system = parse_system(require(j, "", "system"));
  const int d = c.system.state_dim;

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "grid", {"L", "n"});
    c.grid = Grid(opt<double>(g, "grid", "L", 40.0, get_double), opt<int>(g, "grid", "n", 4001, get_int));
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    check_keys(s, "solver", {"tolerance", "max_iterations", "damping_retries", "fd_step", "min_rcond",
                             "transversality_threshold"});
    c.solver.tolerance = opt<double>(s, "solver", "tolerance", c.solver.tolerance, get_double);
    c.solver.max_iterations = opt<int>(s, "solver", "max_iterations", c.solver.max_iterations, get_int);
    c.solver.damping_retries = opt<int>(s, "solver", "damping_retries", c.solver.damping_retries, get_int);
    c.solver.fd_step = opt<double>(s, "solver", "fd_step", c.solver.fd_step, get_double);
    c.solver.min_rcond = opt<double>(s, "solver", "min_rcond", c.solver.min_rcond, get_double);
    c.solver.transversality_threshold =
        opt<double>(s, "solver", "transversality_threshold", c.solver.transversality_threshold, get_double);
    if (!(c.solver.tolerance > 0.0)) throw ConfigError("solver.tolerance", "must be positive");
    if (c.solver.max_iterations < 1) throw ConfigError("solver.max_iterations", "must be positive");
    if (c.solver.damping_retries < 0) throw ConfigError("solver.damping_retries", "must be nonnegative");
    if (!(c.solver.fd_step > 0.0)) throw ConfigError("solver.fd_step", "must be positive");
  }
  c.search.lower.assign(d, -2.0);
  c.search.upper.assign(d, 2.0);
  if (j.contains("search")) {
    const json& s = j.at("search");
    check_keys(s, "search", {"lower", "upper", "seeds"});
    if (s.contains("lower")) c.search.lower = get_vector(s.at("lower"), "search.lower");
    if (s.contains("upper")) c.search.upper = get_vector(s.at("upper"), "search.upper");
    c.search.seeds = opt<int>(s, "search", "seeds", 32, get_int);
    if (static_cast<int>(c.search.lower.size()) != d) throw ConfigError("search.lower", "dimension must equal d");
    if (static_cast<int>(c.search.upper.size()) != d) throw ConfigError("search.upper", "dimension must equal d");
    for (int i = 0; i < d; ++i)
      if (!(c.search.lower[i] < c.search.upper[i])) throw ConfigError("search.upper", "must exceed search.lower");
    if (c.search.seeds < 1) throw ConfigError("search.seeds", "must be positive");
  }
  if (j.contains("multistart")) {
    const json& m = j.at("multistart");
    check_keys(m, "multistart", {"shift_min", "shift_max", "perturbation"});
    c.multistart.shift_min = opt<int>(m, "multistart", "shift_min", -5, get_int);
    c.multistart.shift_max = opt<int>(m, "multistart", "shift_max", 5, get_int);
    c.multistart.perturbation = opt<double>(m, "multistart", "perturbation", 0.2, get_double);
    if (c.multistart.shift_min > c.multistart.shift_max)
      throw ConfigError("multistart.shift_max", "must not be below shift_min");
  }
  if (j.contains("front")) {
    const json& f = j.at("front");
    check_keys(f, "front", {"z_minus", "z_plus", "seed_shift"});
    if (f.contains("z_minus")) c.front.z_minus = get_vector(f.at("z_minus"), "front.z_minus");
    if (f.contains("z_plus")) c.front.z_plus = get_vector(f.at("z_plus"), "front.z_plus");
    c.front.seed_shift = opt<double>(f, "front", "seed_shift", 0.0, get_double);
    if (c.front.z_minus && static_cast<int>(c.front.z_minus->size()) != d)
      throw ConfigError("front.z_minus", "dimension must equal d");
    if (c.front.z_plus && static_cast<int>(c.front.z_plus->size()) != d)
      throw ConfigError("front.z_plus", "dimension must equal d");
  }
  if (j.contains("beta_path")) {
    c.beta_path = get_vector(j.at("beta_path"), "beta_path");
    for (double b : c.beta_path)
      if (!(b >= 0.0 && b <= 1.0)) throw ConfigError("beta_path", "values must lie in [0, 1]");
  }
  if (j.contains("lyapunov")) {
    const json& l = j.at("lyapunov");
    check_keys(l, "lyapunov", {"samples", "margin", "windows", "seed"});
    c.lyapunov.samples = opt<int>(l, "lyapunov", "samples", 60, get_int);
    c.lyapunov.margin = opt<double>(l, "lyapunov", "margin", 5.0, get_double);
    c.lyapunov.windows = opt<int>(l, "lyapunov", "windows", 5, get_int);
    c.lyapunov.seed = static_cast<unsigned>(opt<int>(l, "lyapunov", "seed", 1, get_int));
    if (c.lyapunov.samples < 2) throw ConfigError("lyapunov.samples", "need at least 2 samples");
    if (!(c.lyapunov.margin >= 0.0 && c.lyapunov.margin < c.grid.half_width()))
      throw ConfigError("lyapunov.margin", "must lie in [0, L)");
  }
  if (j.contains("block")) c.block = parse_block(j.at("block"));
  if (j.contains("symbol")) {
    const json& s = j.at("symbol");
    check_keys(s, "symbol", {"xi_max", "samples"});
    c.symbol.xi_max = opt<double>(s, "symbol", "xi_max", 50.0, get_double);
    c.symbol.samples = opt<int>(s, "symbol", "samples", 2001, get_int);
    if (!(c.symbol.xi_max > 0.0)) throw ConfigError("symbol.xi_max", "must be positive");
    if (c.symbol.samples < 2) throw ConfigError("symbol.samples", "need at least 2 samples");
  }
  if (j.contains("forcing")) {
    const json& f = j.at("forcing");
    check_keys(f, "forcing", {"num_hyperbolic", "ranks"});
    if (f.contains("num_hyperbolic")) {
      c.forcing.num_hyperbolic = get_int(f.at("num_hyperbolic"), "forcing.num_hyperbolic");
      if (*c.forcing.num_hyperbolic < 0) throw ConfigError("forcing.num_hyperbolic", "must be nonnegative");
    }
    if (f.contains("ranks")) {
      const json& r = f.at("ranks");
      check_object(r, "forcing.ranks");
      std::map<int, int> ranks;
      for (const auto& [k, v] : r.items()) {
        int deg = 0;
        try {
          std::size_t pos = 0;
          deg = std::stoi(k, &pos);
          if (pos != k.size()) throw std::invalid_argument(k);
        } catch (const std::exception&) {
          throw ConfigError("forcing.ranks", "degree keys must be integers, got '" + k + "'");
        }
        ranks[deg] = get_int(v, "forcing.ranks." + k);
        if (ranks[deg] < 0) throw ConfigError("forcing.ranks." + k, "must be nonnegative");
      }
      c.forcing.ranks = ranks;
    }
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"report", "profile_csv", "lyapunov_csv"});
    c.output.report = opt<std::string>(o, "output", "report", c.output.report, get_string);
    c.output.profile_csv = opt<std::string>(o, "output", "profile_csv", c.output.profile_csv, get_string);
    c.output.lyapunov_csv = opt<std::string>(o, "output", "lyapunov_csv", c.output.lyapunov_csv, get_string);
  }
  c.workers = opt<int>(j, "", "workers", 1, get_int);
  if (c.workers < 1) throw ConfigError("workers", "must be at least 1");
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const SystemSpec& s) {
  json j;
  j["state_dim"] = s.state_dim;
  j["coupling_dim"] = s.coupling_dim;
  j["coupling"] = std::visit(overloaded{
                                 [](const IdentityCoupling&) { return json{{"type", "identity"}}; },
                                 [](const SigmoidCoupling& c) {
                                   json o = sigmoid_fields(c.sigmoid);
                                   o["type"] = "sigmoid";
                                   return o;
                                 },
                                 [](const PolynomialCoupling& c) {
                                   json comps = json::array();
                                   for (const auto& p : c.components) comps.push_back(polynomial_json(p));
                                   return json{{"type", "polynomial"}, {"components", comps}};
                                 },
                             },
                             s.coupling);
  j["potential"] = std::visit(overloaded{
                                  [](const PolynomialPotential& p) {
                                    return json{{"type", "polynomial"}, {"terms", polynomial_json(p.poly)}};
                                  },
                                  [](const FknPotential& f) {
                                    return json{{"type", "fkn"}, {"k", f.k}, {"n", f.n}, {"terms", polynomial_json(f.extra)}};
                                  },
                                  [](const NeuralFieldPotential& nf) {
                                    json o = sigmoid_fields(nf.sigmoid);
                                    o["type"] = "neural_field";
                                    o["c"] = nf.c;
                                    return o;
                                  },
                              },
                              s.potential);
  j["metric"] = std::visit(overloaded{
                               [](const IdentityMetric& m) { return json{{"type", "identity"}, {"scale", m.scale}}; },
                               [](const CouplingInducedMetric&) { return json{{"type", "coupling_induced"}}; },
                           },
                           s.metric);
  j["kernel"] = kernel_json(s.kernel);
  j["beta"] = s.beta;
  return j;
}

json to_json(const BlockGeometry& geometry) {
  return std::visit(overloaded{
                        [](const IntervalGeometry& g) { return json{{"type", "interval"}, {"a", g.a}, {"b", g.b}}; },
                        [](const BallGeometry& g) { return json{{"type", "ball"}, {"dim", g.dim}, {"radius", g.radius}}; },
                        [](const PolygonGeometry& g) {
                          json vs = json::array();
                          for (const auto& v : g.vertices) vs.push_back({v.x(), v.y()});
                          return json{{"type", "polygon"}, {"vertices", vs}};
                        },
                        [](const LensGeometry& g) { return json{{"type", "lens"}, {"radius", g.radius}}; },
                    },
                    geometry);
}

json to_json(const RunConfig& c) {
  json j;
  j["system"] = to_json(c.system);
  j["grid"] = {{"L", c.grid.half_width()}, {"n", c.grid.size()}};
  j["solver"] = {{"tolerance", c.solver.tolerance},
                 {"max_iterations", c.solver.max_iterations},
                 {"damping_retries", c.solver.damping_retries},
                 {"fd_step", c.solver.fd_step},
                 {"min_rcond", c.solver.min_rcond},
                 {"transversality_threshold", c.solver.transversality_threshold}};
  j["search"] = {{"lower", c.search.lower}, {"upper", c.search.upper}, {"seeds", c.search.seeds}};
  j["multistart"] = {{"shift_min", c.multistart.shift_min},
                     {"shift_max", c.multistart.shift_max},
                     {"perturbation", c.multistart.perturbation}};
  json front = {{"seed_shift", c.front.seed_shift}};
  if (c.front.z_minus) front["z_minus"] = *c.front.z_minus;
  if (c.front.z_plus) front["z_plus"] = *c.front.z_plus;
  j["front"] = front;
  j["beta_path"] = c.beta_path;
  j["lyapunov"] = {{"samples", c.lyapunov.samples},
                   {"margin", c.lyapunov.margin},
                   {"windows", c.lyapunov.windows},
                   {"seed", c.lyapunov.seed}};
  json block = {{"samples", c.block.samples}, {"radii", c.block.radii}};
  if (c.block.geometry) block["geometry"] = to_json(*c.block.geometry);
  if (c.block.family) block["family"] = family_json(*c.block.family);
  j["block"] = block;
  j["symbol"] = {{"xi_max", c.symbol.xi_max}, {"samples", c.symbol.samples}};
  json forcing = json::object();
  if (c.forcing.num_hyperbolic) forcing["num_hyperbolic"] = *c.forcing.num_hyperbolic;
  if (c.forcing.ranks) {
    json r = json::object();
    for (const auto& [deg, v] : *c.forcing.ranks) r[std::to_string(deg)] = v;
    forcing["ranks"] = r;
  }
  j["forcing"] = forcing;
  j["output"] = {{"report", c.output.report}, {"profile_csv", c.output.profile_csv}, {"lyapunov_csv", c.output.lyapunov_csv}};
  j["workers"] = c.workers;
  return j;
}

}  // namespace conley
