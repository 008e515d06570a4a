#include "conley/commands.hpp"

#include "conley/errors.hpp"
#include "conley/logging.hpp"
#include "conley/parallel_kernels.hpp"
#include "conley/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace conley {

using nlohmann::json;

namespace {

constexpr double kLyapunovSlack = 1e-6;
constexpr double kEnergyTolerance = 1e-3;
constexpr double kTranslationTolerance = 1e-4;
constexpr double kSymbolMismatch = 1e-6;
constexpr double kSymbolImag = 1e-14;
constexpr double kSymbolRoot = 1e-10;

struct Context {
  std::optional<RunConfig> config;
  std::filesystem::path out_dir;
  json results = json::object();
  std::vector<std::string> warnings;
  json timings = json::object();
  std::vector<std::string> violations;

  void warn(const std::string& w) {
    log::info("warning: " + w);
    warnings.push_back(w);
  }
  void violate(const std::string& v) {
    log::info("property violation: " + v);
    violations.push_back(v);
  }
  const RunConfig& cfg() const { return *config; }
  std::filesystem::path output(const std::string& name) const { return out_dir / name; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

template <class F>
auto timed(Context& ctx, const std::string& name, F&& f) {
  const auto start = std::chrono::steady_clock::now();
  if constexpr (std::is_void_v<decltype(f())>) {
    f();
    ctx.timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  } else {
    auto r = f();
    ctx.timings[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
  }
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SearchBox search_box(const RunConfig& c) { return {to_eigen(c.search.lower), to_eigen(c.search.upper)}; }

MultistartConfig multistart(const RunConfig& c) {
  MultistartConfig m;
  m.grid = c.grid;
  m.shift_min = c.multistart.shift_min;
  m.shift_max = c.multistart.shift_max;
  m.perturbation = c.multistart.perturbation;
  m.solver = c.solver;
  return m;
}

std::vector<CriticalPoint> critical_points(Context& ctx, const SystemSpec& system) {
  const RunConfig& c = ctx.cfg();
  auto points = timed(ctx, "critical_points", [&] { return find_critical_points(system, search_box(c), c.search.seeds); });
  log::info("found " + std::to_string(points.size()) + " critical points");
  for (const auto& p : points)
    if (!p.hyperbolic()) ctx.warn("degenerate critical point " + point_label(p.z) + " excluded from the complex");
  return points;
}

json points_json(const std::vector<CriticalPoint>& points) {
  json a = json::array();
  for (const auto& p : points) a.push_back(to_json(p));
  return a;
}

std::pair<CriticalPoint, CriticalPoint> endpoints(const SystemSpec& system, const RunConfig& c) {
  if (!c.front.z_minus) throw ConfigError("front.z_minus", "required by this command");
  if (!c.front.z_plus) throw ConfigError("front.z_plus", "required by this command");
  return {refine_critical_point(system, to_eigen(*c.front.z_minus)), refine_critical_point(system, to_eigen(*c.front.z_plus))};
}

/// Direct solve at the configured β, or continuation along beta_path.
Front configured_front(Context& ctx) {
  const RunConfig& c = ctx.cfg();
  return timed(ctx, "solve_front", [&] {
    SystemSpec start = c.system;
    if (!c.beta_path.empty()) start.beta = c.beta_path.front();
    const auto [zm, zp] = endpoints(start, c);
    const GridFunction seed = tanh_seed(c.grid, zm.z, zp.z, c.front.seed_shift);
    Front front = solve_front(start, zm, zp, seed, c.solver);
    log::info("front converged in " + std::to_string(front.iterations) + " iterations, residual " +
              sci(front.residual));
    if (c.beta_path.size() > 1) front = continue_in_beta(c.system, front, c.beta_path, c.solver);
    if (front.transversality_warning)
      ctx.warn("front " + point_label(front.z_minus.z) + " -> " + point_label(front.z_plus.z) +
               " is close to non-transverse (least singular value " + sci(front.least_singular_value) + ")");
    return front;
  });
}

SystemSpec front_system(const RunConfig& c, const Front& f) {
  SystemSpec s = c.system;
  s.beta = f.beta;
  return s;
}

struct ComplexRun {
  std::vector<CriticalPoint> points;
  std::vector<ConnectionCount> counts;
  ChainComplexZ2 complex;
};

ComplexRun complex_pipeline(Context& ctx) {
  const RunConfig& c = ctx.cfg();
  ComplexRun run;
  run.points = critical_points(ctx, c.system);
  const MultistartConfig m = multistart(c);
  timed(ctx, "connection_counts", [&] {
    for (const auto& a : run.points)
      for (const auto& b : run.points) {
        if (!a.hyperbolic() || !b.hyperbolic() || a.morse_index != b.morse_index + 1) continue;
        log::info("counting fronts " + point_label(a.z) + " -> " + point_label(b.z));
        run.counts.push_back(count_connections(c.system, a, b, m));
      }
  });
  run.complex = build_complex(run.points, run.counts);
  for (const auto& w : run.complex.warnings) ctx.warnings.push_back(w);
  return run;
}

/// Fills results for the complex; records ∂∂ violations instead of throwing.
std::optional<std::map<int, int>> complex_results(Context& ctx, ComplexRun& run) {
  json counts = json::array();
  for (const auto& cc : run.counts) counts.push_back(to_json(cc));
  ctx.results["critical_points"] = points_json(run.points);
  ctx.results["connections"] = counts;
  const auto violations = boundary_squared_violations(run.complex);
  json bad = json::array();
  for (const auto& v : violations) bad.push_back({{"degree", v.degree}, {"from", v.from}, {"to", v.to}});
  ctx.results["boundary_squared_zero"] = violations.empty();
  ctx.results["boundary_squared_violations"] = bad;
  if (!violations.empty()) {
    ctx.results["complex"] = to_json(run.complex);
    ctx.violate("boundary operator does not square to zero");
    return std::nullopt;
  }
  const auto ranks = homology_ranks(run.complex);
  ctx.results["complex"] = to_json(run.complex);
  ctx.results["ranks"] = ranks_json(ranks);
  return ranks;
}

Block configured_block(Context& ctx, const SystemSpec& system) {
  const RunConfig& c = ctx.cfg();
  if (!c.block.geometry) throw ConfigError("block.geometry", "required by this command");
  return timed(ctx, "classify_boundary", [&] {
    Block b = classify_boundary(system, *c.block.geometry, c.block.samples);
    b.nonlocal_sup = nonlocal_sup_bound(system, *c.block.geometry);
    return b;
  });
}

json hypothesis_json(const Block& b) {
  const HypothesisResult h = morse_iso_hypothesis(b, b.nonlocal_sup.value_or(0.0));
  return {{"pass", h.pass}, {"ratio", h.ratio}};
}

// --- subcommands ----------------------------------------------------------

void cmd_critical_points(Context& ctx) {
  const auto points = critical_points(ctx, ctx.cfg().system);
  ctx.results["critical_points"] = points_json(points);
  int hyperbolic = 0;
  for (const auto& p : points) hyperbolic += p.hyperbolic();
  ctx.results["num_hyperbolic"] = hyperbolic;
}

void cmd_solve_front(Context& ctx) {
  const RunConfig& c = ctx.cfg();
  const Front f = configured_front(ctx);
  const SystemSpec s = front_system(c, f);
  ctx.results["front"] = to_json(f);
  ctx.results["fredholm_index"] = fredholm_index(f.z_minus, f.z_plus);
  const double tk = timed(ctx, "translation_check", [&] { return translation_kernel_check(s, f); });
  ctx.results["translation_kernel"] = {{"ratio", tk}, {"pass", tk <= kTranslationTolerance}};
  if (tk > kTranslationTolerance) ctx.warn("derivative of the front is not in the numerical kernel of the Jacobian");
  ctx.results["sojourn"] = to_json(sojourn(f.profile, 0.1, {f.z_minus.z, f.z_plus.z}));
  write_profile_csv(ctx.output(c.output.profile_csv), f.profile);
  ctx.results["profile_csv"] = c.output.profile_csv;
}

void cmd_count(Context& ctx) {
  const RunConfig& c = ctx.cfg();
  const auto [zm, zp] = endpoints(c.system, c);
  const ConnectionCount cc = timed(ctx, "count", [&] { return count_connections(c.system, zm, zp, multistart(c)); });
  ctx.results["connection"] = to_json(cc);
  for (const auto& f : cc.representatives)
    if (f.transversality_warning) ctx.warn("a counted front is close to non-transverse");
  if (!cc.representatives.empty()) {
    write_profile_csv(ctx.output(c.output.profile_csv), cc.representatives.front().profile);
    ctx.results["profile_csv"] = c.output.profile_csv;
  }
}

void cmd_complex(Context& ctx) {
  const RunConfig& c = ctx.cfg();
  ComplexRun run = complex_pipeline(ctx);
  const auto ranks = complex_results(ctx, run);
  if (!ranks || !c.block.geometry) return;
  const Block b = configured_block(ctx, c.system);
  const auto rel = relative_homology(b);
  const json hyp = hypothesis_json(b);
  const bool equal = rel == *ranks;
  ctx.results["block_homology"] = ranks_json(rel);
  ctx.results["morse_isomorphism"] = {{"hypothesis", hyp}, {"ranks_equal", equal}};
  if (hyp["pass"].get<bool>() && !equal) ctx.violate("Floer ranks differ from the block homology although the hypothesis holds");
}

void cmd_lyapunov_check(Context& ctx) {
  const RunConfig& c = ctx.cfg();
  const Front f = configured_front(ctx);
  const SystemSpec s = front_system(c, f);
  const Grid& g = f.grid();
  const double lo = -g.half_width() + c.lyapunov.margin;
  const double hi = g.half_width() - c.lyapunov.margin;
  const int first = static_cast<int>(std::ceil((lo + g.half_width()) / g.step() - 1e-9));
  const int last = static_cast<int>(std::floor((hi + g.half_width()) / g.step() + 1e-9));
  std::vector<int> nodes;
  for (int k = 0; k < c.lyapunov.samples; ++k) {
    const int p = first + static_cast<int>(std::lround(double(last - first) * k / (c.lyapunov.samples - 1)));
    if (nodes.empty() || p != nodes.back()) nodes.push_back(p);
  }
  std::vector<double> taus;
  for (int p : nodes) taus.push_back(g.x(p));

  const EnergyReport er = timed(ctx, "energy_report", [&] { return energy_report(s, f.profile, taus); });
  bool monotone = true;
  double worst = 0.0;
  for (std::size_t k = 1; k < er.lyapunov_samples.size(); ++k) {
    const double rise = er.lyapunov_samples[k].second - er.lyapunov_samples[k - 1].second;
    worst = std::max(worst, rise);
    if (rise > kLyapunovSlack) monotone = false;
  }
  const double tol = kEnergyTolerance * std::abs(er.delta_h);
  json energy = to_json(er);
  energy["tolerance"] = tol;
  energy["pass"] = er.identity_residual <= tol;
  ctx.results["front"] = to_json(f);
  ctx.results["energy"] = energy;
  ctx.results["lyapunov_monotone"] = {{"pass", monotone}, {"max_increase", worst}, {"slack", kLyapunovSlack}};

  std::mt19937 rng(c.lyapunov.seed);
  std::uniform_int_distribution<int> pick(first, last);
  LyapunovEvaluator lyap(s, f.profile);
  json windows = json::array();
  bool windows_pass = true;
  timed(ctx, "energy_windows", [&] {
    for (int w = 0; w < c.lyapunov.windows; ++w) {
      int a = pick(rng), b = pick(rng);
      while (a == b) b = pick(rng);
      if (a > b) std::swap(a, b);
      const double ra = energy_identity_check(s, f.profile, g.x(a), g.x(b));
      const double drop = lyap.at_node(a) - lyap.at_node(b);
      const bool ok = ra <= tol;
      windows_pass = windows_pass && ok;
      windows.push_back({{"a", g.x(a)}, {"b", g.x(b)}, {"lyapunov_drop", drop}, {"residual", ra}, {"pass", ok}});
    }
  });
  ctx.results["energy_windows"] = windows;
  write_lyapunov_csv(ctx.output(c.output.lyapunov_csv), er.lyapunov_samples);
  write_profile_csv(ctx.output(c.output.profile_csv), f.profile);
  ctx.results["lyapunov_csv"] = c.output.lyapunov_csv;
  ctx.results["profile_csv"] = c.output.profile_csv;
  if (!monotone) ctx.violate("quasi-Lyapunov functional increases along the shift");
  if (!energy["pass"].get<bool>()) ctx.violate("energy identity residual exceeds tolerance");
  if (!windows_pass) ctx.violate("windowed energy identity exceeds tolerance");
}

void cmd_block_verify(Context& ctx) {
  const RunConfig& c = ctx.cfg();
  if (!c.block.geometry && !c.block.family) throw ConfigError("block.geometry", "required by this command");
  if (c.block.geometry) {
    const Block b = configured_block(ctx, c.system);
    ctx.results["block"] = to_json(b);
    ctx.results["hypothesis"] = hypothesis_json(b);
  }
  if (c.block.family) {
    if (c.block.radii.empty()) throw ConfigError("block.radii", "required with block.family");
    const auto scan = timed(ctx, "stabilising_scan",
                            [&] { return stabilising_scan(c.system, *c.block.family, c.block.radii, c.block.samples); });
    ctx.results["stabilising_scan"] = to_json(scan);
    if (!scan.r0_prime) ctx.warn("no scanned radius satisfies the Morse isomorphism hypothesis");
  }
}

void cmd_rel_homology(Context& ctx) {
  const Block b = configured_block(ctx, ctx.cfg().system);
  ctx.results["block"] = to_json(b);
  ctx.results["hypothesis"] = hypothesis_json(b);
  ctx.results["ranks"] = ranks_json(relative_homology(b));
}

void cmd_forcing(Context& ctx) {
  const RunConfig& c = ctx.cfg();
  int count = 0;
  if (c.forcing.num_hyperbolic) {
    count = *c.forcing.num_hyperbolic;
  } else {
    const auto points = critical_points(ctx, c.system);
    for (const auto& p : points) count += p.hyperbolic();
    ctx.results["critical_points"] = points_json(points);
  }
  std::map<int, int> ranks;
  if (c.forcing.ranks) {
    ranks = *c.forcing.ranks;
  } else {
    ComplexRun run = complex_pipeline(ctx);
    const auto r = complex_results(ctx, run);
    if (!r) return;
    ranks = *r;
  }
  ctx.results["num_hyperbolic"] = count;
  ctx.results["ranks"] = ranks_json(ranks);
  ctx.results["forcing_bound"] = forcing_bound(count, ranks);
}

void cmd_symbol_scan(Context& ctx) {
  const RunConfig& c = ctx.cfg();
  const auto points = critical_points(ctx, c.system);
  json scans = json::array();
  timed(ctx, "symbol_scan", [&] {
    for (const auto& p : points) {
      if (!p.hyperbolic()) continue;
      const auto scan = hyperbolicity_scan(c.system, p.z, c.symbol.xi_max, c.symbol.samples);
      json e = to_json(scan);
      e["point"] = point_label(p.z);
      e["morse_index"] = p.morse_index;
      scans.push_back(e);
      if (scan.l0_mismatch > kSymbolMismatch) ctx.violate("L(0) differs from the Jacobian at " + point_label(p.z));
      if (scan.max_imag_symbol > kSymbolImag) ctx.violate("kernel symbol has an imaginary part");
      if (scan.min_abs_det <= kSymbolRoot) ctx.violate("det L(xi) vanishes near xi = " + std::to_string(scan.argmin_xi));
    }
  });
  json indices = json::array();
  for (const auto& a : points)
    for (const auto& b : points)
      if (a.hyperbolic() && b.hyperbolic() && &a != &b)
        indices.push_back({{"z_minus", point_label(a.z)}, {"z_plus", point_label(b.z)}, {"index", fredholm_index(a, b)}});
  ctx.results["critical_points"] = points_json(points);
  ctx.results["scans"] = scans;
  ctx.results["fredholm_indices"] = indices;
}

void cmd_decay(Context& ctx) {
  const RunConfig& c = ctx.cfg();
  const Front f = configured_front(ctx);
  const SystemSpec s = front_system(c, f);
  const double eta0 = s.kernel.decay_rate();
  const DecayPrediction pred = predicted_decay(s, f.z_minus, f.z_plus, eta0);
  auto side = [&](const std::optional<double>& fit, const std::optional<double>& p) {
    json j = {{"fitted", fit ? json(*fit) : json(nullptr)}, {"predicted", p ? json(*p) : json(nullptr)}};
    if (fit && p) j["relative_error"] = std::abs(*fit - *p) / *p;
    return j;
  };
  ctx.results["front"] = to_json(f);
  ctx.results["eta0"] = eta0;
  ctx.results["minus"] = side(f.decay_fit_minus, pred.minus);
  ctx.results["plus"] = side(f.decay_fit_plus, pred.plus);
  ctx.results["roots_minus"] = decay_rates(s, f.z_minus, eta0);
  ctx.results["roots_plus"] = decay_rates(s, f.z_plus, eta0);
  write_profile_csv(ctx.output(c.output.profile_csv), f.profile);
  ctx.results["profile_csv"] = c.output.profile_csv;
}

json neural_field_pipeline(Context& ctx) {
  json out = json::array();
  const double c = 2.0;
  const Sigmoid sg{SigmoidKind::logistic, 1.0, 1.0, 0.0};
  std::vector<double> radii;
  for (int r = 1; r <= 60; ++r) radii.push_back(r);
  for (int d = 1; d <= 3; ++d) {
    log::info("neural field, d = " + std::to_string(d));
    const ContinuousTerm term{KernelFamily::exponential, 5.0, 1.0, Eigen::MatrixXd::Identity(d, d)};
    const SystemSpec sys = neural_field_system(d, c, sg, Kernel(d, {term}, {}, 0.5));
    const double radius = 5.0;
    Block b = classify_boundary(sys, BallGeometry{d, radius});
    b.nonlocal_sup = nonlocal_sup_bound(sys, BallGeometry{d, radius});
    const auto ranks = relative_homology(b);
    const auto scan = stabilising_scan(sys, BlockFamily{FamilyKind::ball, d, 0}, radii);
    const double expected = radius / c;
    std::map<int, int> sphere{{d, 1}};
    for (int n = 0; n < d; ++n) sphere[n] = 0;
    json e = {{"dim", d},
              {"c", c},
              {"radius", radius},
              {"block", to_json(b)},
              {"c_perp_expected", expected},
              {"c_perp_relative_error", std::abs(b.c_perp - expected) / expected},
              {"ranks", ranks_json(ranks)},
              {"ranks_match", ranks == sphere},
              {"stabilising_scan", to_json(scan)},
              {"forcing_bound", forcing_bound(2, ranks)}};
    if (ranks != sphere) ctx.violate("neural field block homology is not that of a sphere in d = " + std::to_string(d));
    if (!scan.r0_prime) ctx.violate("stabilising scan never passes in d = " + std::to_string(d));
    out.push_back(e);
  }
  return out;
}

json polygon_pipeline(Context& ctx) {
  json out = json::array();
  for (int k = 1; k <= 4; ++k) {
    log::info("polygon block, k = " + std::to_string(k));
    const ContinuousTerm term{KernelFamily::exponential, 0.5, 1.0, Eigen::MatrixXd::Identity(2, 2)};
    const SystemSpec sys = fkn_system(k, 4, Kernel(2, {term}, {}, 0.5));
    const BlockGeometry geom = polygon_family(k, 3.0);
    Block b = classify_boundary(sys, geom);
    b.nonlocal_sup = nonlocal_sup_bound(sys, geom);
    const auto ranks = relative_homology(b);
    int total = 0;
    for (const auto& [deg, r] : ranks) total += r;
    const bool law = ranks.count(1) && ranks.at(1) == k - 1 && total == k - 1;
    json e = {{"k", k},
              {"radius", 3.0},
              {"block", to_json(b)},
              {"hypothesis", hypothesis_json(b)},
              {"ranks", ranks_json(ranks)},
              {"ranks_match", law},
              {"forcing_bound", forcing_bound(k, ranks)}};
    if (!law) ctx.violate("polygon block homology differs from k - 1 copies of Z2 in degree 1 for k = " + std::to_string(k));
    out.push_back(e);
  }
  return out;
}

void cmd_reproduce_paper(Context& ctx) {
  ctx.results["neural_field"] = timed(ctx, "neural_field", [&] { return neural_field_pipeline(ctx); });
  ctx.results["polygons"] = timed(ctx, "polygons", [&] { return polygon_pipeline(ctx); });
}

using Handler = std::function<void(Context&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> table = {
      {"critical-points", cmd_critical_points}, {"solve-front", cmd_solve_front},
      {"count", cmd_count},                     {"complex", cmd_complex},
      {"lyapunov-check", cmd_lyapunov_check},   {"block-verify", cmd_block_verify},
      {"rel-homology", cmd_rel_homology},       {"forcing", cmd_forcing},
      {"symbol-scan", cmd_symbol_scan},         {"decay", cmd_decay},
      {"reproduce-paper", cmd_reproduce_paper},
  };
  return table;
}

const Handler& find_handler(const std::string& command) {
  for (const auto& [name, h] : handlers())
    if (name == command) return h;
  throw ConfigError("command", "unknown command '" + command + "'");
}

CommandResult execute(const std::string& command, std::optional<RunConfig> config, const CommandOptions& options) {
  Context ctx;
  ctx.out_dir = options.out_dir;
  CommandResult result;
  std::string report_name = "report.json";
  const auto start = std::chrono::steady_clock::now();
  try {
    const Handler& handler = find_handler(command);
    if (config) {
      apply_overrides(*config, options);
      report_name = config->output.report;
      kernels::set_workers(config->workers);
    } else if (command != "reproduce-paper") {
      throw ConfigError("config", "--config is required for " + command);
    }
    ctx.config = std::move(config);
    handler(ctx);
    if (!ctx.violations.empty()) result.exit_code = kExitProperty;
  } catch (const ConfigError& e) {
    result = {kExitValidation, {}, e.what()};
    ctx.results["error_key"] = e.key();
  } catch (const PreconditionError& e) {
    result = {kExitValidation, {}, e.what()};
  } catch (const PropertyViolation& e) {
    result = {kExitProperty, {}, e.what()};
  } catch (const NumericError& e) {
    result = {kExitNumeric, {}, e.what()};
  } catch (const std::exception& e) {
    result = {kExitNumeric, {}, e.what()};
  }
  if (result.error.empty() && !ctx.violations.empty()) result.error = ctx.violations.front();
  ctx.timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json& r = result.report;
  r["command"] = command;
  r["config"] = ctx.config ? to_json(*ctx.config) : json(nullptr);
  r["results"] = ctx.results;
  r["warnings"] = ctx.warnings;
  r["violations"] = ctx.violations;
  r["status"] = {{"exit_code", result.exit_code}, {"error", result.error}};
  r["timings"] = ctx.timings;
  try {
    write_json(options.out_dir / report_name, r);
  } catch (const std::exception& e) {
    if (result.exit_code == kExitOk) result.exit_code = kExitValidation;
    if (result.error.empty()) result.error = e.what();
  }
  return result;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, h] : handlers()) n.push_back(name);
    return n;
  }();
  return names;
}

void apply_overrides(RunConfig& config, const CommandOptions& options) {
  if (options.workers) {
    if (*options.workers < 1) throw ConfigError("workers", "must be at least 1");
    config.workers = *options.workers;
  }
  if (options.seed_shift_range) {
    const auto [a, b] = *options.seed_shift_range;
    if (a > b) throw ConfigError("multistart.shift_max", "seed shift range must satisfy a <= b");
    config.multistart.shift_min = a;
    config.multistart.shift_max = b;
  }
  if (options.beta) {
    if (!(*options.beta >= 0.0 && *options.beta <= 1.0)) throw ConfigError("system.beta", "must lie in [0, 1]");
    config.system.beta = *options.beta;
  }
}

CommandResult run_command(const std::string& command, const CommandOptions& options) {
  std::optional<RunConfig> config;
  if (options.config) {
    try {
      config = load_config(*options.config);
    } catch (const ConfigError& e) {
      CommandResult r{kExitValidation, {}, e.what()};
      r.report = {{"command", command},
                  {"config", nullptr},
                  {"results", {{"error_key", e.key()}}},
                  {"warnings", json::array()},
                  {"violations", json::array()},
                  {"status", {{"exit_code", kExitValidation}, {"error", e.what()}}}};
      try {
        write_json(options.out_dir / "report.json", r.report);
      } catch (const std::exception&) {
      }
      return r;
    }
  }
  return execute(command, std::move(config), options);
}

CommandResult run_command(const std::string& command, RunConfig config, const CommandOptions& options) {
  return execute(command, std::move(config), options);
}

json strip_timings(json report) {
  report.erase("timings");
  return report;
}

}  // namespace conley
