#include "conley/parallel_kernels.hpp"

#include "conley/errors.hpp"

#include <omp.h>

#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>

namespace conley {

namespace {

// 8-point Gauss–Legendre on [0, 1].
constexpr std::array<double, 8> kGlNodes = {0.019855071751231856, 0.10166676129318664, 0.2372337950418355,
                                            0.4082826787521751,  0.5917173212478249,  0.7627662049581645,
                                            0.8983332387068134,  0.9801449282487681};
constexpr std::array<double, 8> kGlWeights = {0.05061426814518813, 0.11119051722668724, 0.15685332293894363,
                                              0.18134189168918100, 0.18134189168918100, 0.15685332293894363,
                                              0.11119051722668724, 0.05061426814518813};

// Cardinal function of piecewise-cubic Lagrange interpolation on a unit grid
// (4-point stencil); reproduces cubics, sums to one over integer shifts.
double cubic_cardinal(double t) {
  const double s = std::abs(t);
  if (s < 1.0) return 0.5 * (s + 1.0) * (s - 1.0) * (s - 2.0);
  if (s < 2.0) return -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  return 0.0;
}

// ∫ profile(y)·φ(y/h − k) dy, cell by cell over the support of φ.
template <class F>
double cardinal_weight(F&& profile, double h, int k) {
  double w = 0.0;
  for (int m = k - 2; m < k + 2; ++m) {
    double cell = 0.0;
    for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
      const double t = m + kGlNodes[q];
      cell += kGlWeights[q] * profile(t * h) * cubic_cardinal(t - k);
    }
    w += cell * h;
  }
  return w;
}

std::atomic<int> g_workers{1};

Eigen::VectorXd tail_or_throw(const std::optional<Eigen::VectorXd>& tail, const char* side) {
  if (!tail) throw PreconditionError(std::string("convolution reaches ") + side +
                                     " of the grid but no tail constant is declared");
  return *tail;
}

void convolve_row(const ConvolutionPlan& plan, const GridFunction& v, int i, double* out, int ld) {
  const int n = v.size();
  const int D = plan.dim;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(D);
  Eigen::VectorXd s(D);
  for (const auto& t : plan.terms) {
    const int K = static_cast<int>(t.weights.size()) - 1;
    const int j0 = std::max(0, i - K);
    const int j1 = std::min(n - 1, i + K);
    for (int c = 0; c < D; ++c) {
      const double* col = v.values.col(c).data();
      double sum = 0.0;
      for (int j = j0; j <= j1; ++j) sum += t.weights[std::abs(i - j)] * col[j];
      s(c) = sum;
    }
    if (i < K) s += (t.prefix[K] - t.prefix[i]) * tail_or_throw(v.left_tail, "left");
    if (i + K > n - 1) s += (t.prefix[K] - t.prefix[n - 1 - i]) * tail_or_throw(v.right_tail, "right");
    acc.noalias() += t.matrix * s;
  }
  for (const auto& sh : plan.shifts) acc.noalias() += sh.matrix * v.at_position(i - sh.offset);
  for (int c = 0; c < D; ++c) out[c * ld] = acc(c);
}

void coupling_row(const ConvolutionPlan& plan, const std::vector<Eigen::MatrixXd>& left,
                  const std::vector<Eigen::MatrixXd>& right, int first, int last, int i, Eigen::MatrixXd& jac) {
  const int d = static_cast<int>(left[i].rows());
  const int r0 = (i - first) * d;
  for (const auto& t : plan.terms) {
    const int K = static_cast<int>(t.weights.size()) - 1;
    const Eigen::MatrixXd am = left[i] * t.matrix;
    const int j0 = std::max(first, i - K);
    const int j1 = std::min(last, i + K);
    if (d == 1 && am.cols() == 1) {
      const double a = am(0, 0);
      for (int j = j0; j <= j1; ++j) jac(r0, j - first) += a * t.weights[std::abs(i - j)] * right[j](0, 0);
    } else {
      for (int j = j0; j <= j1; ++j)
        jac.block(r0, (j - first) * d, d, d).noalias() += t.weights[std::abs(i - j)] * (am * right[j]);
    }
  }
  for (const auto& sh : plan.shifts) {
    const double pos = i - sh.offset;
    const double fl = std::floor(pos);
    const double theta = pos - fl;
    const Eigen::MatrixXd an = left[i] * sh.matrix;
    const int j = static_cast<int>(fl);
    if (j >= first && j <= last && theta < 1.0)
      jac.block(r0, (j - first) * d, d, d).noalias() += (1.0 - theta) * (an * right[j]);
    if (theta > 0.0 && j + 1 >= first && j + 1 <= last)
      jac.block(r0, (j + 1 - first) * d, d, d).noalias() += theta * (an * right[j + 1]);
  }
}

// Integral over index interval [a, b] (a ≤ b, fractional allowed) of the
// piecewise-linear interpolant of f given at integer nodes, in index units.
template <class F>
double integrate_linear(F&& f, double a, double b) {
  if (b <= a) return 0.0;
  double total = 0.0;
  double x = a;
  while (x < b) {
    const double cell = std::floor(x);
    const double next = std::min(b, cell + 1.0);
    const int j = static_cast<int>(cell);
    const double fa = f(j), fb = f(j + 1);
    auto lerp = [&](double s) { return fa + (s - cell) * (fb - fa); };
    total += 0.5 * (lerp(x) + lerp(next)) * (next - x);
    x = next;
  }
  return total;
}

double term_shift_integral(const ConvolutionPlan::Term& t, const GridFunction& s, const Eigen::MatrixXd& mq,
                           int p, int k) {
  // I(k) = signed trapezoid over nodes between p and p+k of s(j−k)·(Mq)_j.
  const int n = s.size();
  const int D = s.dim();
  auto f = [&](int j) -> double {
    if (j < 0 || j >= n) return 0.0;
    const int src = j - k;
    if (src >= 0 && src < n) {
      double acc = 0.0;
      for (int c = 0; c < D; ++c) acc += s.values(src, c) * mq(j, c);
      return acc;
    }
    return s.at(src).dot(mq.row(j).transpose());
  };
  (void)t;
  const int lo = std::min(p, p + k);
  const int hi = std::max(p, p + k);
  if (lo == hi) return 0.0;
  const int a = std::max(lo, 0);
  const int b = std::min(hi, n - 1);
  double sum = 0.0;
  if (a <= b) {
    for (int j = a; j <= b; ++j) sum += f(j);
    if (a == lo) sum -= 0.5 * f(lo);
    if (b == hi) sum -= 0.5 * f(hi);
  }
  return k > 0 ? sum : -sum;
}

double atom_integrals(const ConvolutionPlan& plan, const GridFunction& s, const Eigen::MatrixXd& q, int p) {
  const int n = s.size();
  double total = 0.0;
  for (const auto& sh : plan.shifts) {
    if (sh.offset == 0.0) continue;
    const Eigen::MatrixXd nq = q * sh.matrix.transpose();  // rows: (N q_j)ᵀ
    auto f = [&](int j) -> double {
      if (j < 0 || j >= n) return 0.0;
      return s.at_position(j - sh.offset).dot(nq.row(j).transpose());
    };
    const double lo = std::min<double>(p, p + sh.offset);
    const double hi = std::max<double>(p, p + sh.offset);
    const double val = integrate_linear(f, lo, hi);
    total += sh.offset > 0 ? val : -val;
  }
  return total;
}

}  // namespace

ConvolutionPlan::ConvolutionPlan(const Kernel& kernel, const Grid& g) : grid(g), dim(kernel.dim()) {
  const double h = grid.step();
  for (const auto& ct : kernel.continuous()) {
    Term term;
    term.matrix = ct.weight;
    const int K = std::max(2, static_cast<int>(std::ceil(kernel.cutoff() / h - 1e-9)) + 1);
    term.weights.assign(K + 1, 0.0);
    auto prof = [&](double y) { return ct.profile(y); };
    double partial = 0.0;
    for (int k = 0; k < K; ++k) {
      term.weights[k] = cardinal_weight(prof, h, k);
      partial += (k == 0 ? 0.5 : 1.0) * term.weights[k];
    }
    // Remaining half-mass (including everything beyond the cutoff) goes to w_K.
    term.weights[K] = 0.5 * ct.mass() - partial;
    term.prefix.resize(K + 1);
    double acc = 0.0;
    for (int k = 0; k <= K; ++k) {
      acc += term.weights[k];
      term.prefix[k] = acc;
    }
    terms.push_back(std::move(term));
  }
  for (const auto& at : kernel.atoms()) shifts.push_back({at.shift / h, at.weight});
}

int ConvolutionPlan::reach() const {
  int r = 0;
  for (const auto& t : terms) r = std::max(r, static_cast<int>(t.weights.size()) - 1);
  for (const auto& s : shifts) r = std::max(r, static_cast<int>(std::ceil(std::abs(s.offset))));
  return r;
}

namespace kernels {

void set_workers(int w) {
  g_workers = std::max(1, w);
  omp_set_num_threads(g_workers);
}
int workers() { return g_workers; }

void convolve_serial(const ConvolutionPlan& plan, const GridFunction& v, Eigen::MatrixXd& out) {
  const int n = v.size();
  out.resize(n, plan.dim);
  for (int i = 0; i < n; ++i) convolve_row(plan, v, i, out.data() + i, n);
}

void convolve_omp(const ConvolutionPlan& plan, const GridFunction& v, Eigen::MatrixXd& out) {
  const int n = v.size();
  out.resize(n, plan.dim);
  // Validate tails up front; exceptions must not escape the parallel region.
  if (n > 0) {
    convolve_row(plan, v, 0, out.data(), n);
    convolve_row(plan, v, n - 1, out.data() + n - 1, n);
  }
#pragma omp parallel for schedule(static)
  for (int i = 1; i < n - 1; ++i) convolve_row(plan, v, i, out.data() + i, n);
}

void convolve(const ConvolutionPlan& plan, const GridFunction& v, Eigen::MatrixXd& out) {
  if (workers() > 1 && !omp_in_parallel())
    convolve_omp(plan, v, out);
  else
    convolve_serial(plan, v, out);
}

Eigen::VectorXd convolve_node(const ConvolutionPlan& plan, const GridFunction& v, int i) {
  Eigen::VectorXd r(plan.dim);
  convolve_row(plan, v, i, r.data(), 1);
  return r;
}

void assemble_coupling_serial(const ConvolutionPlan& plan, const std::vector<Eigen::MatrixXd>& left,
                              const std::vector<Eigen::MatrixXd>& right, int first, int last,
                              Eigen::MatrixXd& jac) {
  for (int i = first; i <= last; ++i) coupling_row(plan, left, right, first, last, i, jac);
}

void assemble_coupling_omp(const ConvolutionPlan& plan, const std::vector<Eigen::MatrixXd>& left,
                           const std::vector<Eigen::MatrixXd>& right, int first, int last,
                           Eigen::MatrixXd& jac) {
#pragma omp parallel for schedule(static)
  for (int i = first; i <= last; ++i) coupling_row(plan, left, right, first, last, i, jac);
}

void assemble_coupling(const ConvolutionPlan& plan, const std::vector<Eigen::MatrixXd>& left,
                       const std::vector<Eigen::MatrixXd>& right, int first, int last, Eigen::MatrixXd& jac) {
  if (workers() > 1 && !omp_in_parallel())
    assemble_coupling_omp(plan, left, right, first, last, jac);
  else
    assemble_coupling_serial(plan, left, right, first, last, jac);
}

double boundary_term_serial(const ConvolutionPlan& plan, const GridFunction& s, const Eigen::MatrixXd& q,
                            int p) {
  const double h = plan.grid.step();
  double total = 0.0;
  for (const auto& t : plan.terms) {
    const Eigen::MatrixXd mq = q * t.matrix.transpose();
    const int K = static_cast<int>(t.weights.size()) - 1;
    std::vector<double> parts(2 * K + 1);
    for (int k = -K; k <= K; ++k) parts[k + K] = t.weights[std::abs(k)] * term_shift_integral(t, s, mq, p, k);
    double acc = 0.0;
    for (double v : parts) acc += v;
    total += acc;
  }
  total += atom_integrals(plan, s, q, p);
  return 0.5 * h * total;
}

double boundary_term_omp(const ConvolutionPlan& plan, const GridFunction& s, const Eigen::MatrixXd& q, int p) {
  const double h = plan.grid.step();
  // Tail access can throw; probe both extremes serially first.
  if (s.size() > 0) {
    s.at(-plan.reach() - 1 + std::min(0, p));
    s.at(s.size() + plan.reach());
  }
  double total = 0.0;
  for (const auto& t : plan.terms) {
    const Eigen::MatrixXd mq = q * t.matrix.transpose();
    const int K = static_cast<int>(t.weights.size()) - 1;
    std::vector<double> parts(2 * K + 1);
#pragma omp parallel for schedule(static)
    for (int k = -K; k <= K; ++k) parts[k + K] = t.weights[std::abs(k)] * term_shift_integral(t, s, mq, p, k);
    double acc = 0.0;
    for (double v : parts) acc += v;
    total += acc;
  }
  total += atom_integrals(plan, s, q, p);
  return 0.5 * h * total;
}

double boundary_term(const ConvolutionPlan& plan, const GridFunction& s, const Eigen::MatrixXd& q, int p) {
  if (workers() > 1 && !omp_in_parallel()) return boundary_term_omp(plan, s, q, p);
  return boundary_term_serial(plan, s, q, p);
}

}  // namespace kernels
}  // namespace conley
