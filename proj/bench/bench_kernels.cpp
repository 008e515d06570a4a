#include "conley/parallel_kernels.hpp"
#include "conley/system.hpp"

#include <benchmark/benchmark.h>

#include <omp.h>

#include <cmath>
#include <map>

using namespace conley;

namespace {

struct Fixture {
  Grid grid;
  ConvolutionPlan plan;
  GridFunction v;
  Eigen::MatrixXd q;
  std::vector<Eigen::MatrixXd> left, right;

  explicit Fixture(int n) : grid(40.0, n) {
    const SystemSpec sys = double_well_system(0.1);
    plan = ConvolutionPlan(sys.kernel, grid);
    Eigen::MatrixXd vals(n, 1);
    q.resize(n, 1);
    for (int i = 0; i < n; ++i) {
      vals(i, 0) = std::tanh(grid.x(i));
      q(i, 0) = 1.0 / std::pow(std::cosh(grid.x(i)), 2);
    }
    v = GridFunction(grid, vals, Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0));
    left.assign(n, Eigen::MatrixXd::Identity(1, 1));
    right = left;
  }
};

const Fixture& fixture(int n) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Fixture(n)).first;
  return it->second;
}

void BM_convolve_serial(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  Eigen::MatrixXd out;
  for (auto _ : state) {
    kernels::convolve_serial(f.plan, f.v, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_convolve_omp(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  Eigen::MatrixXd out;
  for (auto _ : state) {
    kernels::convolve_omp(f.plan, f.v, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_coupling_serial(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  const int n = f.grid.size();
  Eigen::MatrixXd jac(n - 2, n - 2);
  for (auto _ : state) {
    jac.setZero();
    kernels::assemble_coupling_serial(f.plan, f.left, f.right, 1, n - 2, jac);
    benchmark::DoNotOptimize(jac.data());
  }
}

void BM_coupling_omp(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  const int n = f.grid.size();
  Eigen::MatrixXd jac(n - 2, n - 2);
  for (auto _ : state) {
    jac.setZero();
    kernels::assemble_coupling_omp(f.plan, f.left, f.right, 1, n - 2, jac);
    benchmark::DoNotOptimize(jac.data());
  }
}

void BM_boundary_serial(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::boundary_term_serial(f.plan, f.v, f.q, f.grid.center()));
}

void BM_boundary_omp(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::boundary_term_omp(f.plan, f.v, f.q, f.grid.center()));
}

}  // namespace

BENCHMARK(BM_convolve_serial)->Arg(1601)->Arg(4001)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_convolve_omp)->Arg(1601)->Arg(4001)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_coupling_serial)->Arg(1601)->Arg(4001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_coupling_omp)->Arg(1601)->Arg(4001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_boundary_serial)->Arg(1601)->Arg(4001)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_boundary_omp)->Arg(1601)->Arg(4001)->Unit(benchmark::kMicrosecond);

int main(int argc, char** argv) {
  kernels::set_workers(omp_get_max_threads());
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
