#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <random>

#include "ibvp/derivative.hpp"

using namespace ibvp;

namespace {

struct Fixture {
  explicit Fixture(int m) {
    const auto g = make_grid(m);
    const auto p = make_uniform_partition(g, 4);
    Eigen::VectorXd v(16);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1.0, 2.0);
    for (auto& x : v) x = u(rng);
    op = std::make_shared<const HelmholtzOperator>(PwcField(p, v, {1, 2}), 5.0);
    solver = std::make_unique<HelmholtzSolver>(op);
    ext = solver->boundary_extensions(kernels::Exec::serial);
    ext_t = ext.transpose();
    weights = node_weights(op->coefficient());
    const auto nb = ext.cols();
    pair = Eigen::MatrixXd::Random(nb, nb);
    pair = 0.5 * (pair + pair.transpose()).eval();
  }

  std::shared_ptr<const HelmholtzOperator> op;
  std::unique_ptr<HelmholtzSolver> solver;
  Eigen::MatrixXd ext, ext_t, pair;
  Eigen::VectorXd weights;
};

Fixture& fixture(int m) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& f = cache[m];
  if (!f) f = std::make_unique<Fixture>(m);
  return *f;
}

void BM_weighted_gram(benchmark::State& st, kernels::Exec e) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::weighted_gram(f.ext, f.weights, e));
}

void BM_row_quadratic_forms(benchmark::State& st, kernels::Exec e) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::row_quadratic_forms(f.ext_t, f.pair, e));
}

void BM_solve_columns(benchmark::State& st, kernels::Exec e) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  const Eigen::MatrixXd rhs = -(f.op->coupling() * Eigen::MatrixXd::Identity(f.ext.cols(), f.ext.cols()));
  auto solve = [&](const Eigen::VectorXd& b) -> Eigen::VectorXd { return f.solver->solve_interior(b); };
  for (auto _ : st) benchmark::DoNotOptimize(kernels::solve_columns(solve, rhs, e));
}

}  // namespace

BENCHMARK_CAPTURE(BM_weighted_gram, serial, kernels::Exec::serial)->Arg(33)->Arg(65);
BENCHMARK_CAPTURE(BM_weighted_gram, omp, kernels::Exec::parallel)->Arg(33)->Arg(65);
BENCHMARK_CAPTURE(BM_row_quadratic_forms, serial, kernels::Exec::serial)->Arg(33)->Arg(65);
BENCHMARK_CAPTURE(BM_row_quadratic_forms, omp, kernels::Exec::parallel)->Arg(33)->Arg(65);
BENCHMARK_CAPTURE(BM_solve_columns, serial, kernels::Exec::serial)->Arg(33)->Arg(65);
BENCHMARK_CAPTURE(BM_solve_columns, omp, kernels::Exec::parallel)->Arg(33)->Arg(65);

BENCHMARK_MAIN();
