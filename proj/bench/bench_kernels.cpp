#include <benchmark/benchmark.h>

#include <vector>

#include "grane/kernels.hpp"
#include "grane/network.hpp"

namespace {

struct Fixture {
  grane::QuadraticGame q;
  grane::Game game;
  grane::MixingMatrix mixing;
  std::vector<double> alpha;
  grane::Matrix X;

  explicit Fixture(std::size_t n)
      : q(grane::make_quadratic_game(grane::QuadraticFamily{.n = n, .seed = 11})),
        game(q.to_game()),
        mixing(grane::mixing_from_laplacian(grane::random_tree(n, 5))),
        alpha(n, 0.1),
        X(grane::Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))) {
    grane::Sampler s(3);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = s.uniform(-1.0, 1.0);
    }
  }
};

void BM_Step(benchmark::State& state, grane::kernels::Backend backend) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  grane::Matrix out(f.X.rows(), f.X.cols());
  for (auto _ : state) {
    grane::kernels::projected_step(backend, f.game, f.mixing.W, f.alpha, 0.01, f.X, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_StepSerial(benchmark::State& state) { BM_Step(state, grane::kernels::Backend::serial); }
void BM_StepParallel(benchmark::State& state) { BM_Step(state, grane::kernels::Backend::parallel); }

}  // namespace

BENCHMARK(BM_StepSerial)->RangeMultiplier(2)->Range(16, 512);
BENCHMARK(BM_StepParallel)->RangeMultiplier(2)->Range(16, 512);

BENCHMARK_MAIN();
