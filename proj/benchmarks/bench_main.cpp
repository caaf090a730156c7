#include <benchmark/benchmark.h>

#include <vector>

#include "ghzlab/f2linalg.hpp"
#include "ghzlab/fourier.hpp"
#include "ghzlab/games.hpp"
#include "ghzlab/partition.hpp"
#include "ghzlab/sampling.hpp"

using namespace ghzlab;

static void BM_Rref(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sampling::Rng rng(1);
  std::vector<f2::F2Vector> rows;
  for (int i = 0; i < n; ++i) rows.push_back(sampling::random_vector(n, rng));
  const f2::F2Matrix m(rows, n);
  for (auto _ : state) benchmark::DoNotOptimize(f2::rref(m).rank);
}
BENCHMARK(BM_Rref)->Arg(8)->Arg(32)->Arg(64);

static void BM_WalshHadamardDouble(benchmark::State& state) {
  const std::size_t size = std::size_t{1} << state.range(0);
  std::vector<double> a(size);
  for (std::size_t i = 0; i < size; ++i) a[i] = static_cast<double>(i % 7);
  for (auto _ : state) {
    fourier::walsh_hadamard<double>(a);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_WalshHadamardDouble)->Arg(10)->Arg(16)->Arg(20);

static void BM_ExactTransform(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  sampling::Rng rng(2);
  const auto v = f2::Subspace::full(d);
  const auto f = fourier::CosetFunction::from_fn(f2::Coset::make(f2::F2Vector(d), v), [&rng](const f2::F2Vector&) {
    return make_rational(static_cast<long>(rng() % 5), 4);
  });
  for (auto _ : state) benchmark::DoNotOptimize(fourier::transform(f).coeffs.size());
}
BENCHMARK(BM_ExactTransform)->Arg(4)->Arg(8)->Arg(12);

static void BM_GhzProductEvent(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  sampling::Rng rng(3);
  const auto v = f2::Subspace::full(d);
  std::array<fourier::SubsetMask, 3> e;
  for (auto& m : e) m = sampling::random_mask(v.size(), 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(fourier::ghz_product_event_prob(v, e).lhs);
}
BENCHMARK(BM_GhzProductEvent)->Arg(4)->Arg(6)->Arg(8);

static void BM_ExactValueGhz(benchmark::State& state) {
  const auto g = games::repeat(games::ghz_game(), static_cast<int>(state.range(0))).materialize();
  for (auto _ : state) benchmark::DoNotOptimize(games::exact_value(g).value);
}
BENCHMARK(BM_ExactValueGhz)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_PseudorandomPartition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sampling::Rng rng(4);
  const auto e = sampling::random_product_event(n, 0.5, 1.0 / 64, rng);
  for (auto _ : state) benchmark::DoNotOptimize(partition::pseudorandom_partition(e, 0.1, 1).rounds);
}
BENCHMARK(BM_PseudorandomPartition)->Arg(3)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_DmCloseness(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  sampling::Rng rng(5);
  partition::WeightedPair p;
  p.carrier = f2::AffinePowerCoset::full(n);
  for (const auto& x : f2::enumerate_coset(p.carrier)) {
    if (!f2::row_sum(x).is_zero()) continue;
    p.points.push_back(x);
    p.base.push_back(1);
    p.tilde.push_back(static_cast<std::int64_t>(rng() % 3));
  }
  p.tilde[0] += 1;
  for (auto _ : state) benchmark::DoNotOptimize(partition::d_m_closeness(p, m).value);
}
BENCHMARK(BM_DmCloseness)->Args({4, 1})->Args({4, 2})->Args({6, 1})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
