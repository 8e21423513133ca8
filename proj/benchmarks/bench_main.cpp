#include <benchmark/benchmark.h>

#include <random>

#include "momentkit/momentkit.hpp"

using namespace momentkit;

static void BM_Dalpha(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto r = static_cast<std::size_t>(state.range(0));
  const Polynomial f = random_polynomial(rng, r);
  const auto alphas = enumerate_height_at_most(r, 4);
  for (auto _ : state)
    for (const auto& a : alphas) benchmark::DoNotOptimize(dalpha(f, a));
}
BENCHMARK(BM_Dalpha)->DenseRange(1, 3);

static void BM_CheckLeibniz(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto r = static_cast<std::size_t>(state.range(0));
  const Polynomial f = random_polynomial(rng, r), g = random_polynomial(rng, r);
  const auto alphas = enumerate_height_at_most(r, 4);
  for (auto _ : state)
    for (const auto& a : alphas) benchmark::DoNotOptimize(check_leibniz(f, g, a));
}
BENCHMARK(BM_CheckLeibniz)->DenseRange(1, 3);

static void BM_VerifyDerivative(benchmark::State& state) {
  const auto r = static_cast<std::size_t>(state.range(0));
  const Domain d = Domain::unit_box(r, 8, 3);
  const auto probes = make_probe_pairs(d, 20, 3);
  const auto fam = make_derivative(r, 3);
  for (auto _ : state) benchmark::DoNotOptimize(verify_moment(fam, probes, d));
}
BENCHMARK(BM_VerifyDerivative)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_VerifyIdentityGenerated(benchmark::State& state) {
  const Domain d = Domain::unit_box(2, 8, 4);
  const auto probes = make_probe_pairs(d, 20, 4);
  SupportPattern p{2, 3, {}, std::nullopt};
  for (const auto& a : nonzero_indices(2, 3))
    if (a.height() >= 2) p.support.insert(a);
  const auto fam = make_identity_generated(random_valid_family(p, 4), d);
  for (auto _ : state) benchmark::DoNotOptimize(verify_moment(fam, probes, d));
}
BENCHMARK(BM_VerifyIdentityGenerated)->Unit(benchmark::kMillisecond);

static void BM_SearchSupports(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_valid_constant_supports(2, 3));
}
BENCHMARK(BM_SearchSupports)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
