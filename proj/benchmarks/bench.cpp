#include <benchmark/benchmark.h>

#include "quadsum/bounds.hpp"
#include "quadsum/charsum.hpp"
#include "quadsum/convolution.hpp"
#include "quadsum/counting.hpp"
#include "quadsum/rng.hpp"

using namespace quadsum;

namespace {

// Primes with p - 1 divisible by 12, so quadrinomials with gcd structure exist.
constexpr std::uint64_t kPrimes[] = {1009, 10009, 100057, 1000081};

void BM_SumExact(benchmark::State& state) {
  const std::uint64_t p = kPrimes[state.range(0)];
  const auto ctx = FieldCtx::make(p);
  const auto psi = SparsePoly::parse(static_cast<std::uint32_t>(p), "3,5;7,11;2,17;5,23");
  for (auto _ : state) benchmark::DoNotOptimize(sum_exact(ctx, psi, {1}).value);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p - 1));
}
BENCHMARK(BM_SumExact)->DenseRange(0, 3);

void BM_SumDecomposed(benchmark::State& state) {
  const std::uint64_t p = kPrimes[state.range(0)];
  const auto ctx = FieldCtx::make(p);
  // Cost is alpha beta gamma (p - 1); these gcds keep it at 24 (p - 1).
  const std::string text = "1,2;2,3;3,4;5,5";
  const auto psi = SparsePoly::parse(static_cast<std::uint32_t>(p), text);
  for (auto _ : state) benchmark::DoNotOptimize(sum_decomposed(ctx, psi, {0}).value);
}
BENCHMARK(BM_SumDecomposed)->DenseRange(0, 2);

void BM_DTimes(benchmark::State& state) {
  const std::uint64_t p = 10009;
  const auto ctx = FieldCtx::make(p);
  Rng rng(1);
  std::vector<Residue> u;
  while (u.size() < static_cast<std::size_t>(state.range(0))) {
    const auto x = static_cast<Residue>(rng.below(p));
    if (std::find(u.begin(), u.end(), x) == u.end()) u.push_back(x);
  }
  std::sort(u.begin(), u.end());
  for (auto _ : state) benchmark::DoNotOptimize(d_times(ctx, u).count);
}
BENCHMARK(BM_DTimes)->RangeMultiplier(4)->Range(16, 1024);

void BM_Convolution(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(2);
  std::vector<std::uint64_t> a(n), b(n);
  for (auto& x : a) x = rng.below(1u << 20);
  for (auto& x : b) x = rng.below(1u << 20);
  for (auto _ : state) benchmark::DoNotOptimize(cyclic_convolve_ntt(a, b));
}
BENCHMARK(BM_Convolution)->RangeMultiplier(8)->Range(1 << 10, 1 << 18);

void BM_ConvolutionDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::uint64_t> a(n, 3), b(n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(cyclic_convolve_direct(a, b));
}
BENCHMARK(BM_ConvolutionDirect)->RangeMultiplier(4)->Range(1 << 8, 1 << 12);

void BM_NTriples(benchmark::State& state) {
  const std::uint64_t p = kPrimes[state.range(0)];
  const auto ctx = FieldCtx::make(p);
  const auto f = subgroup_of_order(ctx, 12);
  const auto g = subgroup_of_order(ctx, (p - 1) / 4);
  const auto h = subgroup_of_order(ctx, (p - 1) / 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(n_triples(ctx, f.elements, g.elements, h.elements).count);
  }
}
BENCHMARK(BM_NTriples)->DenseRange(0, 1);

void BM_CompareBoundsSweep(benchmark::State& state) {
  const std::uint64_t p = 1000081;
  const auto ctx = FieldCtx::make(p);
  Rng rng(3);
  std::vector<SparsePoly> polys;
  for (int i = 0; i < 256; ++i) {
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::vector<std::int64_t> used;
    while (raw.size() < 4) {
      const auto k = static_cast<std::int64_t>(rng.between(1, p - 2));
      if (std::find(used.begin(), used.end(), k) != used.end()) continue;
      used.push_back(k);
      raw.emplace_back(1 + static_cast<std::int64_t>(rng.below(p - 1)), k);
    }
    polys.push_back(SparsePoly::make(static_cast<std::uint32_t>(p), raw));
  }
  for (auto _ : state) {
    for (const auto& psi : polys) {
      benchmark::DoNotOptimize(compare_bounds(ctx, psi, {0}, RoleMode::best, 0).winner);
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(polys.size()));
}
BENCHMARK(BM_CompareBoundsSweep);

}  // namespace

BENCHMARK_MAIN();
