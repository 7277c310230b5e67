#include <array>
#include <algorithm>
#include <numbers>
#include <numeric>

#include "quadsum/error.hpp"
#include "quadsum/harness.hpp"
#include "quadsum/int128.hpp"
#include "quadsum/rng.hpp"

namespace quadsum::harness {

namespace {

std::vector<Residue> sample_subset(Rng& rng, std::uint64_t universe, std::uint64_t size,
                                   std::uint64_t offset) {
  std::vector<Residue> pool(universe);
  std::iota(pool.begin(), pool.end(), static_cast<Residue>(offset));
  for (std::uint64_t i = 0; i < size; ++i) {
    const auto k = i + rng.below(universe - i);
    std::swap(pool[i], pool[k]);
  }
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

// Random multiple of d whose gcd with n is exactly d, in [d, n - d].
std::uint64_t exponent_with_gcd(Rng& rng, std::uint64_t n, std::uint64_t d) {
  const std::uint64_t cofactor = n / d;
  for (int attempt = 0; attempt < 256; ++attempt) {
    const std::uint64_t u = cofactor > 2 ? rng.between(1, cofactor - 1) : 1;
    if (gcd(u, cofactor) == 1) return d * u;
  }
  return d;
}

}  // namespace

SparsePoly random_quadrinomial(std::uint64_t p, std::uint64_t seed) {
  if (p < 5) throw Error(Errc::invalid_argument, "a quadrinomial needs p >= 5");
  Rng rng(seed);
  const std::uint64_t top = p >= 7 ? p - 2 : p - 1;
  auto exps = sample_subset(rng, top, 4, 1);
  // sample_subset sorts; shuffle so no role is tied to the largest exponent.
  for (std::size_t i = exps.size(); i > 1; --i) std::swap(exps[i - 1], exps[rng.below(i)]);
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  for (auto e : exps) {
    raw.emplace_back(static_cast<std::int64_t>(rng.between(1, p - 1)),
                     static_cast<std::int64_t>(e));
  }
  return SparsePoly::make(static_cast<std::uint32_t>(p), raw);
}

SparsePoly gcd_structured_quadrinomial(std::uint64_t p, std::uint64_t seed,
                                       std::uint64_t decomposed_budget) {
  if (p < 5) throw Error(Errc::invalid_argument, "a quadrinomial needs p >= 5");
  Rng rng(seed);
  const std::uint64_t n = p - 1;
  std::vector<std::uint64_t> proper;
  for (auto d : divisors(n)) {
    if (d > 1 && d < n) proper.push_back(d);
  }
  std::sort(proper.rbegin(), proper.rend());

  for (int attempt = 0; attempt < 128 && !proper.empty(); ++attempt) {
    // Bias toward large divisors; widen the window as attempts fail.
    const std::uint64_t window = std::min<std::uint64_t>(proper.size(), 3 + attempt / 8);
    std::array<std::uint64_t, 3> ds{};
    for (auto& d : ds) d = proper[rng.below(window)];
    if (decomposed_budget != 0 &&
        saturating_mul(saturating_mul(ds[0] * ds[1], ds[2]), n) > decomposed_budget) {
      continue;
    }
    std::vector<std::uint64_t> exps;
    for (auto d : ds) exps.push_back(exponent_with_gcd(rng, n, d));
    // Small delta: 1 when possible, otherwise 2.
    exps.push_back(exponent_with_gcd(rng, n, rng.below(4) == 0 && n % 2 == 0 ? 2 : 1));
    std::vector<std::uint64_t> sorted = exps;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    for (auto e : exps) {
      raw.emplace_back(static_cast<std::int64_t>(rng.between(1, p - 1)),
                       static_cast<std::int64_t>(e));
    }
    return SparsePoly::make(static_cast<std::uint32_t>(p), raw);
  }
  return random_quadrinomial(p, splitmix64(seed));
}

BilinearInstance bilinear_instance(std::uint64_t p, std::uint64_t seed) {
  Rng rng(seed);
  BilinearInstance out;
  out.xs = sample_subset(rng, p, rng.between(1, p), 0);
  out.ys = sample_subset(rng, p, rng.between(1, p), 0);
  auto weight = [&rng] {
    const double r = rng.unit();
    const double phase = 2.0 * std::numbers::pi * rng.unit();
    return std::polar(r, phase);
  };
  for (std::size_t i = 0; i < out.xs.size(); ++i) out.x_weights.push_back(weight());
  for (std::size_t i = 0; i < out.ys.size(); ++i) out.y_weights.push_back(weight());
  return out;
}

}  // namespace quadsum::harness
