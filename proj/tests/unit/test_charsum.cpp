#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "quadsum/charsum.hpp"
#include "quadsum/error.hpp"
#include "quadsum/rng.hpp"

using namespace quadsum;

namespace {

SparsePoly poly(std::uint32_t p, const char* text) { return SparsePoly::parse(p, text); }

std::vector<std::pair<std::uint64_t, std::uint64_t>> raw_terms(const SparsePoly& psi) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (const auto& t : psi.terms()) out.emplace_back(t.coef, t.exp);
  return out;
}

std::complex<double> e(double u, double p) {
  return std::polar(1.0, 2.0 * std::numbers::pi * u / p);
}

}  // namespace

TEST_CASE("small exact sums") {
  const auto c5 = FieldCtx::make(5);
  const auto lin = sum_exact(c5, poly(5, "1,1"), {0});
  CHECK(lin.value.real() == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(lin.value.imag()) < 1e-9);
  CHECK(lin.term_count == 4);

  const auto quad = sum_exact(c5, poly(5, "1,2"), {0});
  CHECK(quad.value.real() == doctest::Approx(std::sqrt(5.0) - 1.0).epsilon(1e-12));
  CHECK(std::abs(quad.value.imag()) < 1e-9);

  const auto c13 = FieldCtx::make(13);
  const auto cubic = sum_exact(c13, poly(13, "1,3;1,1"), {0});
  const auto ref = oracle::char_sum(13, {{1, 3}, {1, 1}}, 0);
  CHECK(std::abs(cubic.value - ref) < 1e-9);
  CHECK(cubic.magnitude <= 3.0 * std::sqrt(13.0));
}

TEST_CASE("exact sums agree with the no-table oracle") {
  Rng rng(2024);
  const std::vector<std::uint64_t> primes = {5, 7, 11, 13, 101, 257, 1009, 4099, 7919, 9973};
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t p = primes[rng.below(primes.size())];
    const auto ctx = FieldCtx::make(p);
    const std::size_t t = 1 + rng.below(std::min<std::uint64_t>(kMaxTerms, p - 1));
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::vector<std::uint64_t> used;
    while (raw.size() < t) {
      const auto k = rng.between(1, p - 1);
      if (std::find(used.begin(), used.end(), k) != used.end()) continue;
      used.push_back(k);
      raw.emplace_back(rng.between(1, p - 1), k);
    }
    const auto psi = SparsePoly::make(static_cast<std::uint32_t>(p), raw);
    const std::uint64_t j = rng.below(p - 1);
    const auto got = sum_exact(ctx, psi, {j});
    const auto want = oracle::char_sum(p, raw_terms(psi), j);
    INFO("p=" << p << " poly=" << psi.to_string() << " j=" << j);
    REQUIRE(std::abs(got.value - want) <= 1e-9 * std::max(1.0, std::abs(want)) + 1e-9);
    // Trivial bound.
    REQUIRE(got.magnitude <= static_cast<double>(got.term_count) + 1e-9);
  }
}

TEST_CASE("character order") {
  const auto ctx = FieldCtx::make(13);
  CHECK(CharacterIndex{0}.order(ctx) == 1);
  CHECK(CharacterIndex{1}.order(ctx) == 12);
  CHECK(CharacterIndex{4}.order(ctx) == 3);
  CHECK(CharacterIndex{6}.order(ctx) == 2);
}

TEST_CASE("decomposed sum equals the direct sum") {
  struct Case {
    std::uint32_t p;
    const char* poly;
    std::uint64_t j;
  };
  for (const auto& c : {Case{13, "1,4;1,6;1,3;1,2", 0}, Case{13, "1,4;1,6;1,3;1,2", 5},
                        Case{31, "2,6;3,10;5,15;7,5", 1}, Case{61, "3,12;5,20;7,30;11,7", 17},
                        Case{101, "1,1;2,2;3,3;4,4", 3}}) {
    const auto ctx = FieldCtx::make(c.p);
    const auto psi = poly(c.p, c.poly);
    const auto direct = sum_exact(ctx, psi, {c.j});
    const auto dec = sum_decomposed(ctx, psi, {c.j});
    INFO(c.p << " " << c.poly << " j=" << c.j);
    CHECK(std::abs(dec.value - direct.value) < 1e-9);
  }
}

TEST_CASE("decomposed sum budgets and shape") {
  const auto ctx = FieldCtx::make(13);
  CHECK_THROWS_AS(sum_decomposed(ctx, poly(13, "1,1;1,2"), {0}), Error);
  try {
    sum_decomposed(ctx, poly(13, "1,12;1,6;1,4;1,1"), {0}, 100);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::budget_exceeded);
  }
}

TEST_CASE("bilinear sums") {
  const auto ctx = FieldCtx::make(13);
  std::vector<Residue> all;
  for (Residue x = 1; x < 13; ++x) all.push_back(x);
  const std::vector<std::complex<double>> ones(12, 1.0);
  const auto full = bilinear_sum(ctx, all, all, ones, ones);
  CHECK(full.value.real() == doctest::Approx(-12.0));
  CHECK(std::abs(full.value.imag()) < 1e-9);

  const std::vector<Residue> zero{0};
  const std::vector<Residue> ys{1, 5, 7};
  const auto z = bilinear_sum(ctx, zero, ys, std::vector<std::complex<double>>{1.0},
                              std::vector<std::complex<double>>(3, 1.0));
  CHECK(z.value.real() == doctest::Approx(3.0));

  Rng rng(42);
  const std::vector<Residue> g{1, 3, 9};
  std::vector<std::complex<double>> a, b;
  for (int i = 0; i < 3; ++i) a.push_back(std::polar(1.0, 2 * std::numbers::pi * rng.unit()));
  for (int i = 0; i < 3; ++i) b.push_back(std::polar(1.0, 2 * std::numbers::pi * rng.unit()));
  std::complex<double> ref = 0;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) ref += a[i] * b[k] * e(static_cast<double>(g[i] * g[k] % 13), 13);
  const auto s = bilinear_sum(ctx, g, g, a, b);
  CHECK(std::abs(s.value - ref) < 1e-12);
  CHECK(s.magnitude <= std::sqrt(13.0 * 3 * 3));
}

TEST_CASE("random weighted bilinear sums obey sqrt(pAB)") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t p = std::vector<std::uint64_t>{11, 13, 31, 101, 211}[rng.below(5)];
    const auto ctx = FieldCtx::make(p);
    std::vector<Residue> xs, ys;
    for (Residue x = 0; x < p; ++x) {
      if (rng.below(2)) xs.push_back(x);
      if (rng.below(3) == 0) ys.push_back(x);
    }
    if (xs.empty()) xs.push_back(1);
    if (ys.empty()) ys.push_back(2);
    std::vector<std::complex<double>> a, b;
    double sa = 0, sb = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      a.push_back(std::polar(rng.unit(), 6.283 * rng.unit()));
      sa += std::norm(a.back());
    }
    for (std::size_t k = 0; k < ys.size(); ++k) {
      b.push_back(std::polar(rng.unit(), 6.283 * rng.unit()));
      sb += std::norm(b.back());
    }
    REQUIRE(bilinear_sum(ctx, xs, ys, a, b).magnitude <= std::sqrt(p * sa * sb) * (1 + 1e-12));
  }
}

TEST_CASE("quadrilinear sums") {
  const auto ctx = FieldCtx::make(13);
  const std::vector<Residue> one{1};
  const auto single = quadlinear_sum(ctx, one, one, one, one, QuadWeights::ones(1, 1, 1, 1), 1);
  CHECK(std::abs(single.value - e(1, 13)) < 1e-12);

  const std::vector<Residue> g3{1, 3, 9};
  try {
    quadlinear_sum(ctx, g3, g3, g3, g3, QuadWeights::ones(3, 3, 3, 3), 0);
    FAIL("expected NonzeroRequired");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::nonzero_required);
  }

  const std::vector<Residue> w{1, 12};
  std::complex<double> ref = 0;
  for (auto a : w)
    for (auto x : g3)
      for (auto y : g3) ref += e(static_cast<double>(a * x * y % 13), 13);
  const auto t = quadlinear_sum(ctx, w, g3, g3, one, QuadWeights::ones(2, 3, 3, 1), 1);
  CHECK(std::abs(t.value - ref) < 1e-12);
  CHECK(t.magnitude <= 18.0);

  // Weighted against a direct loop.
  Rng rng(5);
  auto weights = QuadWeights::ones(2, 3, 3, 1);
  for (auto* tensor : {&weights.theta, &weights.rho, &weights.sigma, &weights.tau}) {
    for (std::size_t i = 0; i < tensor->dim0(); ++i)
      for (std::size_t j = 0; j < tensor->dim1(); ++j)
        for (std::size_t k = 0; k < tensor->dim2(); ++k)
          (*tensor)(i, j, k) = std::polar(rng.unit(), 6.283 * rng.unit());
  }
  std::complex<double> wref = 0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 3; ++c) {
        const auto u = w[a] * g3[b] * g3[c] * 5 % 13;
        wref += weights.theta(a, b, c) * weights.rho(a, b, 0) * weights.sigma(a, c, 0) *
                weights.tau(b, c, 0) * e(static_cast<double>(u), 13);
      }
  CHECK(std::abs(quadlinear_sum(ctx, w, g3, g3, one, weights, 5).value - wref) < 1e-12);
}

TEST_CASE("compensated summation") {
  CompensatedSum s;
  s.add({1e16, 0});
  for (int i = 0; i < 1000; ++i) s.add({1.0, -1.0});
  s.add({-1e16, 0});
  CHECK(s.value().real() == 1000.0);
  CHECK(s.value().imag() == -1000.0);
}
