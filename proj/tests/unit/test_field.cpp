#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "quadsum/error.hpp"
#include "quadsum/field.hpp"

using namespace quadsum;

namespace {

std::vector<std::uint64_t> as_u64(const std::vector<Residue>& xs) {
  return {xs.begin(), xs.end()};
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected quadsum::Error");
  return Errc::invalid_argument;
}

const std::vector<std::uint64_t> kPrimes = {3, 5, 7, 11, 13, 31, 97, 101, 241, 499, 1009};

}  // namespace

TEST_CASE("field context picks the smallest primitive root") {
  CHECK(FieldCtx::make(13).generator() == 2);
  CHECK(FieldCtx::make(5).generator() == 2);
  CHECK(FieldCtx::make(7).generator() == 3);
  CHECK(FieldCtx::make(41).generator() == 6);
  for (auto p : kPrimes) {
    CHECK(FieldCtx::make(p).generator() == oracle::smallest_primitive_root(p));
  }
}

TEST_CASE("field context rejects bad moduli") {
  CHECK(code_of([] { FieldCtx::make(12); }) == Errc::composite_modulus);
  CHECK(code_of([] { FieldCtx::make(1); }) == Errc::composite_modulus);
  CHECK(code_of([] { FieldCtx::make(2); }) == Errc::composite_modulus);
  CHECK(code_of([] { FieldCtx::make(std::uint64_t{1} << 31); }) == Errc::modulus_too_large);
  CHECK(code_of([] { FieldCtx::make(4294967311ULL); }) == Errc::modulus_too_large);
  CHECK(std::string(errc_name(Errc::composite_modulus)) == "CompositeModulus");
}

TEST_CASE("tables are consistent") {
  for (auto p : kPrimes) {
    const auto ctx = FieldCtx::make(p);
    for (Residue x = 1; x < p; ++x) {
      REQUIRE(ctx.pow_g(ctx.dlog(x)) == x);
      REQUIRE(ctx.mul(x, ctx.inv(x)) == 1);
      REQUIRE(ctx.pow(x, 7) == oracle::powmod(x, 7, p));
    }
    CHECK(ctx.reduce(-1) == p - 1);
    CHECK(ctx.reduce(static_cast<std::int64_t>(p) * 3 + 2) == 2);
  }
}

TEST_CASE("primality and divisors") {
  for (std::uint64_t n = 0; n < 2000; ++n) REQUIRE(is_prime(n) == oracle::is_prime(n));
  CHECK(is_prime(2147483647));
  CHECK(divisors(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
  CHECK(lcm(4, 6) == 12);
  CHECK(pow_mod(3, 200, 1000003) == oracle::powmod(3, 200, 1000003));
}

TEST_CASE("subgroups are the roots of unity") {
  const auto ctx = FieldCtx::make(13);
  CHECK(subgroup_of_order(ctx, 3).elements == std::vector<Residue>{1, 3, 9});
  CHECK(subgroup_of_order(ctx, 4).elements == std::vector<Residue>{1, 5, 8, 12});
  CHECK(subgroup_of_order(ctx, 1).elements == std::vector<Residue>{1});
  CHECK(code_of([&] { subgroup_of_order(ctx, 5); }) == Errc::not_a_divisor);

  for (auto p : kPrimes) {
    const auto c = FieldCtx::make(p);
    for (auto d : divisors(p - 1)) {
      const auto g = subgroup_of_order(c, d);
      REQUIRE(g.elements.size() == d);
      REQUIRE(as_u64(g.elements) == oracle::roots_of_unity(p, d));
    }
  }
}

TEST_CASE("sparse polynomials normalize exponents") {
  const std::pair<std::int64_t, std::int64_t> raw[] = {{1, -1}, {2, 13}, {-3, 2}};
  const auto psi = SparsePoly::make(13, raw);
  CHECK(psi.exponents() == std::vector<std::uint64_t>{11, 1, 2});
  CHECK(psi.terms()[2].coef == 10);
  CHECK(psi.to_string() == "1,11;2,1;10,2");
  CHECK(SparsePoly::parse(13, psi.to_string()).to_string() == psi.to_string());
  CHECK(SparsePoly::parse(13, " 1, 12 ; 5 ,3").exponents() == std::vector<std::uint64_t>{12, 3});

  const std::pair<std::int64_t, std::int64_t> collide[] = {{1, 1}, {1, 13}};
  CHECK(code_of([&] { SparsePoly::make(13, collide); }) == Errc::invalid_argument);
  const std::pair<std::int64_t, std::int64_t> zero_coef[] = {{13, 1}};
  CHECK(code_of([&] { SparsePoly::make(13, zero_coef); }) == Errc::invalid_argument);
  const std::pair<std::int64_t, std::int64_t> zero_exp[] = {{1, 0}};
  CHECK(code_of([&] { SparsePoly::make(13, zero_exp); }) == Errc::invalid_argument);
  CHECK(code_of([] { SparsePoly::parse(13, "1,2;x,3"); }) == Errc::invalid_argument);
  CHECK(code_of([] { SparsePoly::parse(13, "1;2"); }) == Errc::invalid_argument);
}

TEST_CASE("gcd parameters") {
  SUBCASE("(4,6,3,2) mod 13") {
    const auto packs = gcd_params(13, {4, 6, 3, 2}, RoleMode::canonical);
    REQUIRE(packs.size() == 1);
    const auto& g = packs[0];
    CHECK(g.delta == 2);
    CHECK(g.f == 3);
    CHECK(g.g == 3);
    CHECK(g.h == 2);
    // Raw gcds are (4, 6, 3); the roles are reordered by reduced gcd.
    CHECK(g.alpha == 6);
    CHECK(g.beta == 3);
    CHECK(g.gamma == 4);
    CHECK(g.role_perm == std::array<int, 4>{1, 2, 0, 3});
  }
  SUBCASE("all ones") {
    const auto g = gcd_params(13, {1, 1, 1, 1}, RoleMode::canonical)[0];
    CHECK(g.alpha == 1);
    CHECK(g.delta == 1);
    CHECK(g.f == 1);
    CHECK(g.g == 1);
    CHECK(g.h == 1);
  }
  SUBCASE("(6,10,15,5) mod 31") {
    const auto g = gcd_params(31, {6, 10, 15, 5}, RoleMode::canonical)[0];
    CHECK(g.delta == 5);
    CHECK(g.f == 6);
    CHECK(g.g == 3);
    CHECK(g.h == 2);
    CHECK(g.alpha == 6);
    CHECK(g.beta == 15);
    CHECK(g.gamma == 10);
  }
  SUBCASE("best mode gives one pack per delta role") {
    const auto packs = gcd_params(31, {6, 10, 15, 5}, RoleMode::best);
    REQUIRE(packs.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(packs[i].role_perm[3] == i);
  }
  SUBCASE("f <= p / delta and ordering hold everywhere") {
    for (std::uint64_t p : {13, 31, 61, 97}) {
      const auto ds = divisors(p - 1);
      for (auto a : ds)
        for (auto b : ds)
          for (auto c : ds)
            for (auto d : ds) {
              for (const auto& g : gcd_params(p, {a, b, c, d}, RoleMode::best)) {
                REQUIRE(g.f * g.delta <= p - 1);
                REQUIRE(g.f >= g.g);
                REQUIRE(g.g >= g.h);
              }
            }
    }
  }
}

TEST_CASE("power images") {
  const auto ctx = FieldCtx::make(13);
  const auto sq = power_image(ctx, full_group(ctx), 2);
  CHECK(sq.image == std::vector<Residue>{1, 3, 4, 9, 10, 12});
  CHECK(sq.multiplicity == 2);
  const auto cube = power_image(ctx, subgroup_of_order(ctx, 3), 3);
  CHECK(cube.image == std::vector<Residue>{1});
  CHECK(cube.multiplicity == 3);
  const auto id = power_image(ctx, full_group(ctx), 1);
  CHECK(id.image.size() == 12);
  CHECK(id.multiplicity == 1);

  // Image of G_d under x^n is G_{d / gcd(d, n)}, and gcd(d, n) = gcd(d, gcd(n, p - 1)).
  for (std::uint64_t p : {13, 31, 61, 101}) {
    const auto c = FieldCtx::make(p);
    for (auto d : divisors(p - 1)) {
      const auto g = subgroup_of_order(c, d);
      for (std::uint64_t n = 1; n <= 50; ++n) {
        const auto img = power_image(c, g, n);
        const auto m = gcd(d, n);
        REQUIRE(m == gcd(d, gcd(n, p - 1)));
        REQUIRE(img.multiplicity == m);
        REQUIRE(as_u64(img.image) == oracle::roots_of_unity(p, d / m));
      }
    }
  }
}

TEST_CASE("product sets") {
  const auto ctx = FieldCtx::make(13);
  auto prod = [&](std::initializer_list<std::uint64_t> orders) {
    std::vector<Subgroup> gs;
    for (auto d : orders) gs.push_back(subgroup_of_order(ctx, d));
    return product_set(ctx, gs);
  };
  CHECK(prod({3, 4}).order == 12);
  CHECK(prod({3, 4}).elements.size() == 12);
  CHECK(prod({2, 2}).elements == std::vector<Residue>{1, 12});
  CHECK(prod({1, 1, 1}).elements == std::vector<Residue>{1});

  const auto c = FieldCtx::make(61);
  const auto ds = divisors(60);
  for (auto a : ds)
    for (auto b : ds)
      for (auto d : ds) {
        const std::vector<Subgroup> gs{subgroup_of_order(c, a), subgroup_of_order(c, b),
                                       subgroup_of_order(c, d)};
        REQUIRE(product_set(c, gs).elements.size() == lcm(lcm(a, b), d));
      }
}

TEST_CASE("role modes parse") {
  CHECK(parse_role_mode("best") == RoleMode::best);
  CHECK(role_mode_name(RoleMode::canonical) == "canonical");
  CHECK(code_of([] { parse_role_mode("other"); }) == Errc::invalid_argument);
}
