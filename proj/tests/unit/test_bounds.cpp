#include <doctest.h>

#include <cmath>

#include "quadsum/bounds.hpp"
#include "quadsum/error.hpp"
#include "quadsum/rng.hpp"

using namespace quadsum;
using doctest::Approx;

namespace {

using Exps = std::array<std::uint64_t, 4>;

bool branch_holds(double p, const std::string& regime, double f, double g, double delta) {
  const double t = log_threshold(p);
  if (regime == "g_large") return g >= t;
  if (regime == "f_large") return f >= t && t > g;
  if (regime == "pdelta_large") return p / delta >= t && t > f;
  if (regime == "pdelta_small") return p / delta < t;
  return false;
}

}  // namespace

TEST_CASE("weil, ccp and cp values") {
  const std::uint64_t e31[] = {3, 1};
  CHECK(weil_bound(13, e31) == Approx(10.8167).epsilon(1e-4));
  const std::uint64_t e4[] = {4, 6, 3, 2};
  CHECK(weil_bound(13, e4) == Approx(21.633).epsilon(1e-4));
  const std::uint64_t e1[] = {1};
  CHECK(weil_bound(101, e1) == Approx(10.0499).epsilon(1e-4));

  const auto ccp = ccp_bound(13, {4, 6, 3, 2});
  CHECK(ccp.value == Approx(13.924).epsilon(1e-3));
  CHECK_FALSE(ccp.nontrivial);
  const auto ccp1 = ccp_bound(13, {1, 1, 1, 1});
  CHECK(ccp1.value == Approx(9.78).epsilon(1e-3));
  CHECK(ccp1.nontrivial);
  const auto ccp2 = ccp_bound(10007, {2, 3, 5, 7});
  CHECK(ccp2.value == Approx(std::pow(30.0, 1.0 / 9) * std::pow(10007.0, 8.0 / 9)));
  CHECK(ccp2.nontrivial);

  const auto cp = cp_bound(13, {4, 6, 3, 2});
  CHECK(cp.value == Approx(12.864).epsilon(1e-3));
  CHECK(cp.nontrivial);
  CHECK_FALSE(cp_bound(13, {12, 12, 12, 12}).nontrivial);
  const auto cp2 = cp_bound(101, {1, 1, 1, 2});
  CHECK(cp2.value == Approx(std::pow(2.0, 1.0 / 16) * std::pow(101.0, 7.0 / 8)));
  CHECK(cp2.nontrivial);
}

TEST_CASE("macourt bound") {
  const auto m = macourt_bound(13, {4, 6, 3, 2});
  CHECK(m.regime == "pdelta_small");
  CHECK(m.params.delta == 2);
  CHECK(m.params.f == 3);
  CHECK(m.params.g == 3);
  CHECK(m.params.h == 2);
  CHECK(m.leading_term == Approx(13 * std::pow(3.0, -1.0 / 8)));
  CHECK(m.branch_term ==
        Approx(std::pow(13.0, 31.0 / 32) * std::pow(2.0, 3.0 / 32) * std::pow(9.0, -1.0 / 16)));
  CHECK(m.value == Approx(22.49).epsilon(1e-3));
  CHECK(regime_condition_holds(13, m));

  // g >= sqrt(p) ln p selects the first case.
  const std::uint64_t p = 1000081;
  const auto big = macourt_bound(p, {750060, 500040, 666720, 500041});
  REQUIRE(big.regime == "g_large");
  const double pd = static_cast<double>(p);
  CHECK(big.value ==
        Approx(pd * std::pow(static_cast<double>(big.params.g), -1.0 / 8) +
               std::pow(pd, 15.0 / 16) * std::pow(static_cast<double>(big.params.delta), 1.0 / 32)));
}

TEST_CASE("quadrilinear and counting bounds") {
  CHECK(petshp_quadlinear_bound(13, 1, 1, 1, 1) == Approx(1.174).epsilon(1e-3));
  const auto t1 = lemma_T_bound(13, 1, 1, 1, 1);
  CHECK(t1.regime == "w_small");
  CHECK(t1.leading_term == 1.0);
  CHECK(t1.branch_term == Approx(std::pow(13.0, 1.0 / 16)));
  const auto t2 = lemma_T_bound(13, 12, 4, 3, 2);
  CHECK(t2.regime == "w_large");
  CHECK(t2.value == Approx(12 * 4 * 2 * std::pow(3.0, 7.0 / 8) +
                           std::pow(12.0, 31.0 / 32) * std::pow(12.0, 15.0 / 16) * 2 *
                               std::pow(13.0, 1.0 / 32)));
  CHECK_THROWS_AS(lemma_T_bound(13, 1, 2, 1, 1), Error);

  const auto se = shifted_energy_bound(101, 4);
  CHECK(se.regime == "small");
  CHECK(se.value == Approx(22.18).epsilon(1e-3));
  const auto nt = n_triples_bound(101, 4, 4, 4);
  CHECK(nt.regime == "g_small");
  CHECK(nt.value == Approx(512));
  try {
    n_triples_bound(101, 4, 2, 4);
    FAIL("expected OrderingViolated");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ordering_violated);
  }
  const double t = log_threshold(101);
  CHECK(dx_bound(101, 50).regime == "large");
  CHECK(dx_bound(101, 50).value == Approx(std::pow(50.0, 8) / 101));
  CHECK(dx_bound(101, t - 1).regime == "small");
  CHECK(shifted_energy_bound(1000003, 20000).regime == "above_two_thirds");
}

TEST_CASE("regimes are exclusive and their conditions hold") {
  Rng rng(99);
  for (int i = 0; i < 3000; ++i) {
    const double p = static_cast<double>(rng.between(5, 3'000'000));
    const double a = static_cast<double>(rng.between(1, 4000));
    const double b = std::min(a, static_cast<double>(rng.between(1, 4000)));
    const double c = std::min(b, static_cast<double>(rng.between(1, 4000)));
    const double d = std::min(c, static_cast<double>(rng.between(1, 4000)));
    const double tt = log_threshold(p);

    const auto lt = lemma_T_bound(p, a, b, c, d);
    if (lt.regime == "y_large") REQUIRE(c >= tt);
    else if (lt.regime == "x_large") REQUIRE((b >= tt && c < tt));
    else if (lt.regime == "w_large") REQUIRE((a >= tt && b < tt));
    else REQUIRE((lt.regime == "w_small" && a < tt));

    const auto nt = n_triples_bound(p, a, b, c);
    if (nt.regime == "h_large") REQUIRE(c >= tt);
    else if (nt.regime == "g_large") REQUIRE((b >= tt && c < tt));
    else REQUIRE((nt.regime == "g_small" && b < tt));

    const auto je = j_energy_bound(p, a, b);
    if (je.regime == "y_large") REQUIRE(b >= tt);
    else if (je.regime == "x_large") REQUIRE((a >= tt && b < tt));
    else REQUIRE((je.regime == "x_small" && a < tt));

    const auto ie = i_energy_bound(p, a, b);
    REQUIRE((ie.regime == "w_large") == (a >= tt));
    REQUIRE((dx_bound(p, a).regime == "large") == (a >= tt));

    const auto se = shifted_energy_bound(p, a);
    if (se.regime == "above_two_thirds") REQUIRE(a >= std::pow(p, 2.0 / 3));
    else if (se.regime == "large") REQUIRE(a >= tt);
    else REQUIRE(se.regime == "small");
  }
}

TEST_CASE("macourt parameters, regimes and modes") {
  Rng rng(5);
  for (std::uint64_t p : {13, 31, 61, 97, 1009, 10007, 65537, 1000081}) {
    const auto ds = divisors(p - 1);
    for (int i = 0; i < 300; ++i) {
      Exps e;
      for (auto& k : e) k = ds[rng.below(ds.size())] * rng.between(1, 3) % (p - 1);
      for (auto& k : e) k = k == 0 ? 1 : k;
      const auto canon = macourt_bound(p, e, RoleMode::canonical);
      const auto best = macourt_bound(p, e, RoleMode::best);
      const double pd = static_cast<double>(p);
      for (const auto* m : {&canon, &best}) {
        const auto& g = m->params;
        REQUIRE(g.f >= g.g);
        REQUIRE(g.g >= g.h);
        REQUIRE(static_cast<double>(g.f) <= pd / static_cast<double>(g.delta));
        REQUIRE(branch_holds(pd, m->regime, static_cast<double>(g.f), static_cast<double>(g.g),
                             static_cast<double>(g.delta)));
        REQUIRE(regime_condition_holds(pd, *m));
        REQUIRE(m->value == Approx(m->leading_term + m->branch_term));
      }
      REQUIRE(best.value <= canon.value);
    }
  }
}

TEST_CASE("monotonicity smoke checks") {
  double prev = 0;
  for (std::uint64_t k = 1; k < 40; ++k) {
    const std::uint64_t e[] = {1, k, 2};
    const double w = weil_bound(1009, e);
    CHECK(w >= prev);
    prev = w;
  }
  for (int pos = 0; pos < 4; ++pos) {
    Exps e{2, 3, 5, 7};
    double last = cp_bound(1009, e).value;
    for (int step = 0; step < 10; ++step) {
      e[pos] += 1;
      const double v = cp_bound(1009, e).value;
      CHECK(v > last);
      last = v;
    }
  }
  double lead = 1e300;
  for (std::uint64_t g = 1; g < 100000; g = g * 2 + 1) {
    GcdParams params;
    params.f = params.g = g;
    params.h = 1;
    params.delta = 1;
    const auto m = macourt_bound_for(1e6, params);
    CHECK(m.leading_term < lead);
    lead = m.leading_term;
  }
}

TEST_CASE("compare_bounds") {
  const auto ctx = FieldCtx::make(13);
  const auto psi = SparsePoly::parse(13, "1,4;1,6;1,3;1,2");
  const auto r = compare_bounds(ctx, psi, {0});
  REQUIRE(r.bounds.size() == 5);
  const char* order[] = {"weil", "ccp", "cp", "macourt", "trivial"};
  for (int i = 0; i < 5; ++i) CHECK(r.bounds[i].name == order[i]);
  REQUIRE(r.exact_magnitude.has_value());
  CHECK(*r.exact_magnitude <= r.get("trivial").value);
  CHECK(*r.exact_magnitude <= r.get("weil").value);
  CHECK(r.get("macourt").regime == "pdelta_small");
  // At p = 13 nothing beats p - 1.
  CHECK(r.winner == "trivial");
  CHECK_FALSE(compare_bounds(ctx, psi, {0}, RoleMode::canonical, 0).exact_magnitude);

  const auto big = FieldCtx::make(1000081);
  const auto large = SparsePoly::parse(1000081, "1,750060;1,500040;1,666720;1,500041");
  const auto rb = compare_bounds(big, large, {0}, RoleMode::canonical, 0);
  CHECK_FALSE(rb.get("ccp").nontrivial);
  CHECK_FALSE(rb.get("cp").nontrivial);
  CHECK(rb.get("macourt").value < 1000080.0);
  CHECK(rb.winner == "macourt");
}

TEST_CASE("quadrilinear exponent comparison at W = X = Y = Z = ceil(sqrt p)") {
  // The lemma's branch term and the arbitrary-set bound differ by p^{1/64}.
  for (double p : {10007.0, 100003.0}) {
    const double w = std::ceil(std::sqrt(p));
    const auto t = lemma_T_bound(p, w, w, w, w);
    const double other = petshp_quadlinear_bound(p, w, w, w, w);
    const double predicted = std::log(p) / 64.0;
    const double observed = std::log(other / t.branch_term);
    INFO("p=" << p << " observed=" << observed << " predicted=" << predicted);
    CHECK(std::abs(observed - predicted) <= 0.05 * predicted);
  }
}
