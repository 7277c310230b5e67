#pragma once

// Numeric values of the bound expressions for quadrinomial sums and for the
// auxiliary counting lemmas. Implied constants are 1 and o(1) terms are 0,
// so these are comparable indices, not certified majorants. Thresholds use
// the natural logarithm, and piecewise displays are tested top to bottom
// with >= exactly as written.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quadsum/charsum.hpp"
#include "quadsum/field.hpp"

namespace quadsum {

/// sqrt(p) * ln(p), the switching point of every piecewise bound.
double log_threshold(double p);

struct FlaggedBound {
  double value = 0.0;
  bool nontrivial = false;
};

/// A piecewise bound: its value, the selected branch, and the two summands
/// when the display has a common leading term plus a branch term.
struct RegimeBound {
  double value = 0.0;
  std::string regime;
  double leading_term = 0.0;
  double branch_term = 0.0;
};

/// max(k_i) sqrt(p).
double weil_bound(double p, std::span<const std::uint64_t> exponents);

/// (klmn / max)^{1/9} p^{8/9}; nontrivial iff klmn / max < p.
FlaggedBound ccp_bound(double p, const std::array<std::uint64_t, 4>& exps);

/// (klmn)^{1/16} p^{7/8}; nontrivial iff klmn < p^2.
FlaggedBound cp_bound(double p, const std::array<std::uint64_t, 4>& exps);

struct MacourtBound {
  double value = 0.0;
  std::string regime;  // g_large | f_large | pdelta_large | pdelta_small
  GcdParams params;
  double leading_term = 0.0;  // p g^{-1/8}
  double branch_term = 0.0;
};

/// Evaluates one gcd pack.
MacourtBound macourt_bound_for(double p, const GcdParams& params);

/// p g^{-1/8} plus the regime term of the gcd-parameterized estimate. In
/// best mode the smallest value over the four delta-role choices is
/// returned.
MacourtBound macourt_bound(std::uint64_t p, const std::array<std::uint64_t, 4>& exps,
                           RoleMode mode = RoleMode::canonical);

/// True when the branch recorded in `bound.regime` has its case condition
/// satisfied literally (e.g. f >= sqrt(p) ln p > g for f_large) and the
/// parameters satisfy f >= g >= h and f <= p / delta.
bool regime_condition_holds(double p, const MacourtBound& bound);

/// Quadrilinear bound over subgroups with W >= X >= Y >= Z
/// (Errc::ordering_violated otherwise). Regimes: y_large | x_large |
/// w_large | w_small.
RegimeBound lemma_T_bound(double p, double w, double x, double y, double z);

/// p^{1/16} W^{15/16} (XY)^{61/64} Z^{31/32}, valid for arbitrary sets.
double petshp_quadlinear_bound(double p, double w, double x, double y, double z);

/// D_x(G): G^8/p (large) or G^6 ln G (small).
RegimeBound dx_bound(double p, double g);

/// |E^x(G + lambda) - G^4/p|: sqrt(p) G^{3/2} (above_two_thirds),
/// G^3/sqrt(p) (large), G^2 ln G (small).
RegimeBound shifted_energy_bound(double p, double g);

/// N(F, G, H) with G >= H (Errc::ordering_violated otherwise), M = max(F, G):
/// F^2 M^{-1/2} times G^2 H^2 p^{-1/2} (h_large) | G^2 H^{3/2} p^{-1/4}
/// (g_large) | (GH)^{3/2} (g_small).
RegimeBound n_triples_bound(double p, double f, double g, double h);

/// sum_mu J(mu)^2 display: X^4 Y^4 / p (y_large) | X^4 Y^3 p^{-1/2} (x_large)
/// | (XY)^3 (x_small).
RegimeBound j_energy_bound(double p, double x, double y);

/// sum_lambda I(lambda)^2 display: Z^2 W^{7/2} p^{-1/2} (w_large) |
/// Z^2 W^{5/2} (w_small).
RegimeBound i_energy_bound(double p, double w, double z);

struct NamedBound {
  std::string name;  // weil | ccp | cp | macourt | trivial
  double value = 0.0;
  std::string regime;
  bool nontrivial = false;
};

struct BoundReport {
  std::vector<NamedBound> bounds;  // catalog order
  GcdParams params;
  std::string winner;
  std::optional<double> exact_magnitude;

  const NamedBound& get(std::string_view name) const;
};

inline constexpr std::uint64_t kExactSumMaxPrime = 1'000'000;

/// Evaluates every bound for a quadrinomial, plus |S_chi(Psi)| when
/// p <= exact_budget. winner is the smallest nontrivial value, ties broken
/// in catalog order; "trivial" when nothing beats p - 1.
BoundReport compare_bounds(const FieldCtx& ctx, const SparsePoly& psi, CharacterIndex chi,
                           RoleMode mode = RoleMode::canonical,
                           std::uint64_t exact_budget = kExactSumMaxPrime);

}  // namespace quadsum
