#pragma once

// Exact counts for the additive-multiplicative quantities: multiplicative
// energy, D_x, N(F, G, H) and the J / I distributions. Every quantity has a
// brute-force oracle path and an optimized path; both return identical
// integers and are cross-checked by the verification suites.

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "quadsum/field.hpp"
#include "quadsum/int128.hpp"

namespace quadsum {

enum class Method { oracle, optimized };

std::string_view method_name(Method m) noexcept;

struct CountValue {
  u128 count = 0;
  Method method = Method::optimized;
};

/// Counts indexed by residue. For J the zero residue is excluded from
/// `counts` and `total` and reported in `zero_count`; for I, counts[0] = I(0)
/// is included in `total` and mirrored in `zero_count`.
struct Distribution {
  std::vector<u128> counts;  // length p
  u128 total = 0;
  u128 zero_count = 0;

  /// (residue, count) for every residue with a nonzero count.
  std::vector<std::pair<Residue, u128>> nonzero_entries() const;
  u128 sum_of_squares() const;
};

// Budgets (number of elementary steps each path may take).
inline constexpr std::uint64_t kOracleBudget = 100'000'000;
inline constexpr std::uint64_t kOptimizedBudget = 100'000'000;
inline constexpr std::size_t kDTimesOracleMaxSet = 60;
inline constexpr std::size_t kDTimesOptimizedMaxSet = 10'000;
inline constexpr std::uint64_t kDTimesOptimizedMaxPrime = 1'000'000;

/// Number of (u1, v1, u2, v2) in U x V x U x V with u1 v1 = u2 v2.
CountValue mult_energy(const FieldCtx& ctx, std::span<const Residue> us,
                       std::span<const Residue> vs, Method method = Method::optimized);

/// {x + lambda : x in set} as a sorted list.
std::vector<Residue> shifted_set(const FieldCtx& ctx, std::span<const Residue> set,
                                 Residue lambda);

/// E^x(G + lambda); lambda must be nonzero.
CountValue shifted_energy(const FieldCtx& ctx, const Subgroup& group, Residue lambda,
                          Method method = Method::optimized);

/// D_x(U): solutions of (u1-v1)(u2-v2) = (u3-v3)(u4-v4) over U.
CountValue d_times(const FieldCtx& ctx, std::span<const Residue> us,
                   Method method = Method::optimized);

/// N(F, G, H): solutions of f1 (g1 - g2) = f2 (h1 - h2).
CountValue n_triples(const FieldCtx& ctx, std::span<const Residue> fs,
                     std::span<const Residue> gs, std::span<const Residue> hs,
                     Method method = Method::optimized);

/// r(v) = #{(f, g1, g2) : f (g1 - g2) = v} for every v in F_p. N(F, G, H) is
/// the inner product of the profiles for (F, G) and (F, H).
std::vector<std::uint64_t> scaled_difference_profile(const FieldCtx& ctx,
                                                     std::span<const Residue> fs,
                                                     std::span<const Residue> gs);

/// J(mu) = #{(x1, x2, y1, y2) : (x1 - x2)(y1 - y2) = mu}.
Distribution j_distribution(const FieldCtx& ctx, std::span<const Residue> xs,
                            std::span<const Residue> ys, Method method = Method::optimized);

/// I(lambda) = #{(w1, w2, z) : z (w1 - w2) = lambda}, lambda over all of F_p.
Distribution i_distribution(const FieldCtx& ctx, std::span<const Residue> ws,
                            std::span<const Residue> zs, Method method = Method::optimized);

}  // namespace quadsum
