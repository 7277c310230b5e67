#pragma once

// Exact cyclic convolution of nonnegative integer sequences. Used to turn
// difference tables into multiplicative convolutions over F_p^* by moving to
// discrete-log coordinates.

#include <cstdint>
#include <span>
#include <vector>

#include "quadsum/int128.hpp"

namespace quadsum {

/// c[s] = sum_{(i + j) mod n = s} a[i] b[j], n = a.size() = b.size().
///
/// Chooses a sparse direct product when the supports are small, and a
/// three-prime NTT with CRT reconstruction otherwise. The NTT path requires
/// sum(a) * sum(b) < 2^85 and n <= 2^22; larger inputs fall back to direct.
std::vector<u128> cyclic_convolve(std::span<const std::uint64_t> a,
                                  std::span<const std::uint64_t> b);

/// Direct O(nnz(a) nnz(b)) evaluation; exposed for cross-checks.
std::vector<u128> cyclic_convolve_direct(std::span<const std::uint64_t> a,
                                         std::span<const std::uint64_t> b);

/// NTT evaluation; throws Errc::budget_exceeded if exactness cannot be
/// guaranteed (see cyclic_convolve).
std::vector<u128> cyclic_convolve_ntt(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b);

}  // namespace quadsum
