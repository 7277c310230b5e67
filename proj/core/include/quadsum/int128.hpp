#pragma once

#include <cstdint>
#include <string>

namespace quadsum {

// GCC/Clang extension type; __extension__ keeps -Wpedantic quiet.
__extension__ typedef unsigned __int128 u128;

std::string to_string(u128 value);

// Saturates at UINT64_MAX; use only for budget arithmetic.
inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  const u128 r = static_cast<u128>(a) * b;
  return r > UINT64_MAX ? UINT64_MAX : static_cast<std::uint64_t>(r);
}

}  // namespace quadsum
