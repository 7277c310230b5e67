#include "quadsum/convolution.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "quadsum/error.hpp"

namespace quadsum {

namespace {

struct NttPrime {
  std::uint32_t mod;
  std::uint32_t root;  // primitive root
};

constexpr std::array<NttPrime, 3> kPrimes{{
    {998244353u, 3u},  // 119 * 2^23 + 1
    {167772161u, 3u},  //   5 * 2^25 + 1
    {469762049u, 3u},  //   7 * 2^26 + 1
}};

constexpr std::size_t kMaxNttLength = std::size_t{1} << 23;

std::uint64_t power(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

void ntt(std::vector<std::uint64_t>& a, const NttPrime& prime, bool inverse) {
  const std::uint64_t mod = prime.mod;
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::uint64_t w = power(prime.root, (mod - 1) / len, mod);
    if (inverse) w = power(w, mod - 2, mod);
    std::vector<std::uint64_t> tw(len / 2);
    tw[0] = 1;
    for (std::size_t k = 1; k < len / 2; ++k) tw[k] = tw[k - 1] * w % mod;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::uint64_t u = a[i + k];
        const std::uint64_t v = a[i + k + len / 2] * tw[k] % mod;
        a[i + k] = u + v >= mod ? u + v - mod : u + v;
        a[i + k + len / 2] = u >= v ? u - v : u + mod - v;
      }
    }
  }
  if (inverse) {
    const std::uint64_t inv_n = power(n, mod - 2, mod);
    for (auto& x : a) x = x * inv_n % mod;
  }
}

std::vector<std::uint64_t> linear_mod(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b, std::size_t len,
                                      const NttPrime& prime) {
  std::vector<std::uint64_t> fa(len, 0), fb(len, 0);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i] % prime.mod;
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i] % prime.mod;
  ntt(fa, prime, false);
  ntt(fb, prime, false);
  for (std::size_t i = 0; i < len; ++i) fa[i] = fa[i] * fb[i] % prime.mod;
  ntt(fa, prime, true);
  return fa;
}

u128 total(std::span<const std::uint64_t> v) {
  u128 s = 0;
  for (auto x : v) s += x;
  return s;
}

}  // namespace

std::vector<u128> cyclic_convolve_direct(std::span<const std::uint64_t> a,
                                         std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw Error(Errc::invalid_argument, "length mismatch");
  const std::size_t n = a.size();
  std::vector<std::size_t> nz_a, nz_b;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i]) nz_a.push_back(i);
    if (b[i]) nz_b.push_back(i);
  }
  std::vector<u128> c(n, 0);
  for (std::size_t i : nz_a) {
    for (std::size_t j : nz_b) {
      std::size_t s = i + j;
      if (s >= n) s -= n;
      c[s] += static_cast<u128>(a[i]) * b[j];
    }
  }
  return c;
}

std::vector<u128> cyclic_convolve_ntt(std::span<const std::uint64_t> a,
                                      std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw Error(Errc::invalid_argument, "length mismatch");
  const std::size_t n = a.size();
  if (n == 0) return {};
  std::size_t len = 1;
  while (len < 2 * n - 1) len <<= 1;
  // Bound on any output coefficient: sum(a) * sum(b) < 2^85 < P1 P2 P3.
  const u128 sa = total(a), sb = total(b);
  const u128 limit = u128{1} << 85;
  if (len > kMaxNttLength || (sa != 0 && sb > limit / sa)) {
    throw Error(Errc::budget_exceeded, "convolution too large for exact NTT");
  }

  const auto r1 = linear_mod(a, b, len, kPrimes[0]);
  const auto r2 = linear_mod(a, b, len, kPrimes[1]);
  const auto r3 = linear_mod(a, b, len, kPrimes[2]);

  const std::uint64_t p1 = kPrimes[0].mod, p2 = kPrimes[1].mod, p3 = kPrimes[2].mod;
  const std::uint64_t inv_p1_mod_p2 = power(p1 % p2, p2 - 2, p2);
  const std::uint64_t p1p2_mod_p3 = (p1 % p3) * (p2 % p3) % p3;
  const std::uint64_t inv_p1p2_mod_p3 = power(p1p2_mod_p3, p3 - 2, p3);

  std::vector<u128> c(n, 0);
  for (std::size_t i = 0; i < 2 * n - 1; ++i) {
    // Garner: x = x1 + p1 k2 + p1 p2 k3.
    const std::uint64_t x1 = r1[i];
    const std::uint64_t k2 = (r2[i] + p2 - x1 % p2) % p2 * inv_p1_mod_p2 % p2;
    const std::uint64_t partial = (x1 % p3 + (p1 % p3) * k2 % p3) % p3;
    const std::uint64_t k3 = (r3[i] + p3 - partial) % p3 * inv_p1p2_mod_p3 % p3;
    const u128 x = static_cast<u128>(x1) + static_cast<u128>(p1) * k2 +
                   static_cast<u128>(p1) * p2 * k3;
    c[i % n] += x;
  }
  return c;
}

std::vector<u128> cyclic_convolve(std::span<const std::uint64_t> a,
                                  std::span<const std::uint64_t> b) {
  if (a.size() != b.size()) throw Error(Errc::invalid_argument, "length mismatch");
  const auto nnz = [](std::span<const std::uint64_t> v) {
    return static_cast<std::uint64_t>(
        std::count_if(v.begin(), v.end(), [](std::uint64_t x) { return x != 0; }));
  };
  const std::uint64_t direct_cost = nnz(a) * nnz(b);
  std::uint64_t len = 1;
  while (len < 2 * a.size()) len <<= 1;
  // Three forward/inverse NTT pairs cost roughly 9 len log2(len) multiplies.
  std::uint64_t log_len = 0;
  while ((std::uint64_t{1} << log_len) < len) ++log_len;
  const std::uint64_t ntt_cost = 9 * len * (log_len + 1);
  if (direct_cost <= ntt_cost) return cyclic_convolve_direct(a, b);
  try {
    return cyclic_convolve_ntt(a, b);
  } catch (const Error&) {
    return cyclic_convolve_direct(a, b);
  }
}

}  // namespace quadsum
