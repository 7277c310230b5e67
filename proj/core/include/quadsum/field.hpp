#pragma once

// Prime-field context, sparse polynomials, multiplicative subgroups and the
// gcd bookkeeping used by the quadrinomial bound.

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace quadsum {

using Residue = std::uint32_t;

/// Largest admissible modulus is 2^31 - 1 so products fit in 64 bits.
inline constexpr std::uint64_t kModulusLimit = std::uint64_t{1} << 31;

bool is_prime(std::uint64_t n);
std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm(std::uint64_t a, std::uint64_t b);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
/// Sorted list of positive divisors.
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// Immutable arithmetic context for F_p. Copies share the precomputed tables.
///
/// Holds the smallest primitive root g, the discrete-log table, the power
/// table g^t, the additive character values e_p(u) = exp(2 pi i u / p) and
/// the (p-1)-th roots of unity used to realize multiplicative characters.
class FieldCtx {
 public:
  /// Throws Errc::modulus_too_large for p >= 2^31 and Errc::composite_modulus
  /// for anything that is not a prime >= 3.
  static FieldCtx make(std::uint64_t p);

  std::uint32_t p() const noexcept { return p_; }
  /// Order of the multiplicative group, p - 1.
  std::uint32_t group_order() const noexcept { return p_ - 1; }
  Residue generator() const noexcept { return g_; }

  /// t with g^t = x; x must be nonzero.
  std::uint32_t dlog(Residue x) const noexcept { return tables_->dlog[x]; }
  /// g^(t mod (p-1)).
  Residue pow_g(std::uint64_t t) const noexcept {
    return tables_->powers[t % group_order()];
  }
  /// e_p(u) for u in [0, p).
  const std::complex<double>& e(Residue u) const noexcept {
    return tables_->additive[u];
  }
  /// exp(2 pi i t / (p-1)) for any t.
  const std::complex<double>& unit_root(std::uint64_t t) const noexcept {
    return tables_->unit_roots[t % group_order()];
  }

  Residue add(Residue a, Residue b) const noexcept {
    const std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Residue>(s >= p_ ? s - p_ : s);
  }
  Residue sub(Residue a, Residue b) const noexcept {
    return a >= b ? a - b : a + p_ - b;
  }
  Residue mul(Residue a, Residue b) const noexcept {
    return static_cast<Residue>(std::uint64_t{a} * b % p_);
  }
  Residue inv(Residue a) const noexcept {
    return pow_g(group_order() - dlog(a));
  }
  Residue pow(Residue x, std::uint64_t e) const noexcept;
  Residue reduce(std::int64_t v) const noexcept;

 private:
  struct Tables {
    std::vector<std::uint32_t> dlog;
    std::vector<Residue> powers;
    std::vector<std::complex<double>> additive;
    std::vector<std::complex<double>> unit_roots;
  };

  FieldCtx(std::uint32_t p, Residue g, std::shared_ptr<const Tables> tables)
      : p_(p), g_(g), tables_(std::move(tables)) {}

  std::uint32_t p_;
  Residue g_;
  std::shared_ptr<const Tables> tables_;
};

/// Smallest primitive root of the prime p, by order testing.
Residue smallest_primitive_root(std::uint64_t p);

struct Term {
  Residue coef;
  std::uint64_t exp;
};

inline constexpr std::size_t kMaxTerms = 8;

/// t-sparse polynomial sum a_i X^{k_i} over F_p, 1 <= t <= 8.
///
/// Exponents are stored reduced to [1, p-1] (x^k depends only on k mod p-1
/// on F_p^*); a reduction that collides with another term is rejected, as is
/// a zero exponent or a coefficient divisible by p.
class SparsePoly {
 public:
  static SparsePoly make(std::uint32_t p,
                         std::span<const std::pair<std::int64_t, std::int64_t>> coef_exp);
  /// Parses "a,k;b,l;..." (whitespace tolerated).
  static SparsePoly parse(std::uint32_t p, std::string_view text);

  std::uint32_t p() const noexcept { return p_; }
  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  std::vector<std::uint64_t> exponents() const;
  std::uint64_t max_exponent() const;

  /// Canonical text form, parseable by parse().
  std::string to_string() const;

 private:
  SparsePoly(std::uint32_t p, std::vector<Term> terms)
      : p_(p), terms_(std::move(terms)) {}

  std::uint32_t p_;
  std::vector<Term> terms_;
};

/// The subgroup of F_p^* of order d, i.e. the d-th roots of unity.
struct Subgroup {
  std::uint64_t order = 0;
  std::vector<Residue> elements;  // sorted ascending
};

/// {x : x^d = 1}. Throws Errc::not_a_divisor when d does not divide p-1.
Subgroup subgroup_of_order(const FieldCtx& ctx, std::uint64_t d);
inline Subgroup full_group(const FieldCtx& ctx) {
  return subgroup_of_order(ctx, ctx.group_order());
}

enum class RoleMode { canonical, best };

std::string_view role_mode_name(RoleMode mode) noexcept;
RoleMode parse_role_mode(std::string_view text);

/// gcd data for a quadrinomial with exponents placed in the k, l, m, n roles.
struct GcdParams {
  std::uint64_t alpha = 0, beta = 0, gamma = 0, delta = 0;
  std::uint64_t f = 0, g = 0, h = 0;
  /// role_perm[r] is the input position (0..3) of the exponent in role r,
  /// roles ordered k, l, m, n.
  std::array<int, 4> role_perm{0, 1, 2, 3};
  std::array<std::uint64_t, 4> exponents{};  // in role order
};

/// canonical: input position 3 keeps the delta role; the other three are
/// ordered so f >= g >= h. best: every position takes the delta role once,
/// giving four packs. Every pack is checked against f <= p/delta.
std::vector<GcdParams> gcd_params(std::uint64_t p,
                                  const std::array<std::uint64_t, 4>& exps,
                                  RoleMode mode);

struct ImageWithMultiplicity {
  std::vector<Residue> image;  // sorted
  std::uint64_t multiplicity = 0;
  std::uint64_t source_size = 0;
};

/// Image of x -> x^n on `source`, with its preimage count. The count is
/// tallied and checked for uniformity (Errc::non_uniform_image otherwise).
ImageWithMultiplicity power_image(const FieldCtx& ctx, const Subgroup& source,
                                  std::uint64_t n);

/// Product set {x_1 x_2 ... : x_i in subgroups[i]} by enumeration; checked
/// against the subgroup of order lcm(orders).
Subgroup product_set(const FieldCtx& ctx, std::span<const Subgroup> subgroups);

}  // namespace quadsum
