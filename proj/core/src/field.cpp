#include "quadsum/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "quadsum/error.hpp"
#include "quadsum/int128.hpp"

namespace quadsum {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t lcm(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / std::gcd(a, b) * b;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  u128 result = 1 % mod;
  u128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q != 0) continue;
    out.push_back(q);
    while (n % q == 0) n /= q;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

Residue smallest_primitive_root(std::uint64_t p) {
  if (p == 2) return 1;
  const auto factors = prime_factors(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool generates = true;
    for (auto q : factors) {
      if (pow_mod(g, (p - 1) / q, p) == 1) {
        generates = false;
        break;
      }
    }
    if (generates) return static_cast<Residue>(g);
  }
  throw Error(Errc::composite_modulus, "no primitive root for " + std::to_string(p));
}

FieldCtx FieldCtx::make(std::uint64_t p) {
  if (p >= kModulusLimit) {
    throw Error(Errc::modulus_too_large,
                "p = " + std::to_string(p) + " must be below 2^31");
  }
  if (p < 3 || !is_prime(p)) {
    throw Error(Errc::composite_modulus,
                "p = " + std::to_string(p) + " is not a prime >= 3");
  }
  const auto g = smallest_primitive_root(p);
  const auto n = static_cast<std::uint32_t>(p - 1);

  auto tables = std::make_shared<Tables>();
  tables->dlog.assign(p, 0);
  tables->powers.resize(n);
  std::uint64_t x = 1;
  for (std::uint32_t t = 0; t < n; ++t) {
    tables->powers[t] = static_cast<Residue>(x);
    tables->dlog[x] = t;
    x = x * g % p;
  }

  const double two_pi = 2.0 * std::numbers::pi;
  tables->additive.resize(p);
  for (std::uint64_t u = 0; u < p; ++u) {
    tables->additive[u] = std::polar(1.0, two_pi * static_cast<double>(u) / static_cast<double>(p));
  }
  tables->unit_roots.resize(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    tables->unit_roots[t] = std::polar(1.0, two_pi * static_cast<double>(t) / static_cast<double>(n));
  }
  return FieldCtx(static_cast<std::uint32_t>(p), g, std::move(tables));
}

Residue FieldCtx::pow(Residue x, std::uint64_t e) const noexcept {
  if (x == 0) return e == 0 ? 1 : 0;
  const std::uint64_t n = group_order();
  return pow_g(static_cast<std::uint64_t>(dlog(x)) * (e % n));
}

Residue FieldCtx::reduce(std::int64_t v) const noexcept {
  const std::int64_t m = static_cast<std::int64_t>(p_);
  std::int64_t r = v % m;
  if (r < 0) r += m;
  return static_cast<Residue>(r);
}

// ---------------------------------------------------------------------------
// SparsePoly

SparsePoly SparsePoly::make(std::uint32_t p,
                            std::span<const std::pair<std::int64_t, std::int64_t>> coef_exp) {
  if (p < 3 || !is_prime(p)) {
    throw Error(Errc::composite_modulus, "p = " + std::to_string(p));
  }
  if (coef_exp.empty() || coef_exp.size() > kMaxTerms) {
    throw Error(Errc::invalid_argument,
                "a sparse polynomial needs between 1 and 8 terms, got " +
                    std::to_string(coef_exp.size()));
  }
  const std::int64_t m = static_cast<std::int64_t>(p) - 1;
  std::vector<Term> terms;
  terms.reserve(coef_exp.size());
  for (const auto& [coef, exp] : coef_exp) {
    std::int64_t c = coef % static_cast<std::int64_t>(p);
    if (c < 0) c += p;
    if (c == 0) {
      throw Error(Errc::invalid_argument,
                  "coefficient " + std::to_string(coef) + " vanishes mod p");
    }
    if (exp == 0) throw Error(Errc::invalid_argument, "exponent must be nonzero");
    std::int64_t k = exp % m;
    if (k <= 0) k += m;
    for (const auto& t : terms) {
      if (t.exp == static_cast<std::uint64_t>(k)) {
        throw Error(Errc::invalid_argument,
                    "exponents collide mod p-1 (" + std::to_string(exp) + ")");
      }
    }
    terms.push_back({static_cast<Residue>(c), static_cast<std::uint64_t>(k)});
  }
  return SparsePoly(p, std::move(terms));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  s = trim(s);
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty()) {
    throw Error(Errc::invalid_argument,
                "malformed polynomial '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

SparsePoly SparsePoly::parse(std::uint32_t p, std::string_view text) {
  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::string_view rest = text;
  while (!trim(rest).empty()) {
    const auto semi = rest.find(';');
    const auto item = rest.substr(0, semi);
    const auto comma = item.find(',');
    if (comma == std::string_view::npos) {
      throw Error(Errc::invalid_argument,
                  "malformed polynomial '" + std::string(text) + "'");
    }
    raw.emplace_back(parse_int(item.substr(0, comma), text),
                     parse_int(item.substr(comma + 1), text));
    if (semi == std::string_view::npos) break;
    rest.remove_prefix(semi + 1);
  }
  return make(p, raw);
}

std::vector<std::uint64_t> SparsePoly::exponents() const {
  std::vector<std::uint64_t> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.exp);
  return out;
}

std::uint64_t SparsePoly::max_exponent() const {
  std::uint64_t m = 0;
  for (const auto& t : terms_) m = std::max(m, t.exp);
  return m;
}

std::string SparsePoly::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << ';';
    os << terms_[i].coef << ',' << terms_[i].exp;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Subgroups and gcd data

Subgroup subgroup_of_order(const FieldCtx& ctx, std::uint64_t d) {
  const std::uint64_t n = ctx.group_order();
  if (d == 0 || n % d != 0) {
    throw Error(Errc::not_a_divisor,
                std::to_string(d) + " does not divide " + std::to_string(n));
  }
  Subgroup out;
  out.order = d;
  out.elements.reserve(d);
  const std::uint64_t step = n / d;
  for (std::uint64_t j = 0; j < d; ++j) out.elements.push_back(ctx.pow_g(j * step));
  std::sort(out.elements.begin(), out.elements.end());
  return out;
}

std::string_view role_mode_name(RoleMode mode) noexcept {
  return mode == RoleMode::best ? "best" : "canonical";
}

RoleMode parse_role_mode(std::string_view text) {
  if (text == "canonical") return RoleMode::canonical;
  if (text == "best") return RoleMode::best;
  throw Error(Errc::invalid_argument, "mode must be canonical or best, got '" +
                                          std::string(text) + "'");
}

namespace {

GcdParams pack_for(std::uint64_t p, const std::array<std::uint64_t, 4>& exps,
                   int delta_pos) {
  const std::uint64_t n = p - 1;
  const std::uint64_t delta = gcd(exps[delta_pos], n);

  struct Slot {
    int pos;
    std::uint64_t gcd_val;
    std::uint64_t reduced;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < 4; ++i) {
    if (i == delta_pos) continue;
    const std::uint64_t a = gcd(exps[i], n);
    slots.push_back({i, a, a / gcd(a, delta)});
  }
  // Stable so equal reductions keep input order.
  std::stable_sort(slots.begin(), slots.end(),
                   [](const Slot& a, const Slot& b) { return a.reduced > b.reduced; });

  GcdParams out;
  out.alpha = slots[0].gcd_val;
  out.beta = slots[1].gcd_val;
  out.gamma = slots[2].gcd_val;
  out.delta = delta;
  out.f = slots[0].reduced;
  out.g = slots[1].reduced;
  out.h = slots[2].reduced;
  out.role_perm = {slots[0].pos, slots[1].pos, slots[2].pos, delta_pos};
  for (int r = 0; r < 4; ++r) out.exponents[r] = exps[out.role_perm[r]];

  // f * delta = lcm(alpha, delta) divides p - 1.
  if (out.f * out.delta > n || !(out.f >= out.g && out.g >= out.h)) {
    throw Error(Errc::invalid_argument, "gcd pack violates f >= g >= h, f <= p/delta");
  }
  return out;
}

}  // namespace

std::vector<GcdParams> gcd_params(std::uint64_t p,
                                  const std::array<std::uint64_t, 4>& exps,
                                  RoleMode mode) {
  for (auto e : exps) {
    if (e == 0) throw Error(Errc::invalid_argument, "exponents must be positive");
  }
  if (p < 3) throw Error(Errc::composite_modulus, "p = " + std::to_string(p));
  if (mode == RoleMode::canonical) return {pack_for(p, exps, 3)};
  std::vector<GcdParams> packs;
  for (int pos = 0; pos < 4; ++pos) packs.push_back(pack_for(p, exps, pos));
  return packs;
}

ImageWithMultiplicity power_image(const FieldCtx& ctx, const Subgroup& source,
                                  std::uint64_t n) {
  std::vector<std::uint64_t> tally(ctx.p(), 0);
  std::vector<Residue> image;
  for (Residue x : source.elements) {
    const Residue y = ctx.pow(x, n);
    if (tally[y]++ == 0) image.push_back(y);
  }
  std::sort(image.begin(), image.end());

  ImageWithMultiplicity out;
  out.source_size = source.elements.size();
  out.multiplicity = image.empty() ? 0 : tally[image.front()];
  for (Residue y : image) {
    if (tally[y] != out.multiplicity) {
      throw Error(Errc::non_uniform_image,
                  "x^" + std::to_string(n) + " has uneven fibres on a subgroup of order " +
                      std::to_string(source.order));
    }
  }
  out.image = std::move(image);
  return out;
}

Subgroup product_set(const FieldCtx& ctx, std::span<const Subgroup> subgroups) {
  std::vector<char> present(ctx.p(), 0);
  std::vector<Residue> current{1};
  std::uint64_t order = 1;
  for (const auto& sg : subgroups) {
    std::fill(present.begin(), present.end(), 0);
    std::vector<Residue> next;
    for (Residue a : current) {
      for (Residue b : sg.elements) {
        const Residue c = ctx.mul(a, b);
        if (!present[c]) {
          present[c] = 1;
          next.push_back(c);
        }
      }
    }
    current = std::move(next);
    order = lcm(order, sg.order);
  }
  std::sort(current.begin(), current.end());

  auto expected = subgroup_of_order(ctx, order);
  if (expected.elements != current) {
    throw Error(Errc::invalid_argument,
                "product set is not the subgroup of order " + std::to_string(order));
  }
  return expected;
}

}  // namespace quadsum
