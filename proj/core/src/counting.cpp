#include "quadsum/counting.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "quadsum/convolution.hpp"
#include "quadsum/error.hpp"

namespace quadsum {

std::string_view method_name(Method m) noexcept {
  return m == Method::oracle ? "oracle" : "optimized";
}

std::vector<std::pair<Residue, u128>> Distribution::nonzero_entries() const {
  std::vector<std::pair<Residue, u128>> out;
  for (std::size_t r = 0; r < counts.size(); ++r) {
    if (counts[r] != 0) out.emplace_back(static_cast<Residue>(r), counts[r]);
  }
  return out;
}

u128 Distribution::sum_of_squares() const {
  u128 s = 0;
  for (auto c : counts) s += c * c;
  return s;
}

namespace {

void require_set(const FieldCtx& ctx, std::span<const Residue> s, const char* name) {
  std::vector<char> seen(ctx.p(), 0);
  for (Residue x : s) {
    if (x >= ctx.p() || seen[x]) {
      throw Error(Errc::invalid_argument,
                  std::string("set ") + name + " must hold distinct residues mod p");
    }
    seen[x] = 1;
  }
}

void require_budget(std::uint64_t work, std::uint64_t budget, const char* what) {
  if (work > budget) {
    throw Error(Errc::budget_exceeded, std::string(what) + ": " + std::to_string(work) +
                                           " steps exceed " + std::to_string(budget));
  }
}

std::uint64_t sq(std::size_t n) { return saturating_mul(n, n); }

// d(a) = #{(u, v) in U^2 : u - v = a}, dense over F_p.
std::vector<std::uint64_t> difference_table(const FieldCtx& ctx, std::span<const Residue> us) {
  std::vector<std::uint64_t> d(ctx.p(), 0);
  for (Residue u : us) {
    for (Residue v : us) ++d[ctx.sub(u, v)];
  }
  return d;
}

// Table over F_p^* re-indexed by discrete log: out[t] = table[g^t].
std::vector<std::uint64_t> to_log_coordinates(const FieldCtx& ctx,
                                              const std::vector<std::uint64_t>& table) {
  std::vector<std::uint64_t> out(ctx.group_order(), 0);
  for (Residue x = 1; x < ctx.p(); ++x) out[ctx.dlog(x)] = table[x];
  return out;
}

}  // namespace

CountValue mult_energy(const FieldCtx& ctx, std::span<const Residue> us,
                       std::span<const Residue> vs, Method method) {
  require_set(ctx, us, "U");
  require_set(ctx, vs, "V");
  CountValue out;
  out.method = method;
  if (method == Method::oracle) {
    require_budget(saturating_mul(sq(us.size()), sq(vs.size())), kOracleBudget,
                   "mult_energy oracle");
    for (Residue u1 : us)
      for (Residue v1 : vs)
        for (Residue u2 : us)
          for (Residue v2 : vs)
            if (ctx.mul(u1, v1) == ctx.mul(u2, v2)) ++out.count;
    return out;
  }
  require_budget(saturating_mul(us.size(), vs.size()), kOptimizedBudget, "mult_energy");
  std::vector<std::uint64_t> freq(ctx.p(), 0);
  for (Residue u : us)
    for (Residue v : vs) ++freq[ctx.mul(u, v)];
  for (auto f : freq) out.count += static_cast<u128>(f) * f;
  return out;
}

std::vector<Residue> shifted_set(const FieldCtx& ctx, std::span<const Residue> set,
                                 Residue lambda) {
  std::vector<Residue> out;
  out.reserve(set.size());
  for (Residue x : set) out.push_back(ctx.add(x, lambda % ctx.p()));
  std::sort(out.begin(), out.end());
  return out;
}

CountValue shifted_energy(const FieldCtx& ctx, const Subgroup& group, Residue lambda,
                          Method method) {
  if (lambda % ctx.p() == 0) throw Error(Errc::nonzero_required, "lambda must be nonzero");
  const auto shifted = shifted_set(ctx, group.elements, lambda);
  return mult_energy(ctx, shifted, shifted, method);
}

CountValue d_times(const FieldCtx& ctx, std::span<const Residue> us, Method method) {
  require_set(ctx, us, "U");
  CountValue out;
  out.method = method;
  const auto d = difference_table(ctx, us);

  if (method == Method::oracle) {
    if (us.size() > kDTimesOracleMaxSet) {
      throw Error(Errc::budget_exceeded, "d_times oracle is limited to |U| <= 60");
    }
    // r(mu) = sum_{ab = mu} d(a) d(b), zero products included; D_x = sum r^2.
    std::vector<std::pair<Residue, std::uint64_t>> support;
    for (Residue a = 0; a < ctx.p(); ++a) {
      if (d[a]) support.emplace_back(a, d[a]);
    }
    std::unordered_map<Residue, u128> r;
    for (const auto& [a, da] : support)
      for (const auto& [b, db] : support) r[ctx.mul(a, b)] += static_cast<u128>(da) * db;
    for (const auto& [mu, c] : r) out.count += c * c;
    return out;
  }

  if (us.size() > kDTimesOptimizedMaxSet || ctx.p() > kDTimesOptimizedMaxPrime) {
    throw Error(Errc::budget_exceeded, "d_times needs |U| <= 10^4 and p <= 10^6");
  }
  // Nonzero differences multiply by adding discrete logs: a cyclic
  // convolution of length p-1. Zero products are closed form:
  // r(0) = 2 d(0) |U|^2 - d(0)^2.
  const auto logs = to_log_coordinates(ctx, d);
  const auto conv = cyclic_convolve(logs, logs);
  const u128 n2 = static_cast<u128>(us.size()) * us.size();
  const u128 d0 = d[0];
  const u128 r0 = 2 * d0 * n2 - d0 * d0;
  out.count = r0 * r0;
  for (auto c : conv) out.count += c * c;
  return out;
}

std::vector<std::uint64_t> scaled_difference_profile(const FieldCtx& ctx,
                                                     std::span<const Residue> fs,
                                                     std::span<const Residue> gs) {
  const auto d = difference_table(ctx, gs);
  std::vector<std::pair<Residue, std::uint64_t>> support;
  for (Residue a = 0; a < ctx.p(); ++a) {
    if (d[a]) support.emplace_back(a, d[a]);
  }
  std::vector<std::uint64_t> r(ctx.p(), 0);
  for (Residue f : fs)
    for (const auto& [a, da] : support) r[ctx.mul(f, a)] += da;
  return r;
}

CountValue n_triples(const FieldCtx& ctx, std::span<const Residue> fs,
                     std::span<const Residue> gs, std::span<const Residue> hs,
                     Method method) {
  require_set(ctx, fs, "F");
  require_set(ctx, gs, "G");
  require_set(ctx, hs, "H");
  CountValue out;
  out.method = method;
  if (method == Method::oracle) {
    const std::uint64_t fgh = saturating_mul(saturating_mul(fs.size(), gs.size()), hs.size());
    require_budget(sq(fgh), kOracleBudget, "n_triples oracle");
    for (Residue f1 : fs)
      for (Residue g1 : gs)
        for (Residue g2 : gs) {
          const Residue lhs = ctx.mul(f1, ctx.sub(g1, g2));
          for (Residue f2 : fs)
            for (Residue h1 : hs)
              for (Residue h2 : hs)
                if (lhs == ctx.mul(f2, ctx.sub(h1, h2))) ++out.count;
        }
    return out;
  }
  require_budget(saturating_mul(fs.size(), sq(gs.size())), kOptimizedBudget, "n_triples |F||G|^2");
  require_budget(saturating_mul(fs.size(), sq(hs.size())), kOptimizedBudget, "n_triples |F||H|^2");
  const auto rg = scaled_difference_profile(ctx, fs, gs);
  const auto rh = scaled_difference_profile(ctx, fs, hs);
  for (std::size_t v = 0; v < rg.size(); ++v) out.count += static_cast<u128>(rg[v]) * rh[v];
  return out;
}

Distribution j_distribution(const FieldCtx& ctx, std::span<const Residue> xs,
                            std::span<const Residue> ys, Method method) {
  require_set(ctx, xs, "X");
  require_set(ctx, ys, "Y");
  Distribution out;
  out.counts.assign(ctx.p(), 0);
  if (method == Method::oracle) {
    require_budget(saturating_mul(sq(xs.size()), sq(ys.size())), kOracleBudget,
                   "j_distribution oracle");
    for (Residue x1 : xs)
      for (Residue x2 : xs) {
        const Residue dx = ctx.sub(x1, x2);
        for (Residue y1 : ys)
          for (Residue y2 : ys) {
            const Residue mu = ctx.mul(dx, ctx.sub(y1, y2));
            if (mu == 0) {
              ++out.zero_count;
            } else {
              ++out.counts[mu];
              ++out.total;
            }
          }
      }
    return out;
  }
  require_budget(sq(xs.size()) + sq(ys.size()), kOptimizedBudget, "j_distribution");
  const auto dx = difference_table(ctx, xs);
  const auto dy = difference_table(ctx, ys);
  const auto conv = cyclic_convolve(to_log_coordinates(ctx, dx), to_log_coordinates(ctx, dy));
  for (std::uint32_t s = 0; s < conv.size(); ++s) {
    out.counts[ctx.pow_g(s)] = conv[s];
    out.total += conv[s];
  }
  const u128 nx = static_cast<u128>(xs.size()) * xs.size();
  const u128 ny = static_cast<u128>(ys.size()) * ys.size();
  out.zero_count = dx[0] * ny + nx * dy[0] - static_cast<u128>(dx[0]) * dy[0];
  return out;
}

Distribution i_distribution(const FieldCtx& ctx, std::span<const Residue> ws,
                            std::span<const Residue> zs, Method method) {
  require_set(ctx, ws, "W");
  require_set(ctx, zs, "Z");
  Distribution out;
  out.counts.assign(ctx.p(), 0);
  if (method == Method::oracle) {
    require_budget(saturating_mul(sq(ws.size()), zs.size()), kOracleBudget,
                   "i_distribution oracle");
    for (Residue w1 : ws)
      for (Residue w2 : ws)
        for (Residue z : zs) ++out.counts[ctx.mul(z, ctx.sub(w1, w2))];
  } else {
    require_budget(sq(ws.size()) + saturating_mul(zs.size(), sq(ws.size())), kOptimizedBudget,
                   "i_distribution");
    const auto d = difference_table(ctx, ws);
    std::vector<std::pair<Residue, std::uint64_t>> support;
    for (Residue a = 0; a < ctx.p(); ++a) {
      if (d[a]) support.emplace_back(a, d[a]);
    }
    for (Residue z : zs)
      for (const auto& [a, da] : support) out.counts[ctx.mul(z, a)] += da;
  }
  for (auto c : out.counts) out.total += c;
  out.zero_count = out.counts[0];
  return out;
}

}  // namespace quadsum
