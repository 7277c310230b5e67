#include "quadsum/charsum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quadsum/error.hpp"
#include "quadsum/int128.hpp"

namespace quadsum {

std::uint64_t CharacterIndex::order(const FieldCtx& ctx) const {
  const std::uint64_t n = ctx.group_order();
  return n / gcd(j % n, n);
}

namespace {

SumValue finish(const CompensatedSum& acc, std::uint64_t terms) {
  SumValue out;
  out.value = acc.value();
  out.magnitude = std::abs(out.value);
  out.term_count = terms;
  return out;
}

void require_sorted_subset(const FieldCtx& ctx, std::span<const Residue> s,
                           bool allow_zero, const char* name) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] >= ctx.p() || (!allow_zero && s[i] == 0) || (i > 0 && s[i - 1] >= s[i])) {
      throw Error(Errc::invalid_argument,
                  std::string("set ") + name + " must be sorted distinct residues" +
                      (allow_zero ? "" : " of F_p^*"));
    }
  }
}

}  // namespace

SumValue sum_exact(const FieldCtx& ctx, const SparsePoly& psi, CharacterIndex chi) {
  if (psi.p() != ctx.p()) throw Error(Errc::invalid_argument, "polynomial is over another field");
  const std::uint64_t n = ctx.group_order();
  const auto terms = psi.terms();
  const std::uint64_t j = chi.j % n;

  CompensatedSum acc;
  for (std::uint64_t t = 0; t < n; ++t) {
    std::uint64_t arg = 0;
    for (const auto& term : terms) {
      arg += std::uint64_t{term.coef} * ctx.pow_g((term.exp % n) * t);
      arg %= ctx.p();
    }
    acc.add(ctx.unit_root(j * t) * ctx.e(static_cast<Residue>(arg)));
  }
  return finish(acc, n);
}

SumValue sum_decomposed(const FieldCtx& ctx, const SparsePoly& psi, CharacterIndex chi,
                        std::uint64_t budget) {
  if (psi.size() != 4) {
    throw Error(Errc::invalid_argument, "the subgroup decomposition needs a quadrinomial");
  }
  if (psi.p() != ctx.p()) throw Error(Errc::invalid_argument, "polynomial is over another field");
  const std::uint64_t n = ctx.group_order();
  const auto terms = psi.terms();
  const auto& tk = terms[0];
  const auto& tl = terms[1];
  const auto& tm = terms[2];
  const auto& tn = terms[3];
  const std::uint64_t alpha = gcd(tk.exp, n);
  const std::uint64_t beta = gcd(tl.exp, n);
  const std::uint64_t gamma = gcd(tm.exp, n);

  const std::uint64_t work = saturating_mul(saturating_mul(alpha * beta, gamma), n);
  if (work > budget) {
    throw Error(Errc::budget_exceeded, "alpha beta gamma (p-1) = " + std::to_string(work) +
                                           " exceeds " + std::to_string(budget));
  }

  // Subgroup elements as discrete logs: G_d = {g^{i (p-1)/d}}.
  auto logs_of = [n](std::uint64_t d) {
    std::vector<std::uint64_t> out(d);
    for (std::uint64_t i = 0; i < d; ++i) out[i] = i * (n / d);
    return out;
  };
  const auto xs = logs_of(alpha);
  const auto ys = logs_of(beta);
  const auto zs = logs_of(gamma);
  const std::uint64_t j = chi.j % n;
  const std::uint64_t k = tk.exp % n, l = tl.exp % n, m = tm.exp % n, e = tn.exp % n;

  auto monomial = [&](std::uint64_t coef, std::uint64_t exp, std::uint64_t log_arg) {
    return static_cast<std::uint64_t>(coef) * ctx.pow_g(exp * (log_arg % n)) % ctx.p();
  };

  CompensatedSum acc;
  for (std::uint64_t x : xs) {
    for (std::uint64_t y : ys) {
      for (std::uint64_t z : zs) {
        CompensatedSum inner;
        for (std::uint64_t w = 0; w < n; ++w) {
          // theta = chi(wxy) e_p(c (wxy)^m), rho = chi(z) e_p(b (wxz)^l),
          // sigma = e_p(a (wyz)^k); x^k = y^l = z^m = 1 drop out.
          const auto theta = ctx.unit_root(j * (w + x + y)) *
                             ctx.e(static_cast<Residue>(monomial(tm.coef, m, w + x + y)));
          const auto rho = ctx.unit_root(j * z) *
                           ctx.e(static_cast<Residue>(monomial(tl.coef, l, w + x + z)));
          const auto sigma = ctx.e(static_cast<Residue>(monomial(tk.coef, k, w + y + z)));
          const auto last = ctx.e(static_cast<Residue>(monomial(tn.coef, e, w + x + y + z)));
          inner.add(theta * rho * sigma * last);
        }
        acc.add(inner);
      }
    }
  }
  CompensatedSum scaled;
  scaled.add(acc.value() / static_cast<double>(alpha * beta * gamma));
  return finish(scaled, n);
}

SumValue bilinear_sum(const FieldCtx& ctx, std::span<const Residue> xs,
                      std::span<const Residue> ys,
                      std::span<const std::complex<double>> x_weights,
                      std::span<const std::complex<double>> y_weights) {
  if (xs.size() != x_weights.size() || ys.size() != y_weights.size()) {
    throw Error(Errc::invalid_argument, "one weight per set element is required");
  }
  for (Residue v : xs) {
    if (v >= ctx.p()) throw Error(Errc::invalid_argument, "X must lie in [0, p)");
  }
  for (Residue v : ys) {
    if (v >= ctx.p()) throw Error(Errc::invalid_argument, "Y must lie in [0, p)");
  }
  CompensatedSum acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CompensatedSum row;
    for (std::size_t k = 0; k < ys.size(); ++k) {
      row.add(y_weights[k] * ctx.e(ctx.mul(xs[i], ys[k])));
    }
    acc.add(x_weights[i] * row.value());
  }
  return finish(acc, static_cast<std::uint64_t>(xs.size()) * ys.size());
}

double Tensor3::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

QuadWeights QuadWeights::ones(std::size_t w, std::size_t x, std::size_t y, std::size_t z) {
  return {Tensor3(w, x, y), Tensor3(w, x, z), Tensor3(w, y, z), Tensor3(x, y, z)};
}

SumValue quadlinear_sum(const FieldCtx& ctx, std::span<const Residue> ws,
                        std::span<const Residue> xs, std::span<const Residue> ys,
                        std::span<const Residue> zs, const QuadWeights& weights,
                        Residue a, std::uint64_t budget) {
  if (a % ctx.p() == 0) throw Error(Errc::nonzero_required, "a must lie in F_p^*");
  require_sorted_subset(ctx, ws, false, "W");
  require_sorted_subset(ctx, xs, false, "X");
  require_sorted_subset(ctx, ys, false, "Y");
  require_sorted_subset(ctx, zs, false, "Z");
  const std::uint64_t work = saturating_mul(
      saturating_mul(ws.size(), xs.size()), saturating_mul(ys.size(), zs.size()));
  if (work > budget) {
    throw Error(Errc::budget_exceeded, "|W||X||Y||Z| = " + std::to_string(work) +
                                           " exceeds " + std::to_string(budget));
  }
  auto check_shape = [](const Tensor3& t, std::size_t a0, std::size_t a1, std::size_t a2,
                        const char* name) {
    if (t.dim0() != a0 || t.dim1() != a1 || t.dim2() != a2) {
      throw Error(Errc::invalid_argument, std::string("weight array ") + name +
                                              " has the wrong shape");
    }
    if (t.max_abs() > 1.0 + 1e-12) {
      throw Error(Errc::invalid_argument, std::string("weights ") + name + " exceed 1");
    }
  };
  check_shape(weights.theta, ws.size(), xs.size(), ys.size(), "theta");
  check_shape(weights.rho, ws.size(), xs.size(), zs.size(), "rho");
  check_shape(weights.sigma, ws.size(), ys.size(), zs.size(), "sigma");
  check_shape(weights.tau, xs.size(), ys.size(), zs.size(), "tau");

  CompensatedSum acc;
  for (std::size_t iw = 0; iw < ws.size(); ++iw) {
    const Residue aw = ctx.mul(a % ctx.p(), ws[iw]);
    for (std::size_t ix = 0; ix < xs.size(); ++ix) {
      const Residue awx = ctx.mul(aw, xs[ix]);
      for (std::size_t iy = 0; iy < ys.size(); ++iy) {
        const Residue awxy = ctx.mul(awx, ys[iy]);
        CompensatedSum inner;
        for (std::size_t iz = 0; iz < zs.size(); ++iz) {
          inner.add(weights.rho(iw, ix, iz) * weights.sigma(iw, iy, iz) *
                    weights.tau(ix, iy, iz) * ctx.e(ctx.mul(awxy, zs[iz])));
        }
        acc.add(weights.theta(iw, ix, iy) * inner.value());
      }
    }
  }
  return finish(acc, work);
}

}  // namespace quadsum
