#include "quadsum/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "quadsum/error.hpp"

namespace quadsum {

double log_threshold(double p) { return std::sqrt(p) * std::log(p); }

namespace {

double product(const std::array<std::uint64_t, 4>& e) {
  return static_cast<double>(e[0]) * static_cast<double>(e[1]) * static_cast<double>(e[2]) *
         static_cast<double>(e[3]);
}

RegimeBound make(double lead, double branch, std::string regime) {
  return {lead + branch, std::move(regime), lead, branch};
}

}  // namespace

double weil_bound(double p, std::span<const std::uint64_t> exponents) {
  std::uint64_t m = 0;
  for (auto k : exponents) m = std::max(m, k);
  return static_cast<double>(m) * std::sqrt(p);
}

FlaggedBound ccp_bound(double p, const std::array<std::uint64_t, 4>& exps) {
  const double mx = static_cast<double>(*std::max_element(exps.begin(), exps.end()));
  const double q = product(exps) / mx;
  return {std::pow(q, 1.0 / 9.0) * std::pow(p, 8.0 / 9.0), q < p};
}

FlaggedBound cp_bound(double p, const std::array<std::uint64_t, 4>& exps) {
  const double q = product(exps);
  return {std::pow(q, 1.0 / 16.0) * std::pow(p, 7.0 / 8.0), q < p * p};
}

MacourtBound macourt_bound_for(double p, const GcdParams& params) {
  const double t = log_threshold(p);
  const double f = static_cast<double>(params.f);
  const double g = static_cast<double>(params.g);
  const double delta = static_cast<double>(params.delta);

  MacourtBound out;
  out.params = params;
  out.leading_term = p * std::pow(g, -1.0 / 8.0);
  if (g >= t) {
    out.regime = "g_large";
    out.branch_term = std::pow(p, 15.0 / 16.0) * std::pow(delta, 1.0 / 32.0);
  } else if (f >= t) {
    out.regime = "f_large";
    out.branch_term =
        std::pow(p, 31.0 / 32.0) * std::pow(delta, 1.0 / 32.0) * std::pow(g, -1.0 / 16.0);
  } else if (p / delta >= t) {
    out.regime = "pdelta_large";
    out.branch_term = p * std::pow(delta, 1.0 / 32.0) * std::pow(f * g, -1.0 / 16.0);
  } else {
    out.regime = "pdelta_small";
    out.branch_term =
        std::pow(p, 31.0 / 32.0) * std::pow(delta, 3.0 / 32.0) * std::pow(f * g, -1.0 / 16.0);
  }
  out.value = out.leading_term + out.branch_term;
  return out;
}

MacourtBound macourt_bound(std::uint64_t p, const std::array<std::uint64_t, 4>& exps,
                           RoleMode mode) {
  const auto packs = gcd_params(p, exps, mode);
  MacourtBound best;
  bool first = true;
  for (const auto& pack : packs) {
    auto candidate = macourt_bound_for(static_cast<double>(p), pack);
    if (first || candidate.value < best.value) {
      best = std::move(candidate);
      first = false;
    }
  }
  return best;
}

bool regime_condition_holds(double p, const MacourtBound& bound) {
  const auto& pr = bound.params;
  const double t = log_threshold(p);
  const double f = static_cast<double>(pr.f);
  const double g = static_cast<double>(pr.g);
  const double pd = p / static_cast<double>(pr.delta);
  if (!(pr.f >= pr.g && pr.g >= pr.h && f <= pd)) return false;
  if (bound.regime == "g_large") return g >= t;
  if (bound.regime == "f_large") return f >= t && t > g;
  if (bound.regime == "pdelta_large") return pd >= t && t > f;
  if (bound.regime == "pdelta_small") return pd < t;
  return false;
}

RegimeBound lemma_T_bound(double p, double w, double x, double y, double z) {
  if (!(w >= x && x >= y && y >= z && z >= 1)) {
    throw Error(Errc::ordering_violated, "lemma_T_bound needs W >= X >= Y >= Z >= 1");
  }
  const double t = log_threshold(p);
  const double lead = w * x * z * std::pow(y, 7.0 / 8.0);
  if (y >= t) {
    return make(lead, std::pow(w, 31.0 / 32.0) * x * y * z * std::pow(p, -1.0 / 32.0), "y_large");
  }
  if (x >= t) {
    return make(lead, std::pow(w, 31.0 / 32.0) * x * std::pow(y, 15.0 / 16.0) * z, "x_large");
  }
  if (w >= t) {
    return make(lead,
                std::pow(w, 31.0 / 32.0) * std::pow(x * y, 15.0 / 16.0) * z *
                    std::pow(p, 1.0 / 32.0),
                "w_large");
  }
  return make(lead,
              std::pow(w, 29.0 / 32.0) * std::pow(x * y, 15.0 / 16.0) * z *
                  std::pow(p, 1.0 / 16.0),
              "w_small");
}

double petshp_quadlinear_bound(double p, double w, double x, double y, double z) {
  return std::pow(p, 1.0 / 16.0) * std::pow(w, 15.0 / 16.0) * std::pow(x * y, 61.0 / 64.0) *
         std::pow(z, 31.0 / 32.0);
}

RegimeBound dx_bound(double p, double g) {
  if (g >= log_threshold(p)) return make(0.0, std::pow(g, 8.0) / p, "large");
  return make(0.0, std::pow(g, 6.0) * std::log(g), "small");
}

RegimeBound shifted_energy_bound(double p, double g) {
  if (g >= std::pow(p, 2.0 / 3.0)) {
    return make(0.0, std::sqrt(p) * std::pow(g, 1.5), "above_two_thirds");
  }
  if (g >= log_threshold(p)) return make(0.0, std::pow(g, 3.0) / std::sqrt(p), "large");
  return make(0.0, g * g * std::log(g), "small");
}

RegimeBound n_triples_bound(double p, double f, double g, double h) {
  if (g < h) throw Error(Errc::ordering_violated, "n_triples_bound needs G >= H");
  const double t = log_threshold(p);
  const double scale = f * f / std::sqrt(std::max(f, g));
  if (h >= t) return make(0.0, scale * g * g * h * h / std::sqrt(p), "h_large");
  if (g >= t) return make(0.0, scale * g * g * std::pow(h, 1.5) * std::pow(p, -0.25), "g_large");
  return make(0.0, scale * std::pow(g * h, 1.5), "g_small");
}

RegimeBound j_energy_bound(double p, double x, double y) {
  const double t = log_threshold(p);
  if (y >= t) return make(0.0, std::pow(x, 4.0) * std::pow(y, 4.0) / p, "y_large");
  if (x >= t) return make(0.0, std::pow(x, 4.0) * std::pow(y, 3.0) / std::sqrt(p), "x_large");
  return make(0.0, std::pow(x * y, 3.0), "x_small");
}

RegimeBound i_energy_bound(double p, double w, double z) {
  if (w >= log_threshold(p)) {
    return make(0.0, z * z * std::pow(w, 3.5) / std::sqrt(p), "w_large");
  }
  return make(0.0, z * z * std::pow(w, 2.5), "w_small");
}

const NamedBound& BoundReport::get(std::string_view name) const {
  for (const auto& b : bounds) {
    if (b.name == name) return b;
  }
  throw Error(Errc::invalid_argument, "no bound named " + std::string(name));
}

BoundReport compare_bounds(const FieldCtx& ctx, const SparsePoly& psi, CharacterIndex chi,
                           RoleMode mode, std::uint64_t exact_budget) {
  if (psi.size() != 4) throw Error(Errc::invalid_argument, "compare_bounds needs a quadrinomial");
  const double p = ctx.p();
  const double trivial = p - 1.0;
  const auto ev = psi.exponents();
  const std::array<std::uint64_t, 4> exps{ev[0], ev[1], ev[2], ev[3]};

  BoundReport report;
  const double weil = weil_bound(p, ev);
  report.bounds.push_back({"weil", weil, "", weil < trivial});
  const auto ccp = ccp_bound(p, exps);
  report.bounds.push_back({"ccp", ccp.value, "", ccp.nontrivial && ccp.value < trivial});
  const auto cp = cp_bound(p, exps);
  report.bounds.push_back({"cp", cp.value, "", cp.nontrivial && cp.value < trivial});
  const auto mac = macourt_bound(ctx.p(), exps, mode);
  report.bounds.push_back({"macourt", mac.value, mac.regime, mac.value < trivial});
  report.bounds.push_back({"trivial", trivial, "", false});
  report.params = mac.params;

  report.winner = "trivial";
  double best = trivial;
  for (const auto& b : report.bounds) {
    if (b.nontrivial && b.value < best) {
      best = b.value;
      report.winner = b.name;
    }
  }
  if (ctx.p() <= exact_budget) report.exact_magnitude = sum_exact(ctx, psi, chi).magnitude;
  return report;
}

}  // namespace quadsum
