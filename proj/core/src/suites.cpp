#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "quadsum/bounds.hpp"
#include "quadsum/charsum.hpp"
#include "quadsum/counting.hpp"
#include "quadsum/error.hpp"
#include "quadsum/rng.hpp"

namespace quadsum::harness::detail {

using boost::multiprecision::cpp_int;

cpp_int big(u128 v) {
  cpp_int out = static_cast<std::uint64_t>(v >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(v);
  return out;
}

u128 shifted_down_energy(const FieldCtx& ctx, const Subgroup& g);

namespace {

using nlohmann::ordered_json;

constexpr double kFloatSlack = 1e-12;
constexpr std::size_t kMaxListedFailures = 20;

double to_double(u128 v) { return static_cast<double>(v); }

// Integer counts go into JSON as decimal strings when they exceed 2^53.
ordered_json count_json(u128 v) {
  if (v < (u128{1} << 53)) return static_cast<std::uint64_t>(v);
  return to_string(v);
}

std::string join(std::span<const Residue> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

ResultRecord make_record(Suite suite, std::string quantity, std::uint64_t p) {
  ResultRecord r;
  r.suite = std::string(suite_name(suite));
  r.quantity = std::move(quantity);
  r.p = p;
  return r;
}

std::string cli_p(std::uint64_t p) { return "quadsum count --p " + std::to_string(p); }

// Runs `body`; budget overruns become skipped records, other errors fail.
template <class Body>
void guarded(ResultRecord& r, Body&& body) {
  try {
    body();
  } catch (const Error& e) {
    r.status = e.code() == Errc::budget_exceeded ? Status::skipped : Status::fail;
    r.reason = e.what();
  } catch (const std::exception& e) {
    r.status = Status::fail;
    r.reason = e.what();
  }
}

// Aggregates many exact checks of one kind into a single record.
struct Tally {
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  std::uint64_t skipped = 0;
  ordered_json failures = ordered_json::array();

  void check(bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
      ++failed;
      if (failures.size() < kMaxListedFailures) failures.push_back(what);
    }
  }

  // Evaluates `body` (returning bool); budget overruns count as skipped.
  template <class Body>
  void attempt(const std::string& what, Body&& body) {
    try {
      check(body(), what);
    } catch (const Error& e) {
      if (e.code() == Errc::budget_exceeded) {
        ++skipped;
      } else {
        check(false, what + ": " + e.what());
      }
    } catch (const std::exception& e) {
      check(false, what + ": " + e.what());
    }
  }

  ResultRecord record(Suite suite, std::string quantity, std::uint64_t p,
                      std::string rerun) const {
    auto r = make_record(suite, std::move(quantity), p);
    r.value = static_cast<double>(checked);
    r.rerun = std::move(rerun);
    r.detail["checked"] = checked;
    r.detail["failed"] = failed;
    r.detail["skipped"] = skipped;
    r.detail["failures"] = failures;
    if (checked == 0) {
      r.status = Status::skipped;
      r.reason = "no instance within budget";
    } else {
      r.status = failed == 0 ? Status::pass : Status::fail;
      if (failed) r.reason = std::to_string(failed) + " of " + std::to_string(checked) + " failed";
    }
    return r;
  }
};

std::vector<Subgroup> all_subgroups(const FieldCtx& ctx) {
  std::vector<Subgroup> out;
  for (auto d : divisors(ctx.group_order())) out.push_back(subgroup_of_order(ctx, d));
  return out;
}

std::vector<Residue> random_set(Rng& rng, std::uint64_t p, std::uint64_t max_size,
                                bool nonzero) {
  const std::uint64_t lo = nonzero ? 1 : 0;
  const std::uint64_t universe = p - lo;
  const std::uint64_t size = rng.between(1, std::min(max_size, universe));
  std::vector<Residue> pool(universe);
  std::iota(pool.begin(), pool.end(), static_cast<Residue>(lo));
  for (std::uint64_t i = 0; i < size; ++i) std::swap(pool[i], pool[i + rng.below(universe - i)]);
  pool.resize(size);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::uint64_t sq(std::uint64_t x) { return x * x; }

std::string orders_label(std::initializer_list<std::pair<char, std::uint64_t>> parts) {
  std::string out;
  for (const auto& [name, n] : parts) {
    if (!out.empty()) out += ',';
    out += name;
    out += '=';
    out += std::to_string(n);
  }
  return out;
}

bool same_distribution(const Distribution& a, const Distribution& b) {
  return a.counts == b.counts && a.total == b.total && a.zero_count == b.zero_count;
}

}  // namespace

// ---------------------------------------------------------------------------
// Per-instance suites: identity, weil, bounds.

std::vector<ResultRecord> run_instance(const SweepConfig& config, const FieldCtx& ctx,
                                       const InstanceTask& task) {
  std::vector<ResultRecord> out;
  const std::uint64_t p = ctx.p();
  const std::string poly = task.psi.to_string();
  const CharacterIndex chi{task.j};
  const std::string where = " --p " + std::to_string(p) + " --poly \"" + poly + "\" --chi " +
                            std::to_string(task.j);

  auto base = [&](Suite s, std::string quantity) {
    auto r = make_record(s, std::move(quantity), p);
    r.poly = poly;
    r.chi = task.j;
    r.detail["family"] = task.family;
    return r;
  };

  std::optional<SumValue> exact;
  std::string exact_error;
  if (p <= config.budgets.exact_prime) {
    try {
      exact = sum_exact(ctx, task.psi, chi);
    } catch (const std::exception& e) {
      exact_error = e.what();
    }
  } else {
    exact_error = "p exceeds budgets.exact_prime";
  }

  auto no_exact = [&](ResultRecord& r) {
    r.status = p <= config.budgets.exact_prime ? Status::fail : Status::skipped;
    r.reason = exact_error;
  };

  if (config.has(Suite::identity)) {
    auto r = base(Suite::identity, "decomposition");
    r.rerun = "quadsum sum --kind decomposed" + where;
    r.bound = 1e-6;
    if (!exact) {
      no_exact(r);
    } else {
      guarded(r, [&] {
        const auto dec = sum_decomposed(ctx, task.psi, chi, config.budgets.decomposed);
        const double rel = std::abs(dec.value - exact->value) / (exact->magnitude + 1.0);
        r.value = rel;
        r.status = rel < 1e-6 ? Status::pass : Status::fail;
        if (r.status == Status::fail) r.reason = "decomposed sum differs from direct sum";
        r.detail["exact"] = {exact->value.real(), exact->value.imag()};
        r.detail["decomposed"] = {dec.value.real(), dec.value.imag()};
        r.detail["terms"] = dec.term_count;
      });
    }
    out.push_back(std::move(r));
  }

  if (config.has(Suite::weil)) {
    auto r = base(Suite::weil, "weil");
    r.rerun = "quadsum sum --kind exact" + where;
    if (!exact) {
      no_exact(r);
    } else {
      const auto exps = task.psi.exponents();
      const double bound = weil_bound(static_cast<double>(p), exps);
      r.value = exact->magnitude;
      r.bound = bound;
      r.ratio = exact->magnitude / bound;
      r.status = exact->magnitude <= bound * (1.0 + kFloatSlack) ? Status::pass : Status::fail;
      if (r.status == Status::fail) {
        std::ostringstream os;
        os.precision(17);
        os << "|S| = " << exact->magnitude << " exceeds max(k) sqrt(p) = " << bound;
        r.reason = os.str();
      }
    }
    out.push_back(std::move(r));
  }

  if (config.has(Suite::bounds)) {
    auto r = base(Suite::bounds, "compare_bounds");
    r.rerun = "quadsum compare" + where + " --mode " + std::string(role_mode_name(config.mode));
    guarded(r, [&] {
      const auto report = compare_bounds(ctx, task.psi, chi, config.mode, 0);
      const auto ev = task.psi.exponents();
      const std::array<std::uint64_t, 4> exps{ev[0], ev[1], ev[2], ev[3]};
      const auto canonical = macourt_bound(p, exps, RoleMode::canonical);
      const auto best = macourt_bound(p, exps, RoleMode::best);
      const auto& chosen = config.mode == RoleMode::best ? best : canonical;
      const double pd = static_cast<double>(p);

      ordered_json checks;
      checks["regime_condition"] = regime_condition_holds(pd, chosen);
      checks["best_le_canonical"] = best.value <= canonical.value * (1.0 + kFloatSlack);
      if (exact) {
        checks["exact_le_weil"] =
            exact->magnitude <= report.get("weil").value * (1.0 + kFloatSlack);
        checks["exact_le_trivial"] = exact->magnitude <= (pd - 1.0) * (1.0 + kFloatSlack);
      }
      bool ok = true;
      for (const auto& [name, v] : checks.items()) ok = ok && v.get<bool>();

      ordered_json bounds = ordered_json::object();
      for (const auto& b : report.bounds) {
        bounds[b.name] = {{"value", b.value}, {"nontrivial", b.nontrivial}};
        if (!b.regime.empty()) bounds[b.name]["regime"] = b.regime;
      }
      const auto& pr = report.params;
      r.value = exact ? std::optional<double>(exact->magnitude) : std::nullopt;
      r.bound = chosen.value;
      if (exact) r.ratio = exact->magnitude / chosen.value;
      r.regime = chosen.regime;
      r.detail["winner"] = report.winner;
      r.detail["klmn"] = static_cast<double>(exps[0]) * static_cast<double>(exps[1]) *
                         static_cast<double>(exps[2]) * static_cast<double>(exps[3]);
      r.detail["bounds"] = bounds;
      r.detail["params"] = {{"alpha", pr.alpha}, {"beta", pr.beta}, {"gamma", pr.gamma},
                            {"delta", pr.delta}, {"f", pr.f},         {"g", pr.g},
                            {"h", pr.h},         {"role_perm", pr.role_perm}};
      r.detail["macourt_canonical"] = canonical.value;
      r.detail["macourt_best"] = best.value;
      r.detail["checks"] = checks;
      r.status = ok ? Status::pass : Status::fail;
      if (!ok) r.reason = "bound invariant violated: " + checks.dump();
    });
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bilinear sums against sqrt(p A B).

std::vector<ResultRecord> run_bilinear(const SweepConfig& config, const FieldCtx& ctx,
                                       std::uint64_t index) {
  const std::uint64_t p = ctx.p();
  const std::uint64_t seed = derive_seed(config.seed, {kSeedBilinear, p, index});
  auto r = make_record(Suite::bilinear, "bilinear", p);
  r.rerun = "quadsum sum --kind bilinear --p " + std::to_string(p) + " --seed " +
            std::to_string(seed);
  guarded(r, [&] {
    const auto inst = bilinear_instance(p, seed);
    const auto s = bilinear_sum(ctx, inst.xs, inst.ys, inst.x_weights, inst.y_weights);
    double a = 0.0, b = 0.0;
    for (auto w : inst.x_weights) a += std::norm(w);
    for (auto w : inst.y_weights) b += std::norm(w);
    const double bound = std::sqrt(static_cast<double>(p) * a * b);
    r.sets = orders_label({{'X', inst.xs.size()}, {'Y', inst.ys.size()}});
    r.card = inst.xs.size();
    r.value = s.magnitude;
    r.bound = bound;
    r.ratio = bound > 0 ? s.magnitude / bound : 0.0;
    r.detail["seed"] = seed;
    r.detail["A"] = a;
    r.detail["B"] = b;
    r.status = s.magnitude <= bound * (1.0 + kFloatSlack) + kFloatSlack ? Status::pass
                                                                        : Status::fail;
    if (r.status == Status::fail) r.reason = "|sum| exceeds sqrt(p A B)";
  });
  return {std::move(r)};
}

// ---------------------------------------------------------------------------
// Exact combinatorial identities and oracle agreement.

std::vector<ResultRecord> run_energy(const SweepConfig& config, const FieldCtx& ctx) {
  std::vector<ResultRecord> out;
  const std::uint64_t p = ctx.p();
  const std::uint64_t oracle = config.budgets.oracle;
  const auto groups = all_subgroups(ctx);
  Rng rng(derive_seed(config.seed, {kSeedEnergy, p}));
  const std::string agg_rerun = "quadsum verify --p " + std::to_string(p) +
                                " --suite energy --seed " + std::to_string(config.seed);

  // Subgroups really are the d-th roots of unity.
  {
    Tally t;
    if (groups.size() * p <= oracle) {
      for (const auto& g : groups) {
        std::vector<Residue> scan;
        for (Residue x = 1; x < p; ++x) {
          if (ctx.pow(x, g.order) == 1) scan.push_back(x);
        }
        t.check(scan == g.elements && g.elements.size() == g.order,
                "order " + std::to_string(g.order));
      }
    }
    out.push_back(t.record(Suite::energy, "subgroup_scan", p, agg_rerun));
  }

  // E^x(G) = |G|^3.
  for (const auto& g : groups) {
    const std::uint64_t d = g.order;
    auto r = make_record(Suite::energy, "energy_cube", p);
    r.sets = orders_label({{'G', d}});
    r.card = d;
    r.rerun = cli_p(p) + " --quantity energy --order " + std::to_string(d) + " --method both";
    guarded(r, [&] {
      const auto e = mult_energy(ctx, g.elements, g.elements, Method::optimized).count;
      bool ok = e == u128{d} * d * d;
      r.detail["optimized"] = count_json(e);
      if (sq(sq(d)) <= oracle) {
        const auto o = mult_energy(ctx, g.elements, g.elements, Method::oracle).count;
        r.detail["oracle"] = count_json(o);
        ok = ok && o == e;
      }
      r.value = to_double(e);
      r.bound = static_cast<double>(d) * static_cast<double>(d) * static_cast<double>(d);
      r.status = ok ? Status::pass : Status::fail;
      if (!ok) r.reason = "E^x(G) != |G|^3 or oracle disagreement";
    });
    out.push_back(std::move(r));
  }

  // mult_energy oracle vs optimized on subgroups, shifts and random sets.
  {
    Tally t;
    auto agree = [&](std::span<const Residue> u, std::span<const Residue> v,
                     const std::string& what) {
      if (sq(u.size()) * sq(v.size()) > oracle) return;
      t.attempt(what, [&] {
        return mult_energy(ctx, u, v, Method::oracle).count ==
               mult_energy(ctx, u, v, Method::optimized).count;
      });
    };
    for (const auto& g : groups) {
      agree(g.elements, g.elements, "G=" + std::to_string(g.order));
      const auto shifted = shifted_set(ctx, g.elements, 1);
      agree(shifted, shifted, "G+1, G=" + std::to_string(g.order));
    }
    for (int i = 0; i < 4; ++i) {
      const auto u = random_set(rng, p, 24, false);
      const auto v = random_set(rng, p, 24, false);
      agree(u, v, cli_p(p) + " --quantity energy --u \"" + join(u) + "\" --v \"" + join(v) +
                      "\" --method both");
    }
    out.push_back(t.record(Suite::energy, "mult_energy_agreement", p, agg_rerun));
  }

  // D_x per subgroup, with oracle agreement where the oracle is affordable.
  for (const auto& g : groups) {
    const std::uint64_t d = g.order;
    auto r = make_record(Suite::energy, "d_times", p);
    r.sets = orders_label({{'G', d}});
    r.card = d;
    r.rerun = cli_p(p) + " --quantity dtimes --order " + std::to_string(d) + " --method both";
    guarded(r, [&] {
      const auto e = d_times(ctx, g.elements, Method::optimized).count;
      r.value = to_double(e);
      r.detail["optimized"] = count_json(e);
      if (d <= kDTimesOracleMaxSet && sq(sq(d)) <= oracle) {
        const auto o = d_times(ctx, g.elements, Method::oracle).count;
        r.detail["oracle"] = count_json(o);
        r.detail["agree"] = o == e;
        r.status = o == e ? Status::pass : Status::fail;
        if (o != e) r.reason = "oracle and optimized D_x differ";
      } else {
        r.detail["agree"] = nullptr;
        r.status = Status::info;
        r.reason = "oracle outside budget";
      }
    });
    out.push_back(std::move(r));
  }

  // D_x agreement on random sets.
  {
    Tally t;
    for (int i = 0; i < 3; ++i) {
      const auto u = random_set(rng, p, 20, false);
      t.attempt(cli_p(p) + " --quantity dtimes --u \"" + join(u) + "\" --method both", [&] {
        return d_times(ctx, u, Method::oracle).count == d_times(ctx, u, Method::optimized).count;
      });
    }
    out.push_back(t.record(Suite::energy, "d_times_agreement", p, agg_rerun));
  }

  // n_triples oracle vs optimized on subgroup triples and random triples.
  {
    Tally t;
    std::uint64_t triples = 0;
    for (const auto& f : groups) {
      for (const auto& g : groups) {
        for (const auto& h : groups) {
          if (triples >= config.budgets.triples_per_prime) break;
          if (sq(f.order * g.order * h.order) > oracle) continue;
          ++triples;
          t.attempt(cli_p(p) + " --quantity ntriples --orders " + std::to_string(f.order) + "," +
                        std::to_string(g.order) + "," + std::to_string(h.order) +
                        " --method both",
                    [&] {
                      return n_triples(ctx, f.elements, g.elements, h.elements, Method::oracle)
                                 .count == n_triples(ctx, f.elements, g.elements, h.elements,
                                                     Method::optimized)
                                               .count;
                    });
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      const auto fs = random_set(rng, p, 8, true);
      const auto gs = random_set(rng, p, 8, false);
      const auto hs = random_set(rng, p, 8, false);
      t.attempt(cli_p(p) + " --quantity ntriples --u \"" + join(fs) + "\" --v \"" + join(gs) +
                    "\" --w \"" + join(hs) + "\" --method both",
                [&] {
                  return n_triples(ctx, fs, gs, hs, Method::oracle).count ==
                         n_triples(ctx, fs, gs, hs, Method::optimized).count;
                });
    }
    out.push_back(t.record(Suite::energy, "n_triples_agreement", p, agg_rerun));
  }

  // J and I distributions: oracle agreement and total mass.
  {
    Tally tj, ti;
    for (const auto& x : groups) {
      for (const auto& y : groups) {
        const std::uint64_t xn = x.order, yn = y.order;
        const std::string label = std::to_string(xn) + "," + std::to_string(yn);
        if (sq(xn) * sq(yn) <= oracle) {
          tj.attempt(cli_p(p) + " --quantity jdist --orders " + label + " --method both", [&] {
            const auto o = j_distribution(ctx, x.elements, y.elements, Method::oracle);
            const auto q = j_distribution(ctx, x.elements, y.elements, Method::optimized);
            return same_distribution(o, q) && q.total + q.zero_count == u128{sq(xn)} * sq(yn);
          });
        }
        if (sq(xn) * yn <= oracle) {
          ti.attempt(cli_p(p) + " --quantity idist --orders " + label + " --method both", [&] {
            const auto o = i_distribution(ctx, x.elements, y.elements, Method::oracle);
            const auto q = i_distribution(ctx, x.elements, y.elements, Method::optimized);
            return same_distribution(o, q) && q.total == u128{sq(xn)} * yn;
          });
        }
      }
    }
    out.push_back(tj.record(Suite::energy, "j_agreement", p, agg_rerun));
    out.push_back(ti.record(Suite::energy, "i_agreement", p, agg_rerun));
  }

  // sum_lambda I(lambda)^2 = N(Z, W, W).
  {
    Tally t;
    for (const auto& w : groups) {
      for (const auto& z : groups) {
        if (z.order * sq(w.order) > config.budgets.n_triples) continue;
        t.attempt(cli_p(p) + " --quantity idist --orders " + std::to_string(w.order) + "," +
                      std::to_string(z.order),
                  [&] {
                    const auto dist = i_distribution(ctx, w.elements, z.elements);
                    const auto n = n_triples(ctx, z.elements, w.elements, w.elements).count;
                    return dist.sum_of_squares() == n;
                  });
      }
    }
    out.push_back(t.record(Suite::energy, "i_square_identity", p, agg_rerun));
  }

  // |G_a G_b G_c| = lcm(a, b, c).
  {
    Tally t;
    std::uint64_t triples = 0;
    for (std::size_t a = 0; a < groups.size(); ++a) {
      for (std::size_t b = a; b < groups.size(); ++b) {
        for (std::size_t c = b; c < groups.size(); ++c) {
          if (triples++ >= config.budgets.triples_per_prime) break;
          const std::array<Subgroup, 3> parts{groups[a], groups[b], groups[c]};
          const std::uint64_t l = lcm(lcm(parts[0].order, parts[1].order), parts[2].order);
          t.attempt("orders " + std::to_string(parts[0].order) + "," +
                        std::to_string(parts[1].order) + "," + std::to_string(parts[2].order),
                    [&] {
                      const auto s = product_set(ctx, parts);
                      return s.order == l && s.elements.size() == l;
                    });
        }
      }
    }
    out.push_back(t.record(Suite::energy, "product_set", p, agg_rerun));
  }

  // x -> x^n on G_d: image G_{d / gcd(d, n)}, each value hit gcd(d, n) times.
  {
    Tally t;
    for (const auto& g : groups) {
      for (std::uint64_t n = 1; n <= 50; ++n) {
        t.attempt("order " + std::to_string(g.order) + ", n = " + std::to_string(n), [&] {
          const auto img = power_image(ctx, g, n);
          const std::uint64_t m = gcd(g.order, gcd(n, ctx.group_order()));
          // gcd(alpha, n) = gcd(alpha, delta) with delta = gcd(n, p - 1).
          return gcd(g.order, n) == m && img.multiplicity == m && img.source_size == g.order &&
                 img.image == subgroup_of_order(ctx, g.order / m).elements;
        });
      }
    }
    out.push_back(t.record(Suite::energy, "power_image", p, agg_rerun));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cauchy step for N(F, G, H).

namespace {

// Profiles r_{F,G} for one F and every subgroup G, or nullopt when over
// budget.
std::vector<std::optional<std::vector<std::uint64_t>>> profiles_for(
    const FieldCtx& ctx, const Subgroup& f, const std::vector<Subgroup>& groups,
    std::uint64_t budget) {
  std::vector<std::optional<std::vector<std::uint64_t>>> out(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (f.order * sq(groups[i].order) > budget) continue;
    out[i] = scaled_difference_profile(ctx, f.elements, groups[i].elements);
  }
  return out;
}

u128 dot(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  u128 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += u128{a[i]} * b[i];
  return s;
}

}  // namespace

u128 shifted_down_energy(const FieldCtx& ctx, const Subgroup& g) {
  const auto s = shifted_set(ctx, g.elements, ctx.p() - 1);
  return mult_energy(ctx, s, s).count;
}

std::vector<ResultRecord> run_cauchy(const SweepConfig& config, const FieldCtx& ctx) {
  std::vector<ResultRecord> out;
  const std::uint64_t p = ctx.p();
  const auto groups = all_subgroups(ctx);

  std::vector<std::optional<u128>> energy(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    try {
      energy[i] = shifted_down_energy(ctx, groups[i]);
    } catch (const Error& e) {
      if (e.code() != Errc::budget_exceeded) throw;
    }
  }

  std::uint64_t triples = 0;
  for (const auto& f : groups) {
    if (triples >= config.budgets.triples_per_prime) break;
    const auto profiles = profiles_for(ctx, f, groups, config.budgets.n_triples);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      for (std::size_t hi = 0; hi <= gi; ++hi) {
        if (triples >= config.budgets.triples_per_prime) break;
        if (!profiles[gi] || !profiles[hi] || !energy[gi] || !energy[hi]) continue;
        ++triples;
        const auto& g = groups[gi];
        const auto& h = groups[hi];
        const auto n = dot(*profiles[gi], *profiles[hi]);
        const auto cc = cauchy_check(ctx, f, g, h, n, *energy[gi], *energy[hi]);

        const double lead = std::pow(static_cast<double>(f.order), 4) *
                            std::pow(static_cast<double>(g.order), 2) *
                            std::pow(static_cast<double>(h.order), 2);
        const double nd = to_double(n);
        const double s_order = static_cast<double>(cc.s_order);
        auto base = [&](std::string quantity) {
          auto r = make_record(Suite::cauchy, std::move(quantity), p);
          r.sets = orders_label({{'F', f.order}, {'G', g.order}, {'H', h.order}});
          r.card = g.order;
          r.rerun = cli_p(p) + " --quantity cauchy --orders " + std::to_string(f.order) + "," +
                    std::to_string(g.order) + "," + std::to_string(h.order);
          r.detail["N"] = count_json(n);
          r.detail["S"] = cc.s_order;
          return r;
        };
        auto settle = [](ResultRecord& r, bool ok, const char* why) {
          r.status = ok ? Status::pass : Status::fail;
          if (!ok) r.reason = why;
        };
        {
          auto r = base("cauchy_step");
          r.value = nd * nd;
          r.bound = lead / s_order * std::sqrt(to_double(cc.energy_g) * to_double(cc.energy_h));
          r.ratio = *r.value / *r.bound;
          r.detail["E_G_minus_1"] = count_json(cc.energy_g);
          r.detail["E_H_minus_1"] = count_json(cc.energy_h);
          settle(r, cc.stated_step, "N^2 exceeds (F^4 G^2 H^2 / |S|) sqrt(E(G-1) E(H-1))");
          out.push_back(std::move(r));
        }
        {
          auto r = base("cauchy_corrected");
          r.value = nd * nd;
          r.bound = lead / s_order * std::stod(cc.sum_c2);
          r.ratio = *r.value / *r.bound;
          r.detail["sum_c2"] = cc.sum_c2;
          settle(r, cc.corrected_step, "N^2 exceeds (F^4 G^2 H^2 / |S|) sum c(lambda)^2");
          out.push_back(std::move(r));
        }
        {
          auto r = base("n_triples_identity");
          r.value = nd;
          r.bound = std::pow(static_cast<double>(f.order), 2) * static_cast<double>(g.order) *
                    static_cast<double>(h.order) * std::stod(cc.sum_c) / s_order;
          r.detail["sum_c"] = cc.sum_c;
          settle(r, cc.identity, "N |S| != F^2 G H sum c(lambda)");
          out.push_back(std::move(r));
        }
      }
    }
  }
  if (out.empty()) {
    auto r = make_record(Suite::cauchy, "cauchy_step", p);
    r.status = Status::skipped;
    r.reason = "no subgroup triple within budget";
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Observed value over the constant-1 bound expression.

std::vector<ResultRecord> run_ratio(const SweepConfig& config, const FieldCtx& ctx) {
  std::vector<ResultRecord> out;
  const std::uint64_t p = ctx.p();
  const double pd = static_cast<double>(p);
  const auto groups = all_subgroups(ctx);
  Rng rng(derive_seed(config.seed, {kSeedRatio, p}));

  auto finish = [&](ResultRecord& r, double value, const RegimeBound& b) {
    r.value = value;
    r.bound = b.value;
    r.regime = b.regime;
    r.ratio = value / b.value;
    r.status = *r.ratio <= config.ratio_ceiling ? Status::pass : Status::fail;
    if (r.status == Status::fail) r.reason = "ratio above ceiling";
  };
  auto skip_unit = [](ResultRecord& r) {
    r.status = Status::skipped;
    r.reason = "|G| = 1: ln|G| = 0 makes the bound vanish";
  };

  for (const auto& g : groups) {
    const std::uint64_t d = g.order;
    const double dd = static_cast<double>(d);
    {
      auto r = make_record(Suite::ratio, "dx_ratio", p);
      r.sets = orders_label({{'G', d}});
      r.card = d;
      r.rerun = cli_p(p) + " --quantity dtimes --order " + std::to_string(d);
      if (d == 1) {
        skip_unit(r);
      } else {
        guarded(r, [&] { finish(r, to_double(d_times(ctx, g.elements).count), dx_bound(pd, dd)); });
      }
      out.push_back(std::move(r));
    }
    for (std::uint64_t k = 0; k < config.shift_samples; ++k) {
      const Residue lambda = k == 0 ? 1 : static_cast<Residue>(rng.between(1, p - 1));
      auto r = make_record(Suite::ratio, "shifted_energy_ratio", p);
      r.sets = orders_label({{'G', d}});
      r.card = d;
      r.detail["lambda"] = lambda;
      r.rerun = cli_p(p) + " --quantity shifted --order " + std::to_string(d) + " --lambda " +
                std::to_string(lambda);
      if (d == 1) {
        skip_unit(r);
      } else {
        guarded(r, [&] {
          const double e = to_double(shifted_energy(ctx, g, lambda).count);
          finish(r, std::abs(e - dd * dd * dd * dd / pd), shifted_energy_bound(pd, dd));
        });
      }
      out.push_back(std::move(r));
    }
  }

  std::uint64_t triples = 0;
  for (const auto& f : groups) {
    if (triples >= config.budgets.triples_per_prime) break;
    const auto profiles = profiles_for(ctx, f, groups, config.budgets.n_triples);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      for (std::size_t hi = 0; hi <= gi; ++hi) {
        if (triples >= config.budgets.triples_per_prime) break;
        if (!profiles[gi] || !profiles[hi]) continue;
        ++triples;
        const auto& g = groups[gi];
        const auto& h = groups[hi];
        auto r = make_record(Suite::ratio, "n_triples_ratio", p);
        r.sets = orders_label({{'F', f.order}, {'G', g.order}, {'H', h.order}});
        r.card = g.order;
        r.rerun = cli_p(p) + " --quantity ntriples --orders " + std::to_string(f.order) + "," +
                  std::to_string(g.order) + "," + std::to_string(h.order);
        guarded(r, [&] {
          finish(r, to_double(dot(*profiles[gi], *profiles[hi])),
                 n_triples_bound(pd, static_cast<double>(f.order), static_cast<double>(g.order),
                                 static_cast<double>(h.order)));
        });
        out.push_back(std::move(r));
      }
    }
  }

  // Second moments of J and I: recorded for inspection, not gated.
  for (std::size_t xi = 0; xi < groups.size(); ++xi) {
    for (std::size_t yi = 0; yi <= xi; ++yi) {
      const auto& x = groups[xi];
      const auto& y = groups[yi];
      auto r = make_record(Suite::ratio, "j_energy_ratio", p);
      r.sets = orders_label({{'X', x.order}, {'Y', y.order}});
      r.card = x.order;
      r.rerun = cli_p(p) + " --quantity jdist --orders " + std::to_string(x.order) + "," +
                std::to_string(y.order);
      guarded(r, [&] {
        const auto dist = j_distribution(ctx, x.elements, y.elements);
        const auto b = j_energy_bound(pd, static_cast<double>(x.order),
                                      static_cast<double>(y.order));
        r.value = to_double(dist.sum_of_squares());
        r.bound = b.value;
        r.regime = b.regime;
        r.ratio = *r.value / b.value;
        r.status = Status::info;
      });
      out.push_back(std::move(r));
    }
  }
  for (const auto& w : groups) {
    for (const auto& z : groups) {
      auto r = make_record(Suite::ratio, "i_energy_ratio", p);
      r.sets = orders_label({{'W', w.order}, {'Z', z.order}});
      r.card = w.order;
      r.rerun = cli_p(p) + " --quantity idist --orders " + std::to_string(w.order) + "," +
                std::to_string(z.order);
      guarded(r, [&] {
        const auto dist = i_distribution(ctx, w.elements, z.elements);
        const auto b = i_energy_bound(pd, static_cast<double>(w.order),
                                      static_cast<double>(z.order));
        r.value = to_double(dist.sum_of_squares());
        r.bound = b.value;
        r.regime = b.regime;
        r.ratio = *r.value / b.value;
        r.status = Status::info;
      });
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace quadsum::harness::detail

namespace quadsum::harness {

CauchyCheck cauchy_check(const FieldCtx& ctx, const Subgroup& f, const Subgroup& g,
                         const Subgroup& h, u128 n, u128 energy_g, u128 energy_h) {
  using boost::multiprecision::cpp_int;
  const std::uint64_t p = ctx.p();
  CauchyCheck out;
  out.n = n;
  out.energy_g = energy_g;
  out.energy_h = energy_h;
  out.s_order = lcm(lcm(f.order, g.order), h.order);
  const auto s_group = subgroup_of_order(ctx, out.s_order);

  // (1, 1) counts for every lambda; a pair with g != 1 and h != 1 fixes
  // lambda = (h - 1) / (g - 1); the remaining pairs never count.
  std::vector<char> in_s(p, 0);
  for (auto x : s_group.elements) in_s[x] = 1;
  std::vector<std::uint32_t> c(p, 0);
  std::vector<Residue> touched;
  for (auto gx : g.elements) {
    if (gx == 1) continue;
    const Residue inv = ctx.inv(ctx.sub(gx, 1));
    for (auto hx : h.elements) {
      if (hx == 1) continue;
      const Residue lambda = ctx.mul(ctx.sub(hx, 1), inv);
      if (in_s[lambda] && c[lambda]++ == 0) touched.push_back(lambda);
    }
  }
  cpp_int sum_c = out.s_order, sum_c2 = out.s_order;
  for (auto lambda : touched) {
    const cpp_int k = c[lambda];
    sum_c += k;
    sum_c2 += (k + 1) * (k + 1) - 1;
  }
  out.sum_c = sum_c.str();
  out.sum_c2 = sum_c2.str();

  const cpp_int nn = detail::big(n);
  const cpp_int s = out.s_order;
  const cpp_int lead = cpp_int(f.order) * f.order * f.order * f.order * g.order * g.order *
                       h.order * h.order;
  const cpp_int lhs = nn * nn * s;
  out.stated_step = lhs * lhs <= lead * lead * detail::big(energy_g) * detail::big(energy_h);
  out.corrected_step = lhs <= lead * sum_c2;
  out.identity = nn * s == cpp_int(f.order) * f.order * g.order * h.order * sum_c;
  return out;
}

CauchyCheck cauchy_check(const FieldCtx& ctx, const Subgroup& f, const Subgroup& g,
                         const Subgroup& h) {
  const auto n = n_triples(ctx, f.elements, g.elements, h.elements).count;
  return cauchy_check(ctx, f, g, h, n, detail::shifted_down_energy(ctx, g),
                      detail::shifted_down_energy(ctx, h));
}

}  // namespace quadsum::harness
