#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "quadsum/bounds.hpp"
#include "quadsum/charsum.hpp"
#include "quadsum/counting.hpp"
#include "quadsum/error.hpp"
#include "quadsum/harness.hpp"

namespace quadsum::cli {

namespace {

using nlohmann::ordered_json;
namespace h = quadsum::harness;

struct Options {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> primes;
  std::string poly;
  std::uint64_t chi = 0;
  std::string mode = "canonical";
  std::string out;
  std::string config;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string format = "jsonl";
  std::vector<std::string> suites;
  std::string baseline_in, baseline_out;
  std::string kind;
  std::string quantity;
  std::string method = "optimized";
  std::string u, v, w;
  std::uint64_t order = 0;
  std::string orders;
  std::uint64_t lambda = 1;
  std::uint64_t budget = kDecomposedBudget;
  std::string lemma_t;
  std::string in;
};

ordered_json count_json(u128 v) {
  if (v < (u128{1} << 53)) return static_cast<std::uint64_t>(v);
  return to_string(v);
}

ordered_json complex_json(std::complex<double> z) { return {z.real(), z.imag()}; }

std::vector<std::uint64_t> parse_list(const std::string& text, const char* flag) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw Error(Errc::invalid_argument,
                  std::string(flag) + ": '" + item + "' is not a non-negative integer");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(Errc::invalid_argument, std::string(flag) + ": empty list");
  return out;
}

std::vector<Residue> parse_set(const FieldCtx& ctx, const std::string& text, const char* flag,
                               bool nonzero) {
  std::vector<Residue> out;
  for (auto v : parse_list(text, flag)) {
    if (v >= ctx.p() || (nonzero && v == 0)) {
      throw Error(Errc::invalid_argument, std::string(flag) + ": " + std::to_string(v) +
                                              " is not a residue in [" + (nonzero ? "1" : "0") +
                                              ", p)");
    }
    out.push_back(static_cast<Residue>(v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw Error(Errc::io_failure, "cannot open " + path + " for writing");
      stream_ = &file_;
      path_ = path;
    }
  }
  std::ostream& stream() { return *stream_; }
  void close() {
    stream_->flush();
    if (!*stream_) throw Error(Errc::io_failure, "write failed for " + path_);
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
  std::string path_ = "<stdout>";
};

void emit(const Options& o, std::ostream& out, const ordered_json& j) {
  Output sink(o.out, out);
  sink.stream() << j.dump() << '\n';
  sink.close();
}

FieldCtx field(const Options& o) {
  if (o.p == 0) throw Error(Errc::invalid_argument, "--p is required");
  return FieldCtx::make(o.p);
}

SparsePoly polynomial(const Options& o, const FieldCtx& ctx) {
  if (o.poly.empty()) throw Error(Errc::invalid_argument, "--poly is required");
  return SparsePoly::parse(ctx.p(), o.poly);
}

// ---------------------------------------------------------------------------

int cmd_sum(const Options& o, std::ostream& out) {
  const auto ctx = field(o);
  ordered_json j;
  j["p"] = ctx.p();
  j["kind"] = o.kind;
  if (o.kind == "bilinear") {
    const auto inst = h::bilinear_instance(ctx.p(), o.seed);
    const auto s = bilinear_sum(ctx, inst.xs, inst.ys, inst.x_weights, inst.y_weights);
    double a = 0, b = 0;
    for (auto x : inst.x_weights) a += std::norm(x);
    for (auto x : inst.y_weights) b += std::norm(x);
    const double bound = std::sqrt(static_cast<double>(ctx.p()) * a * b);
    const bool ok = s.magnitude <= bound * (1 + 1e-12) + 1e-12;
    j["seed"] = o.seed;
    j["X"] = inst.xs.size();
    j["Y"] = inst.ys.size();
    j["value"] = complex_json(s.value);
    j["magnitude"] = s.magnitude;
    j["bound"] = bound;
    j["pass"] = ok;
    emit(o, out, j);
    return ok ? kOk : kVerificationFailed;
  }

  const auto psi = polynomial(o, ctx);
  const CharacterIndex chi{o.chi};
  const auto exact = sum_exact(ctx, psi, chi);
  j["poly"] = psi.to_string();
  j["chi"] = o.chi;
  j["value"] = complex_json(exact.value);
  j["magnitude"] = exact.magnitude;
  const double weil = weil_bound(ctx.p(), psi.exponents());
  j["weil_bound"] = weil;
  if (o.kind == "exact") {
    emit(o, out, j);
    return kOk;
  }
  if (o.kind != "decomposed") {
    throw Error(Errc::unknown_kind, "--kind must be exact, decomposed or bilinear");
  }
  const auto dec = sum_decomposed(ctx, psi, chi, o.budget);
  const double rel = std::abs(dec.value - exact.value) / (exact.magnitude + 1.0);
  j["decomposed"] = complex_json(dec.value);
  j["terms"] = dec.term_count;
  j["relative_difference"] = rel;
  j["pass"] = rel < 1e-6;
  emit(o, out, j);
  return rel < 1e-6 ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------

std::vector<Subgroup> subgroups_from(const FieldCtx& ctx, const std::string& orders,
                                     std::size_t expected) {
  const auto ds = parse_list(orders, "--orders");
  if (ds.size() != expected) {
    throw Error(Errc::invalid_argument,
                "--orders expects " + std::to_string(expected) + " subgroup orders");
  }
  std::vector<Subgroup> out;
  for (auto d : ds) out.push_back(subgroup_of_order(ctx, d));
  return out;
}

int cmd_count(const Options& o, std::ostream& out) {
  const auto ctx = field(o);
  const bool want_oracle = o.method == "oracle" || o.method == "both";
  const bool want_fast = o.method == "optimized" || o.method == "both";
  if (!want_oracle && !want_fast) {
    throw Error(Errc::invalid_argument, "--method must be oracle, optimized or both");
  }
  ordered_json j;
  j["p"] = ctx.p();
  j["quantity"] = o.quantity;
  bool agree = true;

  // Runs `fn(method)` for the requested methods and records the counts.
  auto counted = [&](auto fn) {
    std::optional<u128> a, b;
    if (want_fast) j["optimized"] = count_json(*(a = fn(Method::optimized)));
    if (want_oracle) j["oracle"] = count_json(*(b = fn(Method::oracle)));
    if (a && b) {
      agree = *a == *b;
      j["agree"] = agree;
    }
    return a ? *a : *b;
  };
  auto one_set = [&](const char* flag, const std::string& text, bool nonzero) {
    if (!text.empty()) return parse_set(ctx, text, flag, nonzero);
    if (o.order == 0) throw Error(Errc::invalid_argument, "give --order or an explicit set");
    return subgroup_of_order(ctx, o.order).elements;
  };

  if (o.quantity == "energy") {
    const auto us = one_set("--u", o.u, false);
    const auto vs = o.v.empty() ? us : parse_set(ctx, o.v, "--v", false);
    j["sizes"] = {us.size(), vs.size()};
    const auto e = counted([&](Method m) { return mult_energy(ctx, us, vs, m).count; });
    if (o.u.empty()) {
      const u128 cube = u128{o.order} * o.order * o.order;
      j["expected"] = count_json(cube);
      agree = agree && e == cube;
    }
  } else if (o.quantity == "shifted") {
    if (o.order == 0) throw Error(Errc::invalid_argument, "--order is required");
    const auto g = subgroup_of_order(ctx, o.order);
    const auto e = counted([&](Method m) {
      return shifted_energy(ctx, g, static_cast<Residue>(o.lambda % ctx.p()), m).count;
    });
    const double d = static_cast<double>(o.order);
    const auto b = shifted_energy_bound(ctx.p(), d);
    const double dev = std::abs(static_cast<double>(e) - d * d * d * d / ctx.p());
    j["lambda"] = o.lambda;
    j["deviation"] = dev;
    j["bound"] = b.value;
    j["regime"] = b.regime;
    j["ratio"] = dev / b.value;
  } else if (o.quantity == "dtimes") {
    const auto us = one_set("--u", o.u, false);
    j["size"] = us.size();
    const auto e = counted([&](Method m) { return d_times(ctx, us, m).count; });
    if (us.size() > 1) {
      const auto b = dx_bound(ctx.p(), static_cast<double>(us.size()));
      j["bound"] = b.value;
      j["regime"] = b.regime;
      j["ratio"] = static_cast<double>(e) / b.value;
    }
  } else if (o.quantity == "ntriples") {
    std::vector<Residue> fs, gs, hs;
    if (!o.orders.empty()) {
      const auto sg = subgroups_from(ctx, o.orders, 3);
      fs = sg[0].elements, gs = sg[1].elements, hs = sg[2].elements;
    } else {
      fs = parse_set(ctx, o.u, "--u", true);
      gs = parse_set(ctx, o.v, "--v", false);
      hs = parse_set(ctx, o.w, "--w", false);
    }
    j["sizes"] = {fs.size(), gs.size(), hs.size()};
    const auto n = counted([&](Method m) { return n_triples(ctx, fs, gs, hs, m).count; });
    if (gs.size() >= hs.size()) {
      const auto b = n_triples_bound(ctx.p(), static_cast<double>(fs.size()),
                                     static_cast<double>(gs.size()),
                                     static_cast<double>(hs.size()));
      j["bound"] = b.value;
      j["regime"] = b.regime;
      j["ratio"] = static_cast<double>(n) / b.value;
    }
  } else if (o.quantity == "jdist" || o.quantity == "idist") {
    std::vector<Residue> xs, ys;
    if (!o.orders.empty()) {
      const auto sg = subgroups_from(ctx, o.orders, 2);
      xs = sg[0].elements, ys = sg[1].elements;
    } else {
      xs = parse_set(ctx, o.u, "--u", false);
      ys = parse_set(ctx, o.v, "--v", false);
    }
    const bool is_j = o.quantity == "jdist";
    auto dist = [&](Method m) {
      return is_j ? j_distribution(ctx, xs, ys, m) : i_distribution(ctx, xs, ys, m);
    };
    std::optional<Distribution> fast, slow;
    if (want_fast) fast = dist(Method::optimized);
    if (want_oracle) slow = dist(Method::oracle);
    const Distribution& d = fast ? *fast : *slow;
    if (fast && slow) {
      agree = fast->counts == slow->counts && fast->total == slow->total &&
              fast->zero_count == slow->zero_count;
      j["agree"] = agree;
    }
    ordered_json entries = ordered_json::object();
    for (const auto& [r, c] : d.nonzero_entries()) entries[std::to_string(r)] = count_json(c);
    j["sizes"] = {xs.size(), ys.size()};
    j["counts"] = entries;
    j["total"] = count_json(d.total);
    j["zero_count"] = count_json(d.zero_count);
    j["sum_of_squares"] = count_json(d.sum_of_squares());
  } else if (o.quantity == "cauchy") {
    const auto sg = subgroups_from(ctx, o.orders, 3);
    const auto c = h::cauchy_check(ctx, sg[0], sg[1], sg[2]);
    j["orders"] = {sg[0].order, sg[1].order, sg[2].order};
    j["N"] = count_json(c.n);
    j["S"] = c.s_order;
    j["E_G_minus_1"] = count_json(c.energy_g);
    j["E_H_minus_1"] = count_json(c.energy_h);
    j["sum_c"] = c.sum_c;
    j["sum_c2"] = c.sum_c2;
    j["stated_step"] = c.stated_step;
    j["corrected_step"] = c.corrected_step;
    j["identity"] = c.identity;
    agree = c.stated_step && c.corrected_step && c.identity;
  } else {
    throw Error(Errc::unknown_kind,
                "--quantity must be energy, shifted, dtimes, ntriples, jdist, idist or cauchy");
  }
  emit(o, out, j);
  return agree ? kOk : kVerificationFailed;
}

// ---------------------------------------------------------------------------

ordered_json macourt_json(const MacourtBound& m) {
  const auto& p = m.params;
  return {{"value", m.value},
          {"regime", m.regime},
          {"leading_term", m.leading_term},
          {"branch_term", m.branch_term},
          {"params",
           {{"alpha", p.alpha},
            {"beta", p.beta},
            {"gamma", p.gamma},
            {"delta", p.delta},
            {"f", p.f},
            {"g", p.g},
            {"h", p.h},
            {"role_perm", p.role_perm},
            {"exponents", p.exponents}}}};
}

int cmd_bounds(const Options& o, std::ostream& out, bool with_exact) {
  const auto ctx = field(o);
  ordered_json j;
  j["p"] = ctx.p();
  j["threshold"] = log_threshold(ctx.p());
  if (!o.lemma_t.empty()) {
    const auto s = parse_list(o.lemma_t, "--lemma-t");
    if (s.size() != 4) throw Error(Errc::invalid_argument, "--lemma-t expects W,X,Y,Z");
    const double pd = ctx.p();
    const auto t = lemma_T_bound(pd, s[0], s[1], s[2], s[3]);
    j["lemma_t"] = {{"value", t.value},
                    {"regime", t.regime},
                    {"leading_term", t.leading_term},
                    {"branch_term", t.branch_term}};
    j["petshp"] = petshp_quadlinear_bound(pd, s[0], s[1], s[2], s[3]);
    if (o.poly.empty()) {
      emit(o, out, j);
      return kOk;
    }
  }
  const auto psi = polynomial(o, ctx);
  if (psi.size() != 4) throw Error(Errc::invalid_argument, "--poly must have four terms");
  const auto mode = parse_role_mode(o.mode);
  const auto report =
      compare_bounds(ctx, psi, CharacterIndex{o.chi}, mode, with_exact ? kExactSumMaxPrime : 0);
  const auto ev = psi.exponents();
  const std::array<std::uint64_t, 4> exps{ev[0], ev[1], ev[2], ev[3]};
  j["poly"] = psi.to_string();
  j["chi"] = o.chi;
  j["mode"] = o.mode;
  ordered_json bounds = ordered_json::object();
  for (const auto& b : report.bounds) {
    bounds[b.name] = {{"value", b.value}, {"nontrivial", b.nontrivial}};
    if (!b.regime.empty()) bounds[b.name]["regime"] = b.regime;
  }
  j["bounds"] = bounds;
  j["winner"] = report.winner;
  j["macourt"] = macourt_json(macourt_bound(ctx.p(), exps, mode));
  if (!with_exact) {
    ordered_json packs = ordered_json::array();
    for (const auto& pack : gcd_params(ctx.p(), exps, RoleMode::best)) {
      packs.push_back(macourt_json(macourt_bound_for(ctx.p(), pack)));
    }
    j["macourt_packs"] = packs;
  }
  if (report.exact_magnitude) {
    j["exact"] = *report.exact_magnitude;
    ordered_json ratios = ordered_json::object();
    for (const auto& b : report.bounds) ratios[b.name] = *report.exact_magnitude / b.value;
    j["ratios"] = ratios;
  }
  emit(o, out, j);
  return kOk;
}

// ---------------------------------------------------------------------------

h::SweepConfig batch_config(const Options& o, const CLI::App& sub) {
  auto c = o.config.empty() ? h::default_config() : h::load_config(o.config);
  if (sub.count("--seed")) c.seed = o.seed;
  if (sub.count("--workers")) c.workers = o.workers;
  if (sub.count("--mode")) c.mode = parse_role_mode(o.mode);
  if (sub.count("--p")) c.primes = o.primes;
  if (sub.count("--suite")) {
    c.suites.clear();
    for (const auto& s : o.suites) c.suites.push_back(h::parse_suite(s));
  }
  if (!o.baseline_in.empty()) c.baseline_in = o.baseline_in;
  if (!o.baseline_out.empty()) c.baseline_out = o.baseline_out;
  h::validate(c);
  return c;
}

int cmd_verify(const Options& o, const CLI::App& sub, std::ostream& out) {
  const auto c = batch_config(o, sub);
  std::optional<std::filesystem::path> path;
  if (!o.out.empty()) path = o.out;
  return h::run_verify(c, path, out).exit_code();
}

int cmd_sweep(const Options& o, const CLI::App& sub, std::ostream& out) {
  const auto c = batch_config(o, sub);
  const auto report = h::run_sweep(c, o.out, h::parse_format(o.format));
  h::write_summary(report, out);
  return report.exit_code();
}

int cmd_plotdata(const Options& o, std::ostream& out) {
  const auto kind = h::parse_plot_kind(o.kind);
  const auto dataset = h::read_dataset(o.in);
  Output sink(o.out, out);
  h::emit_plot_data(dataset, kind, sink.stream());
  sink.close();
  return kOk;
}

int exit_code_for(Errc code) {
  return code == Errc::io_failure ? kIoError : kConfigError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Quadrinomial character sums over prime fields: exact evaluation, counting "
               "and bound comparison"};
  app.name("quadsum");
  app.require_subcommand(1);

  auto add_field = [&](CLI::App* s) {
    s->add_option("--p", o.p, "Prime modulus")->required();
  };
  auto add_poly = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--poly", o.poly, "Quadrinomial as \"a,k;b,l;c,m;d,n\"");
    if (required) opt->required();
    s->add_option("--chi", o.chi, "Character index j (0 = trivial)");
  };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", o.out, "Output file (default stdout)"); };

  auto* sum = app.add_subcommand("sum", "Evaluate a character sum");
  add_field(sum);
  add_poly(sum, false);
  sum->add_option("--kind", o.kind, "exact | decomposed | bilinear")->default_val("exact");
  sum->add_option("--seed", o.seed, "Instance seed for --kind bilinear");
  sum->add_option("--budget", o.budget, "Step budget for --kind decomposed");
  add_out(sum);

  auto* count = app.add_subcommand("count", "Exact additive-multiplicative counts");
  add_field(count);
  count->add_option("--quantity", o.quantity,
                    "energy | shifted | dtimes | ntriples | jdist | idist | cauchy")
      ->required();
  count->add_option("--u", o.u, "Explicit set, comma separated");
  count->add_option("--v", o.v, "Second explicit set");
  count->add_option("--w", o.w, "Third explicit set");
  count->add_option("--order", o.order, "Use the subgroup of this order");
  count->add_option("--orders", o.orders, "Subgroup orders, comma separated");
  count->add_option("--lambda", o.lambda, "Shift for --quantity shifted");
  count->add_option("--method", o.method, "oracle | optimized | both");
  add_out(count);

  auto* bounds = app.add_subcommand("bounds", "Evaluate the bound catalog");
  add_field(bounds);
  add_poly(bounds, false);
  bounds->add_option("--mode", o.mode, "canonical | best");
  bounds->add_option("--lemma-t", o.lemma_t, "Quadrilinear bounds at W,X,Y,Z");
  add_out(bounds);

  auto* compare = app.add_subcommand("compare", "Bounds against the exact sum");
  add_field(compare);
  add_poly(compare, true);
  compare->add_option("--mode", o.mode, "canonical | best");
  add_out(compare);

  auto add_batch = [&](CLI::App* s) {
    s->add_option("--config", o.config, "JSON config file (see docs/config.md)");
    s->add_option("--seed", o.seed, "Override the config seed");
    s->add_option("--workers", o.workers, "Worker threads");
    s->add_option("--mode", o.mode, "canonical | best");
    s->add_option("--p", o.primes, "Override the prime list");
    s->add_option("--suite", o.suites, "Override the suite list");
    s->add_option("--baseline-in", o.baseline_in, "Ratio baseline to enforce");
    s->add_option("--baseline-out", o.baseline_out, "Write observed ratio maxima here");
  };
  auto* verify = app.add_subcommand("verify", "Run the verification suites");
  add_batch(verify);
  verify->add_option("--out", o.out, "JSONL record file");
  auto* sweep = app.add_subcommand("sweep", "Write a JSONL or CSV dataset");
  add_batch(sweep);
  sweep->add_option("--out", o.out, "Dataset path")->required();
  sweep->add_option("--format", o.format, "jsonl | csv");

  auto* plot = app.add_subcommand("plotdata", "Columnar plot data from a JSONL dataset");
  plot->add_option("--kind", o.kind, "ratio-vs-cardinality | bound-vs-p | winner-map")
      ->required();
  plot->add_option("--in", o.in, "JSONL dataset")->required();
  add_out(plot);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*sum) return cmd_sum(o, out);
    if (*count) return cmd_count(o, out);
    if (*bounds) return cmd_bounds(o, out, false);
    if (*compare) return cmd_bounds(o, out, true);
    if (*verify) return cmd_verify(o, *verify, out);
    if (*sweep) return cmd_sweep(o, *sweep, out);
    if (*plot) return cmd_plotdata(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace quadsum::cli
