#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "quadsum/error.hpp"
#include "quadsum/harness.hpp"

namespace quadsum::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kSuiteNames[] = {"identity", "weil",  "bilinear", "energy",
                                            "cauchy",   "ratio", "bounds"};

[[noreturn]] void invalid(const std::string& field, const std::string& msg) {
  throw Error(Errc::config_invalid, "config." + field + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      invalid(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

std::uint64_t get_uint(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0) invalid(field, "must be non-negative");
    return static_cast<std::uint64_t>(i);
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d < 0 || d != std::floor(d) || d > 1.8e19) invalid(field, "must be a non-negative integer");
    return static_cast<std::uint64_t>(d);
  }
  invalid(field, "expected a non-negative integer");
}

double get_double(const json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "expected a number");
  return v.get<double>();
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) invalid(field, "expected a string");
  return v.get<std::string>();
}

std::vector<std::uint64_t> parse_primes(const json& v) {
  std::vector<std::uint64_t> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(get_uint(v[i], "primes[" + std::to_string(i) + "]"));
    }
    return out;
  }
  if (v.is_object()) {
    reject_unknown(v, "primes", {"from", "to"});
    if (!v.contains("from") || !v.contains("to")) invalid("primes", "range needs from and to");
    const auto lo = get_uint(v["from"], "primes.from");
    const auto hi = get_uint(v["to"], "primes.to");
    if (hi >= kModulusLimit) {
      invalid("primes.to", "ModulusTooLarge: " + std::to_string(hi) + " >= 2^31");
    }
    for (std::uint64_t p = std::max<std::uint64_t>(lo, 3); p <= hi; ++p) {
      if (is_prime(p)) out.push_back(p);
    }
    return out;
  }
  invalid("primes", "expected a list of primes or {\"from\":..,\"to\":..}");
}

}  // namespace

std::string_view suite_name(Suite s) noexcept { return kSuiteNames[static_cast<int>(s)]; }

Suite parse_suite(std::string_view name) {
  for (int i = 0; i < 7; ++i) {
    if (kSuiteNames[i] == name) return static_cast<Suite>(i);
  }
  throw Error(Errc::config_invalid, "unknown suite '" + std::string(name) + "'");
}

bool SweepConfig::has(Suite s) const {
  return std::find(suites.begin(), suites.end(), s) != suites.end();
}

SweepConfig default_config() {
  SweepConfig c;
  for (std::uint64_t p = 11; p <= 199; ++p) {
    if (is_prime(p)) c.primes.push_back(p);
  }
  c.families.push_back({FamilySpec::Kind::random, {}, 50});
  c.characters = {{CharacterSpec::Kind::fixed, 0}, {CharacterSpec::Kind::fixed, 1}};
  c.suites = {Suite::identity, Suite::weil,   Suite::bilinear,
              Suite::energy,   Suite::cauchy, Suite::bounds};
  return c;
}

SweepConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::config_invalid, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) invalid("", "top level must be an object");
  reject_unknown(root, "",
                 {"primes", "families", "characters", "suites", "budgets", "seed",
                  "ratio_ceiling", "workers", "mode", "bilinear_instances", "shift_samples",
                  "baseline_in", "baseline_out", "record_timing"});

  SweepConfig c = default_config();
  if (root.contains("primes")) c.primes = parse_primes(root["primes"]);

  if (root.contains("families")) {
    const auto& fams = root["families"];
    if (!fams.is_array()) invalid("families", "expected a list");
    c.families.clear();
    for (std::size_t i = 0; i < fams.size(); ++i) {
      const std::string where = "families[" + std::to_string(i) + "]";
      const auto& f = fams[i];
      if (!f.is_object()) invalid(where, "expected an object");
      reject_unknown(f, where, {"type", "count", "polys"});
      if (!f.contains("type")) invalid(where + ".type", "missing");
      const auto type = get_string(f["type"], where + ".type");
      FamilySpec spec;
      if (type == "explicit") {
        spec.kind = FamilySpec::Kind::explicit_polys;
        if (!f.contains("polys") || !f["polys"].is_array()) {
          invalid(where + ".polys", "expected a list of \"a,k;b,l;c,m;d,n\" strings");
        }
        for (std::size_t k = 0; k < f["polys"].size(); ++k) {
          spec.polys.push_back(
              get_string(f["polys"][k], where + ".polys[" + std::to_string(k) + "]"));
        }
      } else if (type == "random" || type == "gcd_structured") {
        spec.kind = type == "random" ? FamilySpec::Kind::random
                                     : FamilySpec::Kind::gcd_structured;
        if (!f.contains("count")) invalid(where + ".count", "missing");
        spec.count = get_uint(f["count"], where + ".count");
      } else {
        invalid(where + ".type", "must be explicit, random or gcd_structured");
      }
      c.families.push_back(std::move(spec));
    }
  }

  if (root.contains("characters")) {
    const auto& chars = root["characters"];
    if (!chars.is_array()) invalid("characters", "expected a list");
    c.characters.clear();
    for (std::size_t i = 0; i < chars.size(); ++i) {
      const std::string where = "characters[" + std::to_string(i) + "]";
      if (chars[i].is_string()) {
        const auto s = chars[i].get<std::string>();
        if (s == "random") {
          c.characters.push_back({CharacterSpec::Kind::random, 0});
        } else if (s == "all-orders") {
          c.characters.push_back({CharacterSpec::Kind::all_orders, 0});
        } else {
          invalid(where, "expected an integer, \"random\" or \"all-orders\"");
        }
      } else {
        c.characters.push_back({CharacterSpec::Kind::fixed, get_uint(chars[i], where)});
      }
    }
  }

  if (root.contains("suites")) {
    const auto& suites = root["suites"];
    if (!suites.is_array()) invalid("suites", "expected a list");
    c.suites.clear();
    for (std::size_t i = 0; i < suites.size(); ++i) {
      const std::string where = "suites[" + std::to_string(i) + "]";
      const auto name = get_string(suites[i], where);
      try {
        const auto s = parse_suite(name);
        if (!c.has(s)) c.suites.push_back(s);
      } catch (const Error&) {
        invalid(where, "unknown suite '" + name + "'");
      }
    }
  }

  if (root.contains("budgets")) {
    const auto& b = root["budgets"];
    if (!b.is_object()) invalid("budgets", "expected an object");
    reject_unknown(b, "budgets",
                   {"decomposed", "exact_prime", "oracle", "n_triples", "triples_per_prime"});
    if (b.contains("decomposed")) c.budgets.decomposed = get_uint(b["decomposed"], "budgets.decomposed");
    if (b.contains("exact_prime")) c.budgets.exact_prime = get_uint(b["exact_prime"], "budgets.exact_prime");
    if (b.contains("oracle")) c.budgets.oracle = get_uint(b["oracle"], "budgets.oracle");
    if (b.contains("n_triples")) c.budgets.n_triples = get_uint(b["n_triples"], "budgets.n_triples");
    if (b.contains("triples_per_prime")) {
      c.budgets.triples_per_prime = get_uint(b["triples_per_prime"], "budgets.triples_per_prime");
    }
  }

  if (root.contains("seed")) c.seed = get_uint(root["seed"], "seed");
  if (root.contains("ratio_ceiling")) c.ratio_ceiling = get_double(root["ratio_ceiling"], "ratio_ceiling");
  if (root.contains("workers")) {
    const auto w = get_uint(root["workers"], "workers");
    if (w == 0 || w > 1024) invalid("workers", "must be in [1, 1024]");
    c.workers = static_cast<unsigned>(w);
  }
  if (root.contains("mode")) {
    const auto m = get_string(root["mode"], "mode");
    if (m != "canonical" && m != "best") invalid("mode", "must be canonical or best");
    c.mode = parse_role_mode(m);
  }
  if (root.contains("bilinear_instances")) {
    c.bilinear_instances = get_uint(root["bilinear_instances"], "bilinear_instances");
  }
  if (root.contains("shift_samples")) c.shift_samples = get_uint(root["shift_samples"], "shift_samples");
  if (root.contains("baseline_in")) c.baseline_in = get_string(root["baseline_in"], "baseline_in");
  if (root.contains("baseline_out")) c.baseline_out = get_string(root["baseline_out"], "baseline_out");
  if (root.contains("record_timing")) {
    if (!root["record_timing"].is_boolean()) invalid("record_timing", "expected a boolean");
    c.record_timing = root["record_timing"].get<bool>();
  }

  validate(c);
  return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const SweepConfig& c) {
  if (c.primes.empty()) invalid("primes", "the prime list is empty");
  for (std::size_t i = 0; i < c.primes.size(); ++i) {
    const auto p = c.primes[i];
    const std::string where = "primes[" + std::to_string(i) + "]";
    if (p >= kModulusLimit) invalid(where, "ModulusTooLarge: " + std::to_string(p) + " >= 2^31");
    if (p < 3 || !is_prime(p)) invalid(where, "CompositeModulus: " + std::to_string(p));
  }
  if (c.suites.empty()) invalid("suites", "no suite selected");
  if (!(c.ratio_ceiling > 0.0)) invalid("ratio_ceiling", "must be positive");
  if (c.workers == 0) invalid("workers", "must be at least 1");
  if (c.shift_samples == 0) invalid("shift_samples", "must be at least 1");
  for (std::size_t i = 0; i < c.families.size(); ++i) {
    const auto& f = c.families[i];
    if (f.kind != FamilySpec::Kind::explicit_polys) continue;
    for (std::size_t k = 0; k < f.polys.size(); ++k) {
      for (auto p : c.primes) {
        try {
          const auto poly = SparsePoly::parse(static_cast<std::uint32_t>(p), f.polys[k]);
          if (poly.size() != 4) {
            invalid("families[" + std::to_string(i) + "].polys[" + std::to_string(k) + "]",
                    "expected a quadrinomial");
          }
        } catch (const Error& e) {
          if (e.code() == Errc::config_invalid) throw;
          invalid("families[" + std::to_string(i) + "].polys[" + std::to_string(k) + "]",
                  std::string(e.what()) + " (p = " + std::to_string(p) + ")");
        }
      }
    }
  }
}

ordered_json config_to_json(const SweepConfig& c) {
  ordered_json j;
  j["primes"] = c.primes;
  ordered_json fams = ordered_json::array();
  for (const auto& f : c.families) {
    ordered_json e;
    switch (f.kind) {
      case FamilySpec::Kind::explicit_polys:
        e["type"] = "explicit";
        e["polys"] = f.polys;
        break;
      case FamilySpec::Kind::random:
        e["type"] = "random";
        e["count"] = f.count;
        break;
      case FamilySpec::Kind::gcd_structured:
        e["type"] = "gcd_structured";
        e["count"] = f.count;
        break;
    }
    fams.push_back(std::move(e));
  }
  j["families"] = std::move(fams);
  ordered_json chars = ordered_json::array();
  for (const auto& ch : c.characters) {
    if (ch.kind == CharacterSpec::Kind::random) {
      chars.push_back("random");
    } else if (ch.kind == CharacterSpec::Kind::all_orders) {
      chars.push_back("all-orders");
    } else {
      chars.push_back(ch.j);
    }
  }
  j["characters"] = std::move(chars);
  ordered_json suites = ordered_json::array();
  for (auto s : c.suites) suites.push_back(std::string(suite_name(s)));
  j["suites"] = std::move(suites);
  j["budgets"] = {{"decomposed", c.budgets.decomposed},
                  {"exact_prime", c.budgets.exact_prime},
                  {"oracle", c.budgets.oracle},
                  {"n_triples", c.budgets.n_triples},
                  {"triples_per_prime", c.budgets.triples_per_prime}};
  j["seed"] = c.seed;
  j["ratio_ceiling"] = c.ratio_ceiling;
  j["mode"] = std::string(role_mode_name(c.mode));
  j["bilinear_instances"] = c.bilinear_instances;
  j["shift_samples"] = c.shift_samples;
  return j;
}

}  // namespace quadsum::harness
