#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "quadsum/error.hpp"
#include "quadsum/harness.hpp"

using namespace quadsum;
using namespace quadsum::harness;
namespace fs = std::filesystem;

namespace {

Error config_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a config error");
  return Error(Errc::invalid_argument, "");
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("quadsum_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::vector<ResultRecord> collect(const SweepConfig& c, RunReport* report = nullptr) {
  std::vector<ResultRecord> out;
  auto r = run_records(c, [&](const ResultRecord& rec) { out.push_back(rec); });
  if (report) *report = std::move(r);
  return out;
}

SweepConfig small_config() {
  return parse_config(R"({
    "primes": [11, 13, 31],
    "families": [{"type": "random", "count": 4},
                 {"type": "gcd_structured", "count": 2},
                 {"type": "explicit", "polys": ["1,4;1,6;1,3;1,2"]}],
    "characters": [0, "random", "all-orders"],
    "suites": ["identity", "weil", "bilinear", "energy", "cauchy", "ratio", "bounds"],
    "seed": 7
  })");
}

}  // namespace

TEST_CASE("config parsing") {
  const auto d = default_config();
  CHECK(d.primes.front() == 11);
  CHECK(d.primes.back() == 199);
  CHECK_FALSE(d.has(Suite::ratio));

  const auto c = parse_config(R"({"primes": {"from": 10, "to": 30}, "seed": 3, "mode": "best"})");
  CHECK(c.primes == std::vector<std::uint64_t>{11, 13, 17, 19, 23, 29});
  CHECK(c.seed == 3);
  CHECK(c.mode == RoleMode::best);

  const auto unknown = config_error(R"({"primes": [11], "colour": 1})");
  CHECK(unknown.code() == Errc::config_invalid);
  CHECK(std::string(unknown.what()).find("colour") != std::string::npos);

  const auto nested = config_error(R"({"budgets": {"oracle": 5, "extra": 1}})");
  CHECK(std::string(nested.what()).find("budgets.extra") != std::string::npos);

  const auto big = config_error(R"({"primes": [2147483648]})");
  CHECK(big.code() == Errc::config_invalid);
  CHECK(std::string(big.what()).find("ModulusTooLarge") != std::string::npos);

  CHECK(config_error(R"({"primes": []})").code() == Errc::config_invalid);
  CHECK(config_error(R"({"primes": [15]})").code() == Errc::config_invalid);
  CHECK(config_error(R"({"workers": 0})").code() == Errc::config_invalid);
  CHECK(config_error(R"({"seed": -1})").code() == Errc::config_invalid);
  CHECK(config_error(R"({"suites": ["nope"]})").code() == Errc::config_invalid);
  CHECK(config_error(R"({"families": [{"type": "explicit", "polys": ["1,1;1,2"]}]})").code() ==
        Errc::config_invalid);
  CHECK(config_error("not json").code() == Errc::config_invalid);

  // Serialized configs parse back to the same thing.
  const auto sc = small_config();
  CHECK(config_to_json(parse_config(config_to_json(sc).dump())) == config_to_json(sc));
}

TEST_CASE("records round-trip through JSON") {
  ResultRecord r;
  r.seq = 12;
  r.sub = 3;
  r.suite = "ratio";
  r.quantity = "dx_ratio";
  r.p = 101;
  r.sets = "G=4";
  r.card = 4;
  r.chi = 5;
  r.value = 152.0;
  r.bound = 221.8;
  r.ratio = 0.685;
  r.regime = "small";
  r.status = Status::pass;
  r.rerun = "quadsum count --p 101";
  r.detail["winner"] = "macourt";
  const auto back = record_from_json(nlohmann::json::parse(to_json(r).dump()));
  CHECK(to_json(back) == to_json(r));

  const auto header = csv_header();
  const auto row = to_csv_row(r);
  CHECK(std::count(header.begin(), header.end(), ',') ==
        std::count(row.begin(), row.end(), ','));
  CHECK(header.ends_with(",winner"));
  CHECK(row.ends_with(",macourt"));

  CHECK_THROWS_AS(parse_status("maybe"), Error);
  CHECK_THROWS_AS(record_from_json(nlohmann::json::parse(R"({"seq": 1})")), Error);
}

TEST_CASE("generators are deterministic") {
  for (std::uint64_t p : {11, 13, 101, 1009}) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto a = random_quadrinomial(p, s);
      REQUIRE(a.size() == 4);
      REQUIRE(a.to_string() == random_quadrinomial(p, s).to_string());
      const auto g = gcd_structured_quadrinomial(p, s, 1'000'000);
      REQUIRE(g.size() == 4);
      const auto params = gcd_params(p, {g.exponents()[0], g.exponents()[1], g.exponents()[2],
                                         g.exponents()[3]},
                                     RoleMode::canonical)[0];
      REQUIRE(params.alpha * params.beta * params.gamma * (p - 1) <= 1'000'000);
    }
    const auto b = bilinear_instance(p, 42);
    CHECK(b.xs.size() == b.x_weights.size());
    CHECK(b.ys.size() == b.y_weights.size());
  }
}

TEST_CASE("cauchy check") {
  const auto ctx = FieldCtx::make(13);
  const auto one = subgroup_of_order(ctx, 1);
  // With G = H = {1}, N = F^2 but the stated right-hand side is F^4 / |S|.
  const auto trivial = cauchy_check(ctx, subgroup_of_order(ctx, 3), one, one);
  CHECK(trivial.n == 9);
  CHECK(trivial.s_order == 3);
  CHECK_FALSE(trivial.stated_step);
  CHECK(trivial.corrected_step);
  CHECK(trivial.identity);

  for (std::uint64_t p : {13, 31, 61}) {
    const auto c = FieldCtx::make(p);
    for (auto a : divisors(p - 1))
      for (auto b : divisors(p - 1))
        for (auto d : divisors(p - 1)) {
          if (d > b) continue;
          const auto r = cauchy_check(c, subgroup_of_order(c, a), subgroup_of_order(c, b),
                                      subgroup_of_order(c, d));
          REQUIRE(r.identity);
          REQUIRE(r.corrected_step);
        }
  }
}

TEST_CASE("output does not depend on the worker count") {
  auto c = small_config();
  c.suites = {Suite::identity, Suite::weil, Suite::bilinear, Suite::energy, Suite::ratio,
              Suite::bounds};
  c.workers = 1;
  const auto one = collect(c);
  c.workers = 4;
  const auto four = collect(c);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    REQUIRE(to_json(one[i]).dump() == to_json(four[i]).dump());
    if (i > 0) {
      const bool ordered = one[i - 1].seq < one[i].seq ||
                           (one[i - 1].seq == one[i].seq && one[i - 1].sub < one[i].sub);
      REQUIRE(ordered);
    }
  }
  CHECK_FALSE(one.front().wall_ms.has_value());
}

TEST_CASE("a small default run passes apart from the literal Cauchy step") {
  auto c = default_config();
  c.primes = {11, 13, 17, 19, 23, 29, 31, 37};
  c.families = {{FamilySpec::Kind::random, {}, 10}};
  RunReport report;
  const auto records = collect(c, &report);
  std::set<std::string> suites;
  std::uint64_t cauchy_step_failures = 0;
  for (const auto& r : records) {
    suites.insert(r.suite);
    if (r.status != Status::fail) continue;
    INFO(to_json(r).dump());
    REQUIRE(r.quantity == "cauchy_step");
    ++cauchy_step_failures;
  }
  CHECK(suites == std::set<std::string>{"identity", "weil", "bilinear", "energy", "cauchy",
                                        "bounds"});
  CHECK(cauchy_step_failures > 0);
  CHECK(report.total_failed() == cauchy_step_failures);
  CHECK(report.exit_code() == 1);

  c.suites = {Suite::identity, Suite::weil, Suite::bounds};
  RunReport clean;
  collect(c, &clean);
  CHECK(clean.total_failed() == 0);
  CHECK(clean.exit_code() == 0);
}

TEST_CASE("ratio ceiling and baselines") {
  TempDir tmp;
  auto c = parse_config(R"({"primes": [31, 61, 101], "suites": ["ratio"], "seed": 5})");
  c.baseline_out = tmp.path / "baseline.json";
  RunReport report;
  collect(c, &report);
  CHECK(report.total_failed() == 0);
  REQUIRE(fs::exists(*c.baseline_out));
  REQUIRE(report.max_ratio.contains("dx_ratio"));

  // Same run against its own baseline: no regression.
  c.baseline_in = c.baseline_out;
  c.baseline_out.reset();
  RunReport again;
  collect(c, &again);
  CHECK_FALSE(again.baseline_regressed);
  CHECK(again.exit_code() == 0);

  // Shrink the stored maxima: every quantity now regresses.
  auto stored = nlohmann::json::parse(std::ifstream(*c.baseline_in));
  for (auto& [k, v] : stored["max_ratio"].items()) v = v.get<double>() * 0.5;
  std::ofstream(*c.baseline_in) << stored.dump();
  RunReport worse;
  collect(c, &worse);
  CHECK(worse.baseline_regressed);
  CHECK(worse.exit_code() == 1);

  c.baseline_in = tmp.path / "missing.json";
  try {
    collect(c);
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io_failure);
  }

  c.baseline_in.reset();
  c.ratio_ceiling = 0.001;
  RunReport tight;
  collect(c, &tight);
  CHECK(tight.suites["ratio"].failed > 0);
  CHECK(tight.exit_code() == 1);
}

TEST_CASE("sweep output and plot data") {
  TempDir tmp;
  auto c = parse_config(R"({"primes": [13, 31], "suites": ["bounds", "ratio"],
                            "families": [{"type": "random", "count": 3}], "characters": [0]})");
  const auto jsonl = tmp.path / "out.jsonl";
  run_sweep(c, jsonl, Format::jsonl);
  const auto data = read_dataset(jsonl);
  REQUIRE_FALSE(data.empty());
  {
    std::ifstream in(jsonl);
    std::string first;
    std::getline(in, first);
    const auto header = nlohmann::json::parse(first);
    CHECK(header["header"]["schema"] == kSchemaVersion);
    CHECK(header["header"]["config"]["primes"] == nlohmann::json::array({13, 31}));
  }

  const auto csv = tmp.path / "out.csv";
  run_sweep(c, csv, Format::csv);
  std::ifstream cin(csv);
  std::string line;
  std::getline(cin, line);
  CHECK(line == csv_header());
  std::size_t rows = 0;
  while (std::getline(cin, line)) ++rows;
  CHECK(rows == data.size());

  const std::pair<PlotKind, std::string> kinds[] = {
      {PlotKind::ratio_vs_cardinality, "# card p ratio regime quantity"},
      {PlotKind::bound_vs_p, "# p weil ccp cp macourt trivial exact"},
      {PlotKind::winner_map, "# p klmn winner"}};
  for (const auto& [kind, header] : kinds) {
    std::ostringstream os;
    emit_plot_data(data, kind, os);
    std::istringstream is(os.str());
    std::string first;
    std::getline(is, first);
    CHECK(first == header);
    std::size_t lines = 0;
    while (std::getline(is, line)) ++lines;
    CHECK(lines > 0);

    std::ostringstream empty;
    emit_plot_data({}, kind, empty);
    CHECK(empty.str() == header + "\n");
  }
  CHECK(parse_plot_kind("winner-map") == PlotKind::winner_map);
  try {
    parse_plot_kind("histogram");
    FAIL("expected UnknownKind");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_kind);
  }

  CHECK_THROWS_AS(run_sweep(c, tmp.path / "no" / "such" / "dir.jsonl", Format::jsonl), Error);
  CHECK_THROWS_AS(read_dataset(tmp.path / "absent.jsonl"), Error);
}
