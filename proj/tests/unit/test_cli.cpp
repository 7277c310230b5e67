#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = quadsum::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json cli_json(std::vector<std::string> args) {
  const auto r = cli(std::move(args));
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("quadsum_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("sum") {
  const auto j = cli_json({"sum", "--p", "5", "--poly", "1,2", "--chi", "0"});
  CHECK(j["value"][0].get<double>() == doctest::Approx(std::sqrt(5.0) - 1.0));
  const auto d =
      cli_json({"sum", "--kind", "decomposed", "--p", "13", "--poly", "1,4;1,6;1,3;1,2"});
  const auto e = cli_json({"sum", "--p", "13", "--poly", "1,4;1,6;1,3;1,2"});
  CHECK(d["magnitude"].get<double>() == doctest::Approx(e["magnitude"].get<double>()));
  CHECK(cli_json({"sum", "--kind", "bilinear", "--p", "13", "--seed", "42"})["pass"] == true);

  CHECK(cli({"sum", "--p", "15", "--poly", "1,1"}).code == quadsum::cli::kConfigError);
  CHECK(cli({"sum", "--p", "2147483648", "--poly", "1,1"}).code == quadsum::cli::kConfigError);
  CHECK(cli({"sum", "--p", "13", "--poly", "x"}).code == quadsum::cli::kConfigError);
  CHECK(cli({"sum", "--bogus"}).code == quadsum::cli::kConfigError);
  CHECK(cli({"--help"}).code == quadsum::cli::kOk);
}

TEST_CASE("count") {
  auto e = cli_json({"count", "--quantity", "energy", "--p", "13", "--u", "2,4,10", "--v",
                     "2,4,10", "--method", "both"});
  CHECK(e["optimized"] == 15);
  CHECK(e["oracle"] == 15);
  CHECK(cli_json({"count", "--quantity", "dtimes", "--p", "5", "--u", "1,4", "--method",
                  "both"})["optimized"] == 152);
  CHECK(cli_json({"count", "--quantity", "shifted", "--p", "13", "--order", "2", "--lambda",
                  "1"})["optimized"] == 10);

  // The literal Cauchy step fails on G = H = {1}: exit 1.
  const auto c = cli({"count", "--quantity", "cauchy", "--p", "13", "--orders", "3,1,1"});
  CHECK(c.code == quadsum::cli::kVerificationFailed);
  const auto cj = json::parse(c.out);
  CHECK(cj["stated_step"] == false);
  CHECK(cj["corrected_step"] == true);
  CHECK(cj["identity"] == true);

  CHECK(cli({"count", "--quantity", "energy", "--p", "13", "--order", "5"}).code ==
        quadsum::cli::kConfigError);
  CHECK(cli({"count", "--quantity", "volume", "--p", "13"}).code == quadsum::cli::kConfigError);
}

TEST_CASE("bounds and compare") {
  const auto b = cli_json({"bounds", "--p", "13", "--poly", "1,4;1,6;1,3;1,2"});
  CHECK(b["bounds"]["macourt"]["regime"] == "pdelta_small");
  CHECK(b["bounds"]["macourt"]["value"].get<double>() == doctest::Approx(22.49).epsilon(1e-3));
  CHECK(b["winner"] == "trivial");
  const auto c = cli_json({"compare", "--p", "13", "--poly", "1,4;1,6;1,3;1,2", "--mode", "best"});
  CHECK(c.contains("exact"));
  CHECK(cli({"bounds", "--p", "13", "--mode", "worst"}).code == quadsum::cli::kConfigError);
  CHECK(cli({"bounds", "--p", "13", "--lemma-t", "1,2,1,1"}).code == quadsum::cli::kConfigError);
}

TEST_CASE("verify, sweep and plotdata") {
  const auto cfg = scratch("ratio.json");
  std::ofstream(cfg) << R"({"primes": [13, 31], "suites": ["weil", "ratio"],
                           "families": [{"type": "random", "count": 2}], "characters": [0]})";
  const auto ok = cli({"verify", "--config", cfg.string()});
  CHECK(ok.code == quadsum::cli::kOk);
  CHECK(ok.out.find("OK") != std::string::npos);

  const auto tight = scratch("tight.json");
  std::ofstream(tight) << R"({"primes": [13, 31], "suites": ["ratio"], "ratio_ceiling": 0.001})";
  CHECK(cli({"verify", "--config", tight.string()}).code == quadsum::cli::kVerificationFailed);

  const auto bad = scratch("bad.json");
  std::ofstream(bad) << R"({"primes": [13], "surprise": true})";
  const auto badr = cli({"verify", "--config", bad.string()});
  CHECK(badr.code == quadsum::cli::kConfigError);
  CHECK(badr.err.find("surprise") != std::string::npos);
  CHECK(cli({"verify", "--config", scratch("absent.json").string()}).code ==
        quadsum::cli::kIoError);

  const auto data = scratch("data.jsonl");
  CHECK(cli({"sweep", "--config", cfg.string(), "--out", data.string(), "--workers", "2"}).code ==
        quadsum::cli::kOk);
  const auto csv = scratch("data.csv");
  CHECK(cli({"sweep", "--config", cfg.string(), "--out", csv.string(), "--format", "csv"}).code ==
        quadsum::cli::kOk);
  CHECK(cli({"sweep", "--config", cfg.string(), "--out", data.string(), "--format", "xml"}).code ==
        quadsum::cli::kConfigError);
  CHECK(cli({"sweep", "--config", cfg.string(), "--out", "/nonexistent/dir/x.jsonl"}).code ==
        quadsum::cli::kIoError);

  const auto plot = cli({"plotdata", "--kind", "ratio-vs-cardinality", "--in", data.string()});
  CHECK(plot.code == quadsum::cli::kOk);
  CHECK(plot.out.starts_with("# card p ratio regime quantity\n"));
  CHECK(cli({"plotdata", "--kind", "pie", "--in", data.string()}).code ==
        quadsum::cli::kConfigError);
  CHECK(cli({"plotdata", "--kind", "winner-map", "--in", scratch("nothing.jsonl").string()})
            .code == quadsum::cli::kIoError);

  fs::remove_all(cfg.parent_path());
}
