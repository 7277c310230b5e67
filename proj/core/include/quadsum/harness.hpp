#pragma once

// Batch driver: configuration, instance generation, parallel execution of the
// verification suites, and JSONL / CSV / plot-data output.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "quadsum/field.hpp"
#include "quadsum/int128.hpp"

namespace quadsum::harness {

inline constexpr int kSchemaVersion = 1;

enum class Suite { identity, weil, bilinear, energy, cauchy, ratio, bounds };

std::string_view suite_name(Suite s) noexcept;
Suite parse_suite(std::string_view name);

struct FamilySpec {
  enum class Kind { explicit_polys, random, gcd_structured };
  Kind kind = Kind::random;
  std::vector<std::string> polys;  // explicit_polys: "a,k;b,l;c,m;d,n"
  std::uint64_t count = 0;         // random / gcd_structured, per prime
};

struct CharacterSpec {
  enum class Kind { fixed, random, all_orders };
  Kind kind = Kind::fixed;
  std::uint64_t j = 0;
};

struct Budgets {
  std::uint64_t decomposed = 1'000'000'000;  // alpha beta gamma (p-1)
  std::uint64_t exact_prime = 1'000'000;     // largest p for exact sums
  std::uint64_t oracle = 2'000'000;          // brute-force steps per cross-check
  std::uint64_t n_triples = 100'000'000;     // |F||G|^2 per triple
  std::uint64_t triples_per_prime = 4096;    // cap on subgroup triples
};

struct SweepConfig {
  std::vector<std::uint64_t> primes;
  std::vector<FamilySpec> families;
  std::vector<CharacterSpec> characters;
  std::vector<Suite> suites;
  Budgets budgets;
  std::uint64_t seed = 1;
  double ratio_ceiling = 100.0;
  unsigned workers = 1;
  RoleMode mode = RoleMode::canonical;
  std::uint64_t bilinear_instances = 4;  // per prime
  std::uint64_t shift_samples = 2;       // lambdas per subgroup (lambda = 1 first)
  std::optional<std::filesystem::path> baseline_in;
  std::optional<std::filesystem::path> baseline_out;
  bool record_timing = false;

  bool has(Suite s) const;
};

/// p in {11, ..., 199} primes, 50 random quadrinomials per prime,
/// j in {0, 1}, every suite except ratio.
SweepConfig default_config();

/// Strict JSON ingestion: unknown keys and ill-typed fields raise
/// Errc::config_invalid naming the offending field.
SweepConfig parse_config(std::string_view json_text);
SweepConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json config_to_json(const SweepConfig& config);
void validate(const SweepConfig& config);

enum class Status { pass, fail, skipped, info };
std::string_view status_name(Status s) noexcept;
Status parse_status(std::string_view s);

struct ResultRecord {
  std::uint64_t seq = 0;  // instance (task) index
  std::uint32_t sub = 0;  // record index within the instance
  std::string suite;
  std::string quantity;
  std::uint64_t p = 0;
  std::string poly;
  std::optional<std::uint64_t> chi;
  std::string sets;        // e.g. "F=3,G=4,H=2"
  std::uint64_t card = 0;  // primary cardinality for plotting
  std::optional<double> value;
  std::optional<double> bound;
  std::optional<double> ratio;
  std::string regime;
  Status status = Status::info;
  std::string reason;
  std::string rerun;  // CLI invocation reproducing the instance
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();
  std::optional<double> wall_ms;
};

nlohmann::ordered_json to_json(const ResultRecord& r);
ResultRecord record_from_json(const nlohmann::json& j);
std::string csv_header();
std::string to_csv_row(const ResultRecord& r);

/// Reads a JSONL dataset, skipping the header line. Errc::io_failure when
/// the file cannot be read, Errc::invalid_argument for schema violations.
std::vector<ResultRecord> read_dataset(const std::filesystem::path& path);

struct SuiteSummary {
  std::uint64_t passed = 0, failed = 0, skipped = 0, info = 0;
  std::uint64_t checks = 0;  // sum of detail.checked (or 1 per pass/fail record)
};

struct RunReport {
  std::map<std::string, SuiteSummary> suites;
  std::map<std::string, double> max_ratio;  // ratio-suite maxima per quantity
  std::vector<ResultRecord> failures;
  std::vector<std::string> baseline_messages;
  bool baseline_regressed = false;
  std::uint64_t records = 0;
  double wall_seconds = 0.0;

  std::uint64_t total_failed() const;
  /// 0 when nothing failed and no baseline regressed, 1 otherwise.
  int exit_code() const;
};

using RecordSink = std::function<void(const ResultRecord&)>;

/// Plans every instance, runs them on `config.workers` threads and hands the
/// records to `sink` in (seq, sub) order. Output is independent of the worker
/// count. Baseline comparison/writing happens here.
RunReport run_records(const SweepConfig& config, const RecordSink& sink);

/// Runs and writes JSONL (header line + records) to `jsonl_out` when given;
/// prints the human-readable summary to `summary`.
RunReport run_verify(const SweepConfig& config,
                     const std::optional<std::filesystem::path>& jsonl_out,
                     std::ostream& summary);

enum class Format { jsonl, csv };
Format parse_format(std::string_view s);

/// Writes the dataset. Errc::io_failure when the output cannot be written.
RunReport run_sweep(const SweepConfig& config, const std::filesystem::path& out, Format format);

void write_summary(const RunReport& report, std::ostream& os);

enum class PlotKind { ratio_vs_cardinality, bound_vs_p, winner_map };
/// Errc::unknown_kind for anything else.
PlotKind parse_plot_kind(std::string_view s);

/// Whitespace-separated columns with a "# name name ..." header.
void emit_plot_data(std::span<const ResultRecord> dataset, PlotKind kind, std::ostream& os);

/// The Cauchy step for N(F, G, H) over subgroups, with S = F G H and
/// c(lambda) = #{(g, h) in G x H : lambda (g - 1) = h - 1}.
struct CauchyCheck {
  u128 n = 0;                    // N(F, G, H)
  std::uint64_t s_order = 0;     // |S| = lcm(|F|, |G|, |H|)
  u128 energy_g = 0, energy_h = 0;  // E^x(G - 1), E^x(H - 1), 0 included
  std::string sum_c, sum_c2;     // sum over S of c and c^2 (decimal)
  /// N^2 <= (F^4 G^2 H^2 / |S|) sqrt(E^x(G-1) E^x(H-1)), decided exactly.
  bool stated_step = false;
  /// N^2 <= (F^4 G^2 H^2 / |S|) sum_S c^2 (Cauchy-Schwarz).
  bool corrected_step = false;
  /// N |S| = F^2 G H sum_S c.
  bool identity = false;
};

CauchyCheck cauchy_check(const FieldCtx& ctx, const Subgroup& f, const Subgroup& g,
                         const Subgroup& h);
/// Same, with N and the two energies already known.
CauchyCheck cauchy_check(const FieldCtx& ctx, const Subgroup& f, const Subgroup& g,
                         const Subgroup& h, u128 n, u128 energy_g, u128 energy_h);

// Instance generators, exposed for the CLI and for tests.

/// Four distinct exponents, random coefficients.
SparsePoly random_quadrinomial(std::uint64_t p, std::uint64_t seed);

/// k, l, m multiples of large divisors of p-1, n with gcd(n, p-1) in {1, 2};
/// keeps alpha beta gamma (p-1) <= decomposed_budget when that is nonzero.
SparsePoly gcd_structured_quadrinomial(std::uint64_t p, std::uint64_t seed,
                                       std::uint64_t decomposed_budget);

struct BilinearInstance {
  std::vector<Residue> xs, ys;
  std::vector<std::complex<double>> x_weights, y_weights;
};

BilinearInstance bilinear_instance(std::uint64_t p, std::uint64_t seed);

}  // namespace quadsum::harness
