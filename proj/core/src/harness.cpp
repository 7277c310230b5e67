#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "quadsum/error.hpp"
#include "quadsum/harness.hpp"
#include "quadsum/rng.hpp"
#include "suites.hpp"

namespace quadsum::harness {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct PlannedTask {
  enum class Kind { instance, bilinear, energy, cauchy, ratio, note };
  Kind kind = Kind::note;
  std::uint64_t p = 0;
  std::optional<detail::InstanceTask> instance;
  std::uint64_t index = 0;
  ResultRecord note;  // Kind::note: emitted as is
};

std::string_view family_name(FamilySpec::Kind k) {
  switch (k) {
    case FamilySpec::Kind::explicit_polys: return "explicit";
    case FamilySpec::Kind::random: return "random";
    case FamilySpec::Kind::gcd_structured: return "gcd_structured";
  }
  return "random";
}

PlannedTask note_task(std::uint64_t p, Suite suite, std::string quantity, std::string reason,
                      std::string poly = {}) {
  PlannedTask t;
  t.p = p;
  t.note.suite = std::string(suite_name(suite));
  t.note.quantity = std::move(quantity);
  t.note.p = p;
  t.note.poly = std::move(poly);
  t.note.status = Status::skipped;
  t.note.reason = std::move(reason);
  return t;
}

std::vector<std::uint64_t> characters_for(const SweepConfig& c, std::uint64_t p,
                                          std::uint64_t family, std::uint64_t k) {
  const std::uint64_t n = p - 1;
  std::vector<std::uint64_t> out;
  for (std::size_t ci = 0; ci < c.characters.size(); ++ci) {
    const auto& spec = c.characters[ci];
    switch (spec.kind) {
      case CharacterSpec::Kind::fixed:
        out.push_back(spec.j % n);
        break;
      case CharacterSpec::Kind::random: {
        Rng rng(derive_seed(c.seed, {detail::kSeedChar, p, family, k, ci}));
        out.push_back(rng.below(n));
        break;
      }
      case CharacterSpec::Kind::all_orders:
        for (auto d : divisors(n)) out.push_back((n / d) % n);
        break;
    }
  }
  return out;
}

Suite first_instance_suite(const SweepConfig& c) {
  for (Suite s : {Suite::identity, Suite::weil, Suite::bounds}) {
    if (c.has(s)) return s;
  }
  return Suite::identity;
}

std::vector<PlannedTask> plan(const SweepConfig& c) {
  std::vector<PlannedTask> tasks;
  const bool per_instance = c.has(Suite::identity) || c.has(Suite::weil) || c.has(Suite::bounds);
  for (auto p : c.primes) {
    if (per_instance && p < 5) {
      tasks.push_back(note_task(p, first_instance_suite(c), "instance",
                                "a quadrinomial needs p >= 5"));
    } else if (per_instance) {
      for (std::size_t fi = 0; fi < c.families.size(); ++fi) {
        const auto& fam = c.families[fi];
        std::vector<SparsePoly> polys;
        if (fam.kind == FamilySpec::Kind::explicit_polys) {
          for (const auto& text : fam.polys) {
            try {
              auto psi = SparsePoly::parse(static_cast<std::uint32_t>(p), text);
              if (psi.size() != 4) throw Error(Errc::invalid_argument, "not a quadrinomial");
              polys.push_back(std::move(psi));
            } catch (const Error& e) {
              tasks.push_back(note_task(p, first_instance_suite(c), "instance",
                                        std::string("poly not usable at this p: ") + e.what(),
                                        text));
            }
          }
        } else {
          for (std::uint64_t k = 0; k < fam.count; ++k) {
            const auto seed = derive_seed(c.seed, {detail::kSeedPoly, p, fi, k});
            if (fam.kind == FamilySpec::Kind::random) {
              polys.push_back(random_quadrinomial(p, seed));
            } else {
              polys.push_back(gcd_structured_quadrinomial(
                  p, seed, c.has(Suite::identity) ? c.budgets.decomposed : 0));
            }
          }
        }
        for (std::size_t k = 0; k < polys.size(); ++k) {
          for (auto j : characters_for(c, p, fi, k)) {
            PlannedTask t;
            t.kind = PlannedTask::Kind::instance;
            t.p = p;
            t.instance = detail::InstanceTask{polys[k], j, std::string(family_name(fam.kind))};
            tasks.push_back(std::move(t));
          }
        }
      }
    }
    if (c.has(Suite::bilinear)) {
      for (std::uint64_t i = 0; i < c.bilinear_instances; ++i) {
        PlannedTask t;
        t.kind = PlannedTask::Kind::bilinear;
        t.p = p;
        t.index = i;
        tasks.push_back(std::move(t));
      }
    }
    for (auto [suite, kind] : {std::pair{Suite::energy, PlannedTask::Kind::energy},
                               std::pair{Suite::cauchy, PlannedTask::Kind::cauchy},
                               std::pair{Suite::ratio, PlannedTask::Kind::ratio}}) {
      if (!c.has(suite)) continue;
      PlannedTask t;
      t.kind = kind;
      t.p = p;
      tasks.push_back(std::move(t));
    }
  }
  return tasks;
}

// Field contexts are built on first use and dropped once no running task
// holds them; tasks of one prime are contiguous, so each is built about once.
class ContextCache {
 public:
  std::shared_ptr<const FieldCtx> get(std::uint64_t p) {
    std::lock_guard lock(mutex_);
    if (auto hit = cache_[p].lock()) return hit;
    auto made = std::make_shared<const FieldCtx>(FieldCtx::make(p));
    cache_[p] = made;
    return made;
  }

 private:
  std::mutex mutex_;
  std::map<std::uint64_t, std::weak_ptr<const FieldCtx>> cache_;
};

std::vector<ResultRecord> execute(const SweepConfig& c, const PlannedTask& t,
                                  ContextCache& cache) {
  if (t.kind == PlannedTask::Kind::note) return {t.note};
  const auto ctx = cache.get(t.p);
  switch (t.kind) {
    case PlannedTask::Kind::instance: return detail::run_instance(c, *ctx, *t.instance);
    case PlannedTask::Kind::bilinear: return detail::run_bilinear(c, *ctx, t.index);
    case PlannedTask::Kind::energy: return detail::run_energy(c, *ctx);
    case PlannedTask::Kind::cauchy: return detail::run_cauchy(c, *ctx);
    case PlannedTask::Kind::ratio: return detail::run_ratio(c, *ctx);
    case PlannedTask::Kind::note: break;
  }
  return {};
}

std::string_view task_suite(const PlannedTask& t) {
  switch (t.kind) {
    case PlannedTask::Kind::bilinear: return suite_name(Suite::bilinear);
    case PlannedTask::Kind::energy: return suite_name(Suite::energy);
    case PlannedTask::Kind::cauchy: return suite_name(Suite::cauchy);
    case PlannedTask::Kind::ratio: return suite_name(Suite::ratio);
    default: return suite_name(Suite::identity);
  }
}

std::vector<ResultRecord> execute_guarded(const SweepConfig& c, const PlannedTask& t,
                                          ContextCache& cache) {
  try {
    return execute(c, t, cache);
  } catch (const std::exception& e) {
    ResultRecord r;
    r.suite = std::string(task_suite(t));
    r.quantity = "task_error";
    r.p = t.p;
    if (t.instance) {
      r.poly = t.instance->psi.to_string();
      r.chi = t.instance->j;
    }
    r.status = Status::fail;
    r.reason = e.what();
    return {r};
  }
}

void tally(RunReport& report, const ResultRecord& r) {
  auto& s = report.suites[r.suite];
  switch (r.status) {
    case Status::pass: ++s.passed; break;
    case Status::fail: ++s.failed; break;
    case Status::skipped: ++s.skipped; break;
    case Status::info: ++s.info; break;
  }
  if (r.status == Status::pass || r.status == Status::fail) {
    if (r.detail.contains("checked") && r.detail["checked"].is_number_unsigned()) {
      s.checks += r.detail["checked"].get<std::uint64_t>();
    } else {
      ++s.checks;
    }
  }
  if (r.suite == suite_name(Suite::ratio) && r.ratio &&
      (r.status == Status::pass || r.status == Status::fail)) {
    auto [it, fresh] = report.max_ratio.emplace(r.quantity, *r.ratio);
    if (!fresh) it->second = std::max(it->second, *r.ratio);
  }
  if (r.status == Status::fail) report.failures.push_back(r);
  ++report.records;
}

void compare_baseline(const std::filesystem::path& path, RunReport& report) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot read baseline " + path.string());
  json stored;
  try {
    in >> stored;
  } catch (const json::exception& e) {
    throw Error(Errc::config_invalid, "baseline " + path.string() + ": " + e.what());
  }
  if (!stored.is_object() || stored.value("schema", 0) != kSchemaVersion ||
      !stored.contains("max_ratio") || !stored["max_ratio"].is_object()) {
    throw Error(Errc::config_invalid, "baseline " + path.string() + " lacks schema/max_ratio");
  }
  for (const auto& [quantity, value] : stored["max_ratio"].items()) {
    const double limit = value.get<double>();
    const auto it = report.max_ratio.find(quantity);
    std::ostringstream os;
    os << std::setprecision(10);
    if (it == report.max_ratio.end()) {
      os << quantity << ": not observed in this run (baseline " << limit << ")";
    } else if (it->second > limit * (1.0 + 1e-9)) {
      os << quantity << ": max ratio " << it->second << " exceeds baseline " << limit;
      report.baseline_regressed = true;
    } else {
      os << quantity << ": max ratio " << it->second << " within baseline " << limit;
    }
    report.baseline_messages.push_back(os.str());
  }
}

void write_baseline(const std::filesystem::path& path, const RunReport& report) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["max_ratio"] = ordered_json::object();
  for (const auto& [q, v] : report.max_ratio) j["max_ratio"][q] = v;
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_failure, "cannot write baseline " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(Errc::io_failure, "write failed for " + path.string());
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

ordered_json header_line(const SweepConfig& c) {
  ordered_json h;
  h["schema"] = kSchemaVersion;
  h["tool"] = "quadsum";
  h["timestamp"] = utc_timestamp();
  h["config"] = config_to_json(c);
  return {{"header", h}};
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::uint64_t RunReport::total_failed() const {
  std::uint64_t n = 0;
  for (const auto& [name, s] : suites) n += s.failed;
  return n;
}

int RunReport::exit_code() const { return total_failed() == 0 && !baseline_regressed ? 0 : 1; }

RunReport run_records(const SweepConfig& config, const RecordSink& sink) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  const auto tasks = plan(config);
  ContextCache cache;

  struct Slot {
    bool ready = false;
    std::vector<ResultRecord> records;
  };
  std::vector<Slot> slots(tasks.size());
  std::mutex mutex;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const auto t0 = std::chrono::steady_clock::now();
      auto records = execute_guarded(config, tasks[i], cache);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      for (std::size_t k = 0; k < records.size(); ++k) {
        records[k].seq = i;
        records[k].sub = static_cast<std::uint32_t>(k);
        if (config.record_timing) records[k].wall_ms = ms;
      }
      {
        std::lock_guard lock(mutex);
        slots[i].records = std::move(records);
        slots[i].ready = true;
      }
      cv.notify_all();
    }
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(tasks.size())));
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);

  RunReport report;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::vector<ResultRecord> records;
    {
      std::unique_lock lock(mutex);
      cv.wait(lock, [&] { return slots[i].ready; });
      records = std::move(slots[i].records);
      slots[i].records.clear();
    }
    for (const auto& r : records) {
      tally(report, r);
      sink(r);
    }
  }
  pool.clear();

  if (config.baseline_in) compare_baseline(*config.baseline_in, report);
  if (config.baseline_out) write_baseline(*config.baseline_out, report);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

RunReport run_verify(const SweepConfig& config,
                     const std::optional<std::filesystem::path>& jsonl_out,
                     std::ostream& summary) {
  validate(config);
  std::optional<std::ofstream> out;
  if (jsonl_out) {
    out = open_output(*jsonl_out);
    *out << header_line(config).dump() << '\n';
  }
  auto report = run_records(config, [&](const ResultRecord& r) {
    if (out) *out << to_json(r).dump() << '\n';
  });
  if (out) {
    out->flush();
    if (!*out) throw Error(Errc::io_failure, "write failed for " + jsonl_out->string());
  }
  write_summary(report, summary);
  return report;
}

Format parse_format(std::string_view s) {
  if (s == "jsonl") return Format::jsonl;
  if (s == "csv") return Format::csv;
  throw Error(Errc::invalid_argument, "unknown format '" + std::string(s) + "'");
}

RunReport run_sweep(const SweepConfig& config, const std::filesystem::path& path,
                    Format format) {
  validate(config);
  auto out = open_output(path);
  if (format == Format::jsonl) {
    out << header_line(config).dump() << '\n';
  } else {
    out << csv_header() << '\n';
  }
  auto report = run_records(config, [&](const ResultRecord& r) {
    if (format == Format::jsonl) {
      out << to_json(r).dump() << '\n';
    } else {
      out << to_csv_row(r) << '\n';
    }
  });
  out.flush();
  if (!out) throw Error(Errc::io_failure, "write failed for " + path.string());
  return report;
}

void write_summary(const RunReport& report, std::ostream& os) {
  os << report.records << " records in " << std::fixed << std::setprecision(2)
     << report.wall_seconds << " s\n";
  os.unsetf(std::ios::floatfield);
  os << std::left << std::setw(10) << "suite" << std::right << std::setw(9) << "pass"
     << std::setw(7) << "fail" << std::setw(9) << "skipped" << std::setw(7) << "info"
     << std::setw(11) << "checks" << '\n';
  for (const auto& [name, s] : report.suites) {
    os << std::left << std::setw(10) << name << std::right << std::setw(9) << s.passed
       << std::setw(7) << s.failed << std::setw(9) << s.skipped << std::setw(7) << s.info
       << std::setw(11) << s.checks << '\n';
  }
  if (!report.max_ratio.empty()) {
    os << "max ratios:\n";
    for (const auto& [q, v] : report.max_ratio) {
      os << "  " << std::left << std::setw(22) << q << std::right << std::setprecision(6) << v
         << '\n';
    }
  }
  for (const auto& m : report.baseline_messages) os << "baseline: " << m << '\n';
  if (!report.failures.empty()) {
    constexpr std::size_t kShown = 50;
    os << "failures (" << report.failures.size() << "):\n";
    for (std::size_t i = 0; i < report.failures.size() && i < kShown; ++i) {
      const auto& r = report.failures[i];
      os << "  [" << r.suite << '/' << r.quantity << "] p=" << r.p;
      if (!r.sets.empty()) os << ' ' << r.sets;
      if (!r.poly.empty()) os << " poly=" << r.poly;
      if (r.chi) os << " chi=" << *r.chi;
      os << ": " << r.reason << '\n';
      if (!r.rerun.empty()) os << "    rerun: " << r.rerun << '\n';
    }
    if (report.failures.size() > kShown) {
      os << "  ... " << report.failures.size() - kShown << " more in the JSONL output\n";
    }
  }
  os << (report.exit_code() == 0 ? "OK" : "FAILED") << '\n';
}

}  // namespace quadsum::harness
