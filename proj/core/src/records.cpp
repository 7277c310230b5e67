#include <fstream>
#include <iomanip>
#include <sstream>

#include "quadsum/error.hpp"
#include "quadsum/harness.hpp"

namespace quadsum::harness {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view status_name(Status s) noexcept {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
    case Status::info: return "info";
  }
  return "info";
}

Status parse_status(std::string_view s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "skipped") return Status::skipped;
  if (s == "info") return Status::info;
  throw Error(Errc::invalid_argument, "unknown status '" + std::string(s) + "'");
}

ordered_json to_json(const ResultRecord& r) {
  ordered_json j;
  j["schema"] = kSchemaVersion;
  j["seq"] = r.seq;
  j["sub"] = r.sub;
  j["suite"] = r.suite;
  j["quantity"] = r.quantity;
  j["p"] = r.p;
  j["poly"] = r.poly;
  j["chi"] = r.chi ? ordered_json(*r.chi) : ordered_json(nullptr);
  j["sets"] = r.sets;
  j["card"] = r.card;
  j["value"] = r.value ? ordered_json(*r.value) : ordered_json(nullptr);
  j["bound"] = r.bound ? ordered_json(*r.bound) : ordered_json(nullptr);
  j["ratio"] = r.ratio ? ordered_json(*r.ratio) : ordered_json(nullptr);
  j["regime"] = r.regime;
  j["status"] = std::string(status_name(r.status));
  j["reason"] = r.reason;
  j["rerun"] = r.rerun;
  j["detail"] = r.detail;
  if (r.wall_ms) j["wall_ms"] = *r.wall_ms;
  return j;
}

namespace {

std::optional<double> opt_double(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_number()) throw Error(Errc::invalid_argument, std::string(key) + " must be numeric");
  return j[key].get<double>();
}

}  // namespace

ResultRecord record_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema") || j["schema"] != kSchemaVersion) {
    throw Error(Errc::invalid_argument, "record lacks schema version " +
                                            std::to_string(kSchemaVersion));
  }
  try {
    ResultRecord r;
    r.seq = j.at("seq").get<std::uint64_t>();
    r.sub = j.at("sub").get<std::uint32_t>();
    r.suite = j.at("suite").get<std::string>();
    r.quantity = j.at("quantity").get<std::string>();
    r.p = j.at("p").get<std::uint64_t>();
    r.poly = j.value("poly", "");
    if (j.contains("chi") && !j["chi"].is_null()) r.chi = j["chi"].get<std::uint64_t>();
    r.sets = j.value("sets", "");
    r.card = j.value("card", std::uint64_t{0});
    r.value = opt_double(j, "value");
    r.bound = opt_double(j, "bound");
    r.ratio = opt_double(j, "ratio");
    r.regime = j.value("regime", "");
    r.status = parse_status(j.at("status").get<std::string>());
    r.reason = j.value("reason", "");
    r.rerun = j.value("rerun", "");
    if (j.contains("detail")) r.detail = ordered_json::parse(j["detail"].dump());
    r.wall_ms = opt_double(j, "wall_ms");
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_argument, std::string("malformed record: ") + e.what());
  }
}

std::string csv_header() {
  return "schema,seq,sub,suite,quantity,p,poly,chi,sets,card,value,bound,ratio,regime,status,"
         "reason,rerun,detail,winner";
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string num(const std::optional<double>& v) {
  if (!v) return "";
  // Same shortest round-trip text as the JSONL output.
  return ordered_json(*v).dump();
}

}  // namespace

std::string to_csv_row(const ResultRecord& r) {
  std::ostringstream os;
  os << kSchemaVersion << ',' << r.seq << ',' << r.sub << ',' << csv_escape(r.suite) << ','
     << csv_escape(r.quantity) << ',' << r.p << ',' << csv_escape(r.poly) << ','
     << (r.chi ? std::to_string(*r.chi) : "") << ',' << csv_escape(r.sets) << ',' << r.card
     << ',' << num(r.value) << ',' << num(r.bound) << ',' << num(r.ratio) << ','
     << csv_escape(r.regime) << ',' << status_name(r.status) << ',' << csv_escape(r.reason)
     << ',' << csv_escape(r.rerun) << ',' << csv_escape(r.detail.dump()) << ','
     << (r.detail.contains("winner") ? csv_escape(r.detail["winner"].get<std::string>()) : "");
  return os.str();
}

std::vector<ResultRecord> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot read dataset " + path.string());
  std::vector<ResultRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(Errc::invalid_argument,
                  path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (j.contains("header")) continue;
    out.push_back(record_from_json(j));
  }
  return out;
}

}  // namespace quadsum::harness
