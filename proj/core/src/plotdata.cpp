#include <iomanip>
#include <ostream>
#include <sstream>

#include "quadsum/error.hpp"
#include "quadsum/harness.hpp"

namespace quadsum::harness {

PlotKind parse_plot_kind(std::string_view s) {
  if (s == "ratio-vs-cardinality") return PlotKind::ratio_vs_cardinality;
  if (s == "bound-vs-p") return PlotKind::bound_vs_p;
  if (s == "winner-map") return PlotKind::winner_map;
  throw Error(Errc::unknown_kind, "unknown plot kind '" + std::string(s) +
                                      "' (ratio-vs-cardinality, bound-vs-p, winner-map)");
}

namespace {

// Empty text would shift gnuplot columns.
std::string word(const std::string& s) { return s.empty() ? "-" : s; }

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string bound_value(const ResultRecord& r, const char* name) {
  const auto& b = r.detail.value("bounds", nlohmann::ordered_json::object());
  if (!b.contains(name)) return "NaN";
  return num(b[name].value("value", 0.0));
}

}  // namespace

void emit_plot_data(std::span<const ResultRecord> dataset, PlotKind kind, std::ostream& os) {
  switch (kind) {
    case PlotKind::ratio_vs_cardinality:
      os << "# card p ratio regime quantity\n";
      for (const auto& r : dataset) {
        if (r.suite != "ratio" || !r.ratio) continue;
        os << r.card << ' ' << r.p << ' ' << num(*r.ratio) << ' ' << word(r.regime) << ' '
           << r.quantity << '\n';
      }
      break;
    case PlotKind::bound_vs_p:
      os << "# p weil ccp cp macourt trivial exact\n";
      for (const auto& r : dataset) {
        if (r.suite != "bounds" || !r.detail.contains("bounds")) continue;
        os << r.p << ' ' << bound_value(r, "weil") << ' ' << bound_value(r, "ccp") << ' '
           << bound_value(r, "cp") << ' ' << bound_value(r, "macourt") << ' '
           << bound_value(r, "trivial") << ' ' << (r.value ? num(*r.value) : "NaN") << '\n';
      }
      break;
    case PlotKind::winner_map:
      os << "# p klmn winner\n";
      for (const auto& r : dataset) {
        if (r.suite != "bounds" || !r.detail.contains("winner")) continue;
        os << r.p << ' ' << num(r.detail.value("klmn", 0.0)) << ' '
           << r.detail["winner"].get<std::string>() << '\n';
      }
      break;
  }
}

}  // namespace quadsum::harness
