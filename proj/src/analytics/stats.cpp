#include "bikerisk/analytics/stats.hpp"

#include "bikerisk/csv.hpp"
#include "bikerisk/error.hpp"
#include "bikerisk/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace bikerisk::analytics {

Grouping parse_grouping(std::string_view name) {
  const auto n = to_lower(name);
  if (n == "yearly" || n == "year") return Grouping::Year;
  if (n == "monthly" || n == "month") return Grouping::Month;
  if (n == "hourweekday" || n == "hour-weekday" || n == "weekday-hour") return Grouping::HourWeekday;
  if (n == "cause") return Grouping::Cause;
  throw ValidationError("unknown grouping '" + std::string(name) +
                        "' (expected yearly, monthly, hourweekday or cause)");
}

std::string_view to_string(Grouping g) {
  switch (g) {
    case Grouping::Year: return "yearly";
    case Grouping::Month: return "monthly";
    case Grouping::HourWeekday: return "hourweekday";
    case Grouping::Cause: return "cause";
  }
  return "yearly";
}

double SeverityStats::overall_severe_fraction() const {
  return total == 0 ? 0.0 : static_cast<double>(severe + death) / static_cast<double>(total);
}

namespace {

std::string weekday_hour_key(int weekday, int hour) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%d-%02d", weekday, hour);
  return buf;
}

}  // namespace

SeverityStats severity_stats(std::span<const ingest::AccidentRecord> records, Grouping grouping) {
  if (records.empty()) throw DataError("no accident records to summarize");
  SeverityStats stats;
  stats.grouping = grouping;

  std::vector<std::string> keys;
  int first_year = 0;
  auto key_index = [&](const ingest::AccidentRecord& r) -> std::size_t {
    switch (grouping) {
      case Grouping::Year: return static_cast<std::size_t>(r.time.year - first_year);
      case Grouping::Month: return static_cast<std::size_t>(r.time.month - 1);
      case Grouping::HourWeekday:
        return static_cast<std::size_t>((r.time.weekday - 1) * 24 + r.time.hour);
      case Grouping::Cause: return static_cast<std::size_t>(r.cause);
    }
    return 0;
  };

  switch (grouping) {
    case Grouping::Year: {
      const auto [lo, hi] = std::minmax_element(
          records.begin(), records.end(),
          [](const auto& a, const auto& b) { return a.time.year < b.time.year; });
      first_year = lo->time.year;
      for (int y = lo->time.year; y <= hi->time.year; ++y) keys.push_back(std::to_string(y));
      break;
    }
    case Grouping::Month:
      for (int m = 1; m <= 12; ++m) keys.push_back(std::to_string(m));
      break;
    case Grouping::HourWeekday:
      for (int w = 1; w <= 7; ++w) {
        for (int h = 0; h < 24; ++h) keys.push_back(weekday_hour_key(w, h));
      }
      break;
    case Grouping::Cause:
      for (auto c : ingest::kAllCauses) keys.emplace_back(ingest::to_string(c));
      break;
  }

  stats.groups.resize(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) stats.groups[i].key = keys[i];

  for (const auto& r : records) {
    const auto idx = key_index(r);
    if (idx >= stats.groups.size()) {
      throw DataError("record " + r.id + " has a timestamp outside the grouping range");
    }
    auto& g = stats.groups[idx];
    ++g.count;
    ++stats.total;
    switch (r.severity) {
      case Severity::Light: ++stats.light; break;
      case Severity::Severe: ++stats.severe; ++g.severe; break;
      case Severity::Death: ++stats.death; ++g.severe; break;
    }
  }
  for (auto& g : stats.groups) {
    if (g.count == 0) continue;
    const double p = static_cast<double>(g.severe) / static_cast<double>(g.count);
    g.severe_fraction = p;
    g.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(g.count));
  }
  return stats;
}

std::string stats_to_csv(const SeverityStats& stats) {
  std::string out = csv_line({"group", "count", "severe", "p", "sigma"});
  for (const auto& g : stats.groups) {
    out += csv_line({g.key, std::to_string(g.count), std::to_string(g.severe),
                     g.severe_fraction ? format_double(*g.severe_fraction) : "",
                     g.standard_error ? format_double(*g.standard_error) : ""});
  }
  return out;
}

nlohmann::json stats_to_json(const SeverityStats& stats) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : stats.groups) {
    groups.push_back({{"group", g.key},
                      {"count", g.count},
                      {"severe", g.severe},
                      {"p", g.severe_fraction ? nlohmann::json(*g.severe_fraction) : nullptr},
                      {"sigma", g.standard_error ? nlohmann::json(*g.standard_error) : nullptr}});
  }
  return {{"grouping", to_string(stats.grouping)},
          {"total", stats.total},
          {"light", stats.light},
          {"severe", stats.severe},
          {"death", stats.death},
          {"severe_fraction", stats.overall_severe_fraction()},
          {"groups", std::move(groups)}};
}

}  // namespace bikerisk::analytics
