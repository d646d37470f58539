#pragma once

#include "bikerisk/ingest/accidents.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bikerisk::analytics {

enum class Grouping { Year, Month, HourWeekday, Cause };

/// Accepts "yearly"/"year", "monthly"/"month", "hourweekday"/"hour-weekday",
/// "cause". Throws ValidationError otherwise.
Grouping parse_grouping(std::string_view name);
std::string_view to_string(Grouping g);

struct GroupStats {
  std::string key;        // "2014", "3", "2-07" (weekday-hour), "rear-end"
  std::size_t count = 0;
  std::size_t severe = 0;  // Severe and Death together
  std::optional<double> severe_fraction;  // absent for empty groups
  std::optional<double> standard_error;   // sqrt(p (1 - p) / N)
};

struct SeverityStats {
  Grouping grouping = Grouping::Year;
  std::vector<GroupStats> groups;
  std::size_t total = 0;
  std::size_t light = 0;
  std::size_t severe = 0;
  std::size_t death = 0;

  /// (severe + death) / total
  double overall_severe_fraction() const;
};

/// Groups cover every year between the first and last observed one, all 12
/// months, all 7x24 weekday-hour slots, or all causes, so empty groups show
/// up with an absent fraction. Deaths count as severe here only.
SeverityStats severity_stats(std::span<const ingest::AccidentRecord> records, Grouping grouping);

/// Columns: group,count,severe,p,sigma (p and sigma blank for empty groups).
std::string stats_to_csv(const SeverityStats& stats);
nlohmann::json stats_to_json(const SeverityStats& stats);

}  // namespace bikerisk::analytics
