#pragma once

#include "bikerisk/analytics/stats.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bikerisk::analytics {

struct ClimateMonth {
  int month = 1;
  double temperature_c = 0.0;
  double precipitation_mm = 0.0;
};

/// CSV with columns month, temperature_c, precipitation_mm.
std::vector<ClimateMonth> load_climate(std::string_view csv);

struct ClimateRow {
  GroupStats stats;
  int month = 1;
  double temperature_c = 0.0;
  double precipitation_mm = 0.0;
};

/// Month-keyed join of monthly stats with the climate table. Throws
/// DataError naming the months the climate table lacks.
std::vector<ClimateRow> join_climate(const SeverityStats& monthly,
                                     const std::vector<ClimateMonth>& climate);

std::string climate_to_csv(const std::vector<ClimateRow>& rows);

}  // namespace bikerisk::analytics
