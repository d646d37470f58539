#include "bikerisk/analytics/climate.hpp"

#include "bikerisk/csv.hpp"
#include "bikerisk/error.hpp"
#include "bikerisk/format.hpp"

#include <algorithm>
#include <array>
#include <optional>

namespace bikerisk::analytics {

std::vector<ClimateMonth> load_climate(std::string_view csv) {
  const auto rows = parse_csv(csv);
  if (rows.empty()) throw DataError("climate table is empty");
  const auto& header = rows.front().fields;
  auto column = [&](std::initializer_list<std::string_view> names) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      const auto h = to_lower(trim(header[i]));
      for (auto n : names) {
        if (h == n) return i;
      }
    }
    throw DataError("climate table lacks a '" + std::string(*names.begin()) + "' column");
  };
  const auto month_col = column({"month"});
  const auto temp_col = column({"temperature_c", "temperature", "temp"});
  const auto precip_col = column({"precipitation_mm", "precipitation", "precip"});

  std::vector<ClimateMonth> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    const auto where = "climate line " + std::to_string(rows[i].line);
    if (f.size() != header.size()) throw DataError(where + ": wrong number of fields");
    try {
      ClimateMonth m;
      m.month = static_cast<int>(parse_integer(trim(f[month_col]), "month"));
      m.temperature_c = parse_double(trim(f[temp_col]), "temperature");
      m.precipitation_mm = parse_double(trim(f[precip_col]), "precipitation");
      if (m.month < 1 || m.month > 12) throw DataError(where + ": month out of range");
      out.push_back(m);
    } catch (const ValidationError& e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return out;
}

std::vector<ClimateRow> join_climate(const SeverityStats& monthly,
                                     const std::vector<ClimateMonth>& climate) {
  if (monthly.grouping != Grouping::Month || monthly.groups.size() != 12) {
    throw ValidationError("climate join needs monthly statistics");
  }
  std::array<std::optional<ClimateMonth>, 12> by_month;
  for (const auto& c : climate) {
    if (by_month[c.month - 1]) {
      throw DataError("climate table lists month " + std::to_string(c.month) + " twice");
    }
    by_month[c.month - 1] = c;
  }
  std::string missing;
  for (int m = 1; m <= 12; ++m) {
    if (!by_month[m - 1]) missing += (missing.empty() ? "" : ", ") + std::to_string(m);
  }
  if (!missing.empty()) throw DataError("climate table is missing months: " + missing);

  std::vector<ClimateRow> rows;
  for (int m = 1; m <= 12; ++m) {
    const auto& c = *by_month[m - 1];
    rows.push_back({monthly.groups[m - 1], m, c.temperature_c, c.precipitation_mm});
  }
  return rows;
}

std::string climate_to_csv(const std::vector<ClimateRow>& rows) {
  std::string out = csv_line(
      {"month", "count", "severe", "p", "sigma", "temperature_c", "precipitation_mm"});
  for (const auto& r : rows) {
    out += csv_line({std::to_string(r.month), std::to_string(r.stats.count),
                     std::to_string(r.stats.severe),
                     r.stats.severe_fraction ? format_double(*r.stats.severe_fraction) : "",
                     r.stats.standard_error ? format_double(*r.stats.standard_error) : "",
                     format_double(r.temperature_c), format_double(r.precipitation_mm)});
  }
  return out;
}

}  // namespace bikerisk::analytics
