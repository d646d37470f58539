#pragma once

#include "bikerisk/geo.hpp"
#include "bikerisk/severity.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bikerisk::ingest {

enum class Cause { SelfCaused, HeadOn, CrossingLanes, Overtaking, RearEnd, Turning, Other };

inline constexpr std::array<Cause, 7> kAllCauses = {Cause::SelfCaused,    Cause::HeadOn,
                                                    Cause::CrossingLanes, Cause::Overtaking,
                                                    Cause::RearEnd,       Cause::Turning,
                                                    Cause::Other};

std::string_view to_string(Cause c);
/// Accepts the kebab-case names of to_string plus a few common spellings;
/// anything unrecognised maps to Cause::Other.
Cause parse_cause(std::string_view label);

struct Timestamp {
  int year = 0;
  int month = 1;    // 1..12
  int weekday = 1;  // 1 = Monday .. 7 = Sunday
  int hour = 0;     // 0..23

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

struct AccidentRecord {
  std::string id;
  GeoPoint location;
  Severity severity = Severity::Light;
  Cause cause = Cause::Other;
  Timestamp time;
  std::string street_type;

  friend bool operator==(const AccidentRecord&, const AccidentRecord&) = default;
};

/// Column map and label vocabulary for accident files.
struct AccidentSchema {
  std::string id_column = "id";
  std::string lat_column = "lat";
  std::string lon_column = "lon";
  std::string severity_column = "severity";
  std::string cause_column = "cause";
  std::string year_column = "year";
  std::string month_column = "month";
  std::string weekday_column = "weekday";
  std::string hour_column = "hour";
  std::string street_type_column = "street_type";

  /// Lower-case label -> class.
  std::map<std::string, Severity> severity_labels = {
      {"light", Severity::Light},   {"light injury", Severity::Light},
      {"1", Severity::Light},       {"severe", Severity::Severe},
      {"severe injury", Severity::Severe}, {"2", Severity::Severe},
      {"death", Severity::Death},   {"fatal", Severity::Death},
      {"3", Severity::Death}};

  int min_year = 1900;
  int max_year = 2100;

  /// Records outside are dropped and counted.
  std::optional<BoundingBox> bounds;
};

enum class AccidentFormat { Csv, Json };

struct RowError {
  std::size_t row = 0;  // 1-based data row (header excluded)
  std::string message;
};

struct AccidentLoad {
  std::vector<AccidentRecord> records;
  std::vector<RowError> errors;
  std::size_t duplicates_removed = 0;
  std::size_t out_of_bounds = 0;
};

/// Parses accident rows, keeping the first record per id. CSV needs a header
/// row naming the schema columns; JSON is an array of objects (or an object
/// with a "records" array) keyed by the same names.
AccidentLoad load_accidents(std::string_view source, AccidentFormat format,
                            const AccidentSchema& schema = {});

/// Drops later records whose id was already seen. Returns the number removed.
std::size_t dedup_by_id(std::vector<AccidentRecord>& records);

/// Normalized CSV using the default schema's column names.
std::string write_accidents_csv(std::span<const AccidentRecord> records);

std::vector<GeoPoint> locations(std::span<const AccidentRecord> records);

}  // namespace bikerisk::ingest
