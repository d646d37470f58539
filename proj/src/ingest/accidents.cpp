#include "bikerisk/ingest/accidents.hpp"

#include "bikerisk/csv.hpp"
#include "bikerisk/error.hpp"
#include "bikerisk/format.hpp"

#include <nlohmann/json.hpp>

#include <unordered_map>
#include <unordered_set>

namespace bikerisk::ingest {

std::string_view to_string(Cause c) {
  switch (c) {
    case Cause::SelfCaused:
      return "self-caused";
    case Cause::HeadOn:
      return "head-on";
    case Cause::CrossingLanes:
      return "crossing-lanes";
    case Cause::Overtaking:
      return "overtaking";
    case Cause::RearEnd:
      return "rear-end";
    case Cause::Turning:
      return "turning";
    case Cause::Other:
      return "other";
  }
  return "other";
}

Cause parse_cause(std::string_view label) {
  std::string key = to_lower(trim(label));
  for (auto& ch : key) {
    if (ch == '_' || ch == ' ') ch = '-';
  }
  static const std::unordered_map<std::string, Cause> kNames = {
      {"self-caused", Cause::SelfCaused},      {"self", Cause::SelfCaused},
      {"skidding", Cause::SelfCaused},         {"head-on", Cause::HeadOn},
      {"crossing-lanes", Cause::CrossingLanes}, {"crossing", Cause::CrossingLanes},
      {"overtaking", Cause::Overtaking},       {"rear-end", Cause::RearEnd},
      {"turning", Cause::Turning},             {"other", Cause::Other}};
  auto it = kNames.find(key);
  return it == kNames.end() ? Cause::Other : it->second;
}

namespace {

struct RawRow {
  std::string id, lat, lon, severity, cause, year, month, weekday, hour, street_type;
};

int ranged(std::string_view text, std::string_view what, int lo, int hi) {
  const auto v = parse_integer(text, what);
  if (v < lo || v > hi) {
    throw ValidationError(std::string(what) + " " + std::to_string(v) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

AccidentRecord to_record(const RawRow& raw, const AccidentSchema& schema) {
  AccidentRecord rec;
  rec.id = trim(raw.id);
  if (rec.id.empty()) throw ValidationError("empty id");
  rec.location = {parse_double(raw.lat, "lat"), parse_double(raw.lon, "lon")};
  if (!is_valid(rec.location)) {
    throw ValidationError("coordinate out of range: " + to_string(rec.location));
  }
  const auto label = to_lower(trim(raw.severity));
  auto it = schema.severity_labels.find(label);
  if (it == schema.severity_labels.end()) {
    throw ValidationError("unknown severity label '" + raw.severity + "'");
  }
  rec.severity = it->second;
  rec.cause = parse_cause(raw.cause);
  rec.time.year = ranged(raw.year, "year", schema.min_year, schema.max_year);
  rec.time.month = ranged(raw.month, "month", 1, 12);
  rec.time.weekday = ranged(raw.weekday, "weekday", 1, 7);
  rec.time.hour = ranged(raw.hour, "hour", 0, 23);
  rec.street_type = trim(raw.street_type);
  return rec;
}

void load_csv(std::string_view source, const AccidentSchema& schema, AccidentLoad& out) {
  const auto rows = parse_csv(source);
  if (rows.empty()) return;

  std::unordered_map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
    header.emplace(trim(rows[0].fields[i]), i);
  }
  auto column = [&](const std::string& name, bool required) -> std::ptrdiff_t {
    auto it = header.find(name);
    if (it == header.end()) {
      if (required) throw DataError("accident file lacks required column '" + name + "'");
      return -1;
    }
    return static_cast<std::ptrdiff_t>(it->second);
  };
  const auto c_id = column(schema.id_column, true);
  const auto c_lat = column(schema.lat_column, true);
  const auto c_lon = column(schema.lon_column, true);
  const auto c_sev = column(schema.severity_column, true);
  const auto c_year = column(schema.year_column, true);
  const auto c_month = column(schema.month_column, true);
  const auto c_wd = column(schema.weekday_column, true);
  const auto c_hour = column(schema.hour_column, true);
  const auto c_cause = column(schema.cause_column, false);
  const auto c_street = column(schema.street_type_column, false);
  const std::size_t width = rows[0].fields.size();

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r].fields;
    if (f.size() != width) {
      out.errors.push_back({r, "expected " + std::to_string(width) + " fields, got " +
                                   std::to_string(f.size())});
      continue;
    }
    auto get = [&](std::ptrdiff_t c) { return c < 0 ? std::string{} : f[static_cast<std::size_t>(c)]; };
    RawRow raw{get(c_id),   get(c_lat),   get(c_lon), get(c_sev),  get(c_cause),
               get(c_year), get(c_month), get(c_wd),  get(c_hour), get(c_street)};
    try {
      out.records.push_back(to_record(raw, schema));
    } catch (const Error& e) {
      out.errors.push_back({r, e.what()});
    }
  }
}

std::string json_text(const nlohmann::json& obj, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  if (it->is_number()) return format_double(it->get<double>());
  return it->dump();
}

void load_json(std::string_view source, const AccidentSchema& schema, AccidentLoad& out) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(source);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("accident JSON does not parse: ") + e.what());
  }
  const nlohmann::json* items = &doc;
  if (doc.is_object() && doc.contains("records")) items = &doc["records"];
  if (!items->is_array()) throw DataError("accident JSON must be an array of records");

  std::size_t row = 0;
  for (const auto& obj : *items) {
    ++row;
    if (!obj.is_object()) {
      out.errors.push_back({row, "record is not an object"});
      continue;
    }
    RawRow raw{json_text(obj, schema.id_column),      json_text(obj, schema.lat_column),
               json_text(obj, schema.lon_column),     json_text(obj, schema.severity_column),
               json_text(obj, schema.cause_column),   json_text(obj, schema.year_column),
               json_text(obj, schema.month_column),   json_text(obj, schema.weekday_column),
               json_text(obj, schema.hour_column),    json_text(obj, schema.street_type_column)};
    try {
      out.records.push_back(to_record(raw, schema));
    } catch (const Error& e) {
      out.errors.push_back({row, e.what()});
    }
  }
}

}  // namespace

std::size_t dedup_by_id(std::vector<AccidentRecord>& records) {
  std::unordered_set<std::string> seen;
  const auto before = records.size();
  std::erase_if(records, [&](const AccidentRecord& r) { return !seen.insert(r.id).second; });
  return before - records.size();
}

AccidentLoad load_accidents(std::string_view source, AccidentFormat format,
                            const AccidentSchema& schema) {
  AccidentLoad out;
  if (format == AccidentFormat::Csv) {
    load_csv(source, schema, out);
  } else {
    load_json(source, schema, out);
  }
  out.duplicates_removed = dedup_by_id(out.records);
  if (schema.bounds) {
    const auto before = out.records.size();
    std::erase_if(out.records,
                  [&](const AccidentRecord& r) { return !schema.bounds->contains(r.location); });
    out.out_of_bounds = before - out.records.size();
  }
  return out;
}

std::string write_accidents_csv(std::span<const AccidentRecord> records) {
  std::string out =
      csv_line({"id", "lat", "lon", "severity", "cause", "year", "month", "weekday", "hour",
                "street_type"});
  for (const auto& r : records) {
    out += csv_line({r.id, format_double(r.location.lat), format_double(r.location.lon),
                     std::string(to_string(r.severity)), std::string(to_string(r.cause)),
                     std::to_string(r.time.year), std::to_string(r.time.month),
                     std::to_string(r.time.weekday), std::to_string(r.time.hour),
                     r.street_type});
  }
  return out;
}

std::vector<GeoPoint> locations(std::span<const AccidentRecord> records) {
  std::vector<GeoPoint> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.location);
  return out;
}

}  // namespace bikerisk::ingest
