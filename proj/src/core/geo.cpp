#include "bikerisk/geo.hpp"

#include "bikerisk/error.hpp"
#include "bikerisk/format.hpp"

#include <numbers>

namespace bikerisk {

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (b.lat - a.lat) * kRad;
  const double dlon = (b.lon - a.lon) * kRad;
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(a.lat * kRad) * std::cos(b.lat * kRad) * s2 * s2;
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

BoundingBox BoundingBox::make(double min_lat, double min_lon, double max_lat, double max_lon) {
  BoundingBox box{{min_lat, min_lon}, {max_lat, max_lon}};
  if (!is_valid(box.min) || !is_valid(box.max)) {
    throw ValidationError("bounding box corner outside WGS84 range: " + to_string(box));
  }
  if (!(min_lat < max_lat) || !(min_lon < max_lon)) {
    throw ValidationError("bounding box must satisfy min < max: " + to_string(box));
  }
  return box;
}

BoundingBox BoundingBox::expanded(double margin_deg) const {
  return BoundingBox{{min.lat - margin_deg, min.lon - margin_deg},
                     {max.lat + margin_deg, max.lon + margin_deg}};
}

std::string to_string(const GeoPoint& p) {
  return format_double(p.lat) + "," + format_double(p.lon);
}

std::string to_string(const BoundingBox& b) {
  return "[" + to_string(b.min) + " .. " + to_string(b.max) + "]";
}

GeoPoint parse_geo_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw ValidationError("expected 'lat,lon', got '" + text + "'");
  }
  GeoPoint p{parse_double(text.substr(0, comma), "latitude"),
             parse_double(text.substr(comma + 1), "longitude")};
  if (!is_valid(p)) {
    throw ValidationError("coordinate out of range: '" + text + "'");
  }
  return p;
}

}  // namespace bikerisk
