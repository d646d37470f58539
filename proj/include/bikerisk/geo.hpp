#pragma once

#include <cmath>
#include <string>

namespace bikerisk {

/// WGS84 coordinate in degrees.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Mean Earth radius (IUGG) in meters.
inline constexpr double kEarthRadiusM = 6371008.8;

bool is_valid(const GeoPoint& p);

/// Great-circle distance in meters.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

/// Axis-aligned lat/lon box. Construct through make() to enforce min < max.
struct BoundingBox {
  GeoPoint min;
  GeoPoint max;

  static BoundingBox make(double min_lat, double min_lon, double max_lat, double max_lon);

  double lat_span() const { return max.lat - min.lat; }
  double lon_span() const { return max.lon - min.lon; }

  /// Closed containment, boundary included.
  bool contains(const GeoPoint& p) const {
    return p.lat >= min.lat && p.lat <= max.lat && p.lon >= min.lon && p.lon <= max.lon;
  }

  BoundingBox expanded(double margin_deg) const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

std::string to_string(const GeoPoint& p);
std::string to_string(const BoundingBox& b);

/// Parses "lat,lon".
GeoPoint parse_geo_point(const std::string& text);

}  // namespace bikerisk
