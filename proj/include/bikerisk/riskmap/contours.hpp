#pragma once

#include "bikerisk/density/grid.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <vector>

namespace bikerisk::riskmap {

struct ContourLine {
  double level = 0.0;
  std::vector<GeoPoint> points;
  bool closed = false;  // first point repeated at the end
};

struct ContourSet {
  std::vector<double> levels;
  std::vector<ContourLine> lines;

  std::size_t count(double level) const;
  std::size_t closed_count(double level) const;
};

/// Marching-squares iso-lines. A vertex is "above" when value >= level;
/// ambiguous saddle cells are resolved by the cell-center average. Levels
/// must be strictly increasing.
ContourSet extract_contours(const density::RiskGrid& grid, std::span<const double> levels);

/// FeatureCollection of LineString features with `level` and `closed`
/// properties, plus a "style" member describing the risk colour ramp.
nlohmann::json contours_to_geojson(const ContourSet& contours);

}  // namespace bikerisk::riskmap
