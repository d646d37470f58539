#pragma once

#include "bikerisk/router/router.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace bikerisk::router {

/// One "%.6f,%.6f" lat,lon line per node, then "risk=<total>" and
/// "discomfort=<total>", LF terminated. Totals use the shortest exact text.
std::string export_route_txt(const Route& route, const riskmap::WeightedStreetGraph& graph);

struct RouteImport {
  Route route;
  std::optional<double> file_risk;
  std::optional<double> file_discomfort;
  std::vector<std::string> warnings;
};

/// Maps each coordinate line to the node within `match_tolerance_m` and
/// rebuilds edges and totals from the graph. The text format carries no
/// alpha or blended cost, so those come back unset and zero.
RouteImport import_route_txt(std::string_view text, const Router& router,
                             double match_tolerance_m = 1.0);

nlohmann::json route_to_json(const Route& route, const riskmap::WeightedStreetGraph& graph);
Route route_from_json(const nlohmann::json& doc);

/// Single LineString feature with the totals as properties.
nlohmann::json route_to_geojson(const Route& route, const riskmap::WeightedStreetGraph& graph);

}  // namespace bikerisk::router
