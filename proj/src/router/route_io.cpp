#include "bikerisk/router/route_io.hpp"

#include "bikerisk/format.hpp"

#include <cmath>
#include <sstream>

namespace bikerisk::router {

std::string export_route_txt(const Route& route, const riskmap::WeightedStreetGraph& graph) {
  std::string out;
  for (NodeId id : route.nodes) {
    const auto& p = graph.nodes.at(id).location;
    out += format_fixed6(p.lat) + "," + format_fixed6(p.lon) + "\n";
  }
  out += "risk=" + format_double(route.total_risk) + "\n";
  out += "discomfort=" + format_double(route.total_discomfort) + "\n";
  return out;
}

namespace {

bool close_enough(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

RouteImport import_route_txt(std::string_view text, const Router& router,
                             double match_tolerance_m) {
  const auto& graph = router.graph();
  RouteImport result;
  std::vector<NodeId> nodes;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto where = "line " + std::to_string(line_no);
    if (line.rfind("risk=", 0) == 0) {
      result.file_risk = parse_double(line.substr(5), where + " risk");
      continue;
    }
    if (line.rfind("discomfort=", 0) == 0) {
      result.file_discomfort = parse_double(line.substr(11), where + " discomfort");
      continue;
    }
    GeoPoint p;
    try {
      p = parse_geo_point(line);
    } catch (const ValidationError& e) {
      throw DataError(where + ": " + e.what());
    }
    const auto match = nearest_node(graph, p);
    if (match.distance_m > match_tolerance_m) {
      throw DataError(where + ": no node within " + format_double(match_tolerance_m) + " m of " +
                      to_string(p));
    }
    if (!nodes.empty() && nodes.back() == match.node) {
      result.warnings.push_back(where + ": repeated node " + std::to_string(match.node) +
                                " ignored");
      continue;
    }
    nodes.push_back(match.node);
  }
  if (nodes.empty()) throw DataError("route file has no coordinates");

  std::vector<EdgeId> edges;
  const auto& adjacency = router.adjacency();
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const EdgeId* found = nullptr;
    for (const auto& inc : adjacency[nodes[i - 1]]) {
      if (inc.to == nodes[i]) {
        found = &inc.edge;
        break;
      }
    }
    if (!found) {
      throw DataError("nodes " + std::to_string(nodes[i - 1]) + " and " +
                      std::to_string(nodes[i]) + " are not joined by a routable edge");
    }
    edges.push_back(*found);
  }
  result.route = make_route(graph, std::move(nodes), std::move(edges), std::nullopt, router.scales());
  if (result.file_risk && !close_enough(*result.file_risk, result.route.total_risk)) {
    result.warnings.push_back("stated risk " + format_double(*result.file_risk) +
                              " differs from the network total " +
                              format_double(result.route.total_risk));
  }
  if (result.file_discomfort &&
      !close_enough(*result.file_discomfort, result.route.total_discomfort)) {
    result.warnings.push_back("stated discomfort " + format_double(*result.file_discomfort) +
                              " differs from the network total " +
                              format_double(result.route.total_discomfort));
  }
  return result;
}

nlohmann::json route_to_json(const Route& route, const riskmap::WeightedStreetGraph& graph) {
  nlohmann::json coords = nlohmann::json::array();
  for (NodeId id : route.nodes) {
    const auto& p = graph.nodes.at(id).location;
    coords.push_back({p.lat, p.lon});
  }
  return {{"nodes", route.nodes},
          {"edges", route.edges},
          {"coordinates", std::move(coords)},
          {"total_risk", route.total_risk},
          {"total_discomfort", route.total_discomfort},
          {"total_cost", route.total_cost},
          {"total_length_m", route.total_length_m},
          {"alpha", route.alpha ? nlohmann::json(*route.alpha) : nlohmann::json(nullptr)}};
}

Route route_from_json(const nlohmann::json& doc) {
  try {
    Route r;
    r.nodes = doc.at("nodes").get<std::vector<NodeId>>();
    r.edges = doc.at("edges").get<std::vector<EdgeId>>();
    r.total_risk = doc.at("total_risk").get<double>();
    r.total_discomfort = doc.at("total_discomfort").get<double>();
    r.total_cost = doc.at("total_cost").get<double>();
    r.total_length_m = doc.at("total_length_m").get<double>();
    if (doc.contains("alpha") && !doc["alpha"].is_null()) r.alpha = doc["alpha"].get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed route JSON: ") + e.what());
  }
}

nlohmann::json route_to_geojson(const Route& route, const riskmap::WeightedStreetGraph& graph) {
  nlohmann::json coords = nlohmann::json::array();
  for (NodeId id : route.nodes) {
    const auto& p = graph.nodes.at(id).location;
    coords.push_back({p.lon, p.lat});
  }
  nlohmann::json props = {{"total_risk", route.total_risk},
                          {"total_discomfort", route.total_discomfort},
                          {"total_cost", route.total_cost},
                          {"total_length_m", route.total_length_m},
                          {"nodes", route.nodes}};
  if (route.alpha) props["alpha"] = *route.alpha;
  return {{"type", "Feature"},
          {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
          {"properties", std::move(props)}};
}

}  // namespace bikerisk::router
