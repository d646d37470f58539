#include "bikerisk/riskmap/weighted_graph.hpp"

#include "bikerisk/error.hpp"
#include "bikerisk/riskmap/edge_risk.hpp"

#include <cmath>

namespace bikerisk::riskmap {

void WeightedStreetGraph::validate() const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != i) throw DataError("node ids must equal their index");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.a >= nodes.size() || e.b >= nodes.size()) {
      throw DataError("edge " + std::to_string(i) + " references a missing node");
    }
    if (e.a == e.b) throw DataError("edge " + std::to_string(i) + " is a self-loop");
    for (double w : {e.length_m, e.risk, e.discomfort_forward, e.discomfort_backward}) {
      if (!std::isfinite(w) || w < 0.0) {
        throw DataError("edge " + std::to_string(i) + " has a negative or non-finite weight");
      }
    }
  }
}

WeightedStreetGraph combine(const ingest::StreetGraph& graph, const EdgeRisk& risk,
                            const discomfort::EdgeDiscomfort& discomfort) {
  const auto n = graph.edges.size();
  if (risk.risk.size() != n || discomfort.forward.size() != n || discomfort.backward.size() != n) {
    throw DataError("edge weight vectors do not match the graph");
  }
  WeightedStreetGraph out;
  out.nodes = graph.nodes;
  out.edges.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = graph.edges[i];
    out.edges.push_back({e.a, e.b, e.length_m, e.grade, risk.risk[i], discomfort.forward[i],
                         discomfort.backward[i], risk.routable[i] != 0});
  }
  out.validate();
  return out;
}

nlohmann::json weighted_graph_to_json(const WeightedStreetGraph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : graph.nodes) {
    nodes.push_back({{"id", n.id},
                     {"lat", n.location.lat},
                     {"lon", n.location.lon},
                     {"alt", n.altitude ? nlohmann::json(*n.altitude) : nlohmann::json(nullptr)}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const auto& e = graph.edges[i];
    edges.push_back({{"id", i},
                     {"a", e.a},
                     {"b", e.b},
                     {"length_m", e.length_m},
                     {"grade", e.grade},
                     {"w_r", e.risk},
                     {"w_d", e.discomfort_forward},
                     {"w_d_reverse", e.discomfort_backward},
                     {"routable", e.routable}});
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

WeightedStreetGraph weighted_graph_from_json(const nlohmann::json& doc) {
  WeightedStreetGraph g;
  try {
    for (const auto& n : doc.at("nodes")) {
      ingest::StreetNode node;
      node.id = n.at("id").get<NodeId>();
      node.location = {n.at("lat").get<double>(), n.at("lon").get<double>()};
      if (n.contains("alt") && !n["alt"].is_null()) node.altitude = n["alt"].get<double>();
      g.nodes.push_back(node);
    }
    for (const auto& e : doc.at("edges")) {
      WeightedEdge edge;
      edge.a = e.at("a").get<NodeId>();
      edge.b = e.at("b").get<NodeId>();
      edge.length_m = e.at("length_m").get<double>();
      edge.grade = e.value("grade", 0.0);
      edge.risk = e.at("w_r").get<double>();
      edge.discomfort_forward = e.at("w_d").get<double>();
      edge.discomfort_backward = e.value("w_d_reverse", edge.discomfort_forward);
      edge.routable = e.value("routable", true);
      g.edges.push_back(edge);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed weighted graph JSON: ") + e.what());
  }
  g.validate();
  return g;
}

}  // namespace bikerisk::riskmap
