#pragma once

#include "bikerisk/discomfort/discomfort.hpp"
#include "bikerisk/ingest/street_graph.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace bikerisk::riskmap {

using ingest::EdgeId;
using ingest::NodeId;

struct WeightedEdge {
  NodeId a = 0;
  NodeId b = 0;
  double length_m = 0.0;
  double grade = 0.0;  // a -> b
  double risk = 0.0;   // w_r
  double discomfort_forward = 0.0;   // w_d riding a -> b
  double discomfort_backward = 0.0;  // w_d riding b -> a
  bool routable = true;

  double discomfort_from(NodeId from) const {
    return from == a ? discomfort_forward : discomfort_backward;
  }
  NodeId other(NodeId from) const { return from == a ? b : a; }
};

struct WeightedStreetGraph {
  std::vector<ingest::StreetNode> nodes;
  std::vector<WeightedEdge> edges;

  /// Throws DataError on dangling endpoints, self-loops, or weights that are
  /// negative or non-finite.
  void validate() const;
};

struct EdgeRisk;

WeightedStreetGraph combine(const ingest::StreetGraph& graph, const EdgeRisk& risk,
                            const discomfort::EdgeDiscomfort& discomfort);

/// {"nodes":[{id,lat,lon,alt}], "edges":[{id,a,b,length_m,grade,w_r,w_d,w_d_reverse,routable}]}
nlohmann::json weighted_graph_to_json(const WeightedStreetGraph& graph);
WeightedStreetGraph weighted_graph_from_json(const nlohmann::json& doc);

}  // namespace bikerisk::riskmap
