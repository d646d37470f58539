#pragma once

#include "bikerisk/error.hpp"
#include "bikerisk/geo.hpp"
#include "bikerisk/riskmap/weighted_graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bikerisk::router {

using ingest::EdgeId;
using ingest::NodeId;

class NoRouteError : public DataError {
 public:
  using DataError::DataError;
};

struct RouteQuery {
  GeoPoint departure;
  GeoPoint destination;
  std::vector<GeoPoint> waypoints;
  double alpha = 0.3;

  /// Throws ValidationError when alpha is outside [0, 1] or a point is invalid.
  void validate() const;
};

struct Route {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
  double total_risk = 0.0;        // raw w_r
  double total_discomfort = 0.0;  // raw directed w_d
  double total_cost = 0.0;        // blended cost the search minimized
  double total_length_m = 0.0;
  std::optional<double> alpha;

  friend bool operator==(const Route&, const Route&) = default;
};

struct BlendOptions {
  /// Divide w_r and w_d by their network means before blending. When false
  /// the raw weights are blended as they are.
  bool normalize = true;
};

/// Divisors applied to the two weight families.
struct WeightScales {
  double risk = 1.0;
  double discomfort = 1.0;
  std::vector<std::string> warnings;
};

/// Network means over routable edges (w_d over both directions). A family
/// whose mean is zero gets divisor 1 and a warning.
WeightScales weight_scales(const riskmap::WeightedStreetGraph& graph, const BlendOptions& options);

/// Cost of riding `edge` starting at `from`.
inline double blended_cost(const riskmap::WeightedEdge& edge, NodeId from, double alpha,
                           const WeightScales& scales) {
  return alpha * (edge.risk / scales.risk) +
         (1.0 - alpha) * (edge.discomfort_from(from) / scales.discomfort);
}

/// Per-edge blended costs in both riding directions.
struct EdgeCosts {
  double alpha = 0.0;
  WeightScales scales;
  std::vector<double> forward;
  std::vector<double> backward;
};

EdgeCosts blend_weights(const riskmap::WeightedStreetGraph& graph, double alpha,
                        const BlendOptions& options = {});

struct NodeMatch {
  NodeId node = 0;
  double distance_m = 0.0;
  std::optional<std::string> warning;  // set beyond kFarMatchM
};

inline constexpr double kFarMatchM = 500.0;

/// Closest node by great-circle distance, lowest id on ties. Throws
/// ValidationError on an empty graph.
NodeMatch nearest_node(const riskmap::WeightedStreetGraph& graph, const GeoPoint& p);

struct Incidence {
  EdgeId edge;
  NodeId to;
};

/// Routable edges incident to each node, ordered by (neighbour id, edge id).
std::vector<std::vector<Incidence>> build_adjacency(const riskmap::WeightedStreetGraph& graph);

/// Sums the raw and blended totals of `edges` ridden from `nodes.front()`.
Route make_route(const riskmap::WeightedStreetGraph& graph, std::vector<NodeId> nodes,
                 std::vector<EdgeId> edges, std::optional<double> alpha, const WeightScales& scales);

class Router {
 public:
  explicit Router(riskmap::WeightedStreetGraph graph, BlendOptions options = {});

  const riskmap::WeightedStreetGraph& graph() const { return graph_; }
  const WeightScales& scales() const { return scales_; }
  const std::vector<std::vector<Incidence>>& adjacency() const { return adjacency_; }

  /// Least blended-cost path between two nodes. Exact cost ties go to the
  /// lexicographically smaller node sequence. Throws NoRouteError.
  Route route_between(NodeId from, NodeId to, double alpha) const;

  /// Matches the query points to nodes and routes each leg independently.
  Route find_route(const RouteQuery& query, std::vector<std::string>* warnings = nullptr) const;

 private:
  riskmap::WeightedStreetGraph graph_;
  BlendOptions options_;
  WeightScales scales_;
  std::vector<std::vector<Incidence>> adjacency_;
};

}  // namespace bikerisk::router
