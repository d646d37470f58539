#include "bikerisk/router/router.hpp"

#include "bikerisk/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

namespace bikerisk::router {

void RouteQuery::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1], got " + format_double(alpha));
  }
  if (!is_valid(departure)) throw ValidationError("invalid departure " + to_string(departure));
  if (!is_valid(destination)) {
    throw ValidationError("invalid destination " + to_string(destination));
  }
  for (const auto& w : waypoints) {
    if (!is_valid(w)) throw ValidationError("invalid waypoint " + to_string(w));
  }
}

WeightScales weight_scales(const riskmap::WeightedStreetGraph& graph, const BlendOptions& options) {
  WeightScales scales;
  if (!options.normalize) return scales;
  double risk_sum = 0.0;
  double discomfort_sum = 0.0;
  std::size_t count = 0;
  for (const auto& e : graph.edges) {
    if (!e.routable) continue;
    risk_sum += e.risk;
    discomfort_sum += e.discomfort_forward + e.discomfort_backward;
    ++count;
  }
  if (count == 0) {
    scales.warnings.push_back("no routable edges; weights are left unscaled");
    return scales;
  }
  const double risk_mean = risk_sum / static_cast<double>(count);
  const double discomfort_mean = discomfort_sum / static_cast<double>(2 * count);
  if (risk_mean > 0.0) {
    scales.risk = risk_mean;
  } else {
    scales.warnings.push_back("risk weights are all zero; risk normalizer set to 1");
  }
  if (discomfort_mean > 0.0) {
    scales.discomfort = discomfort_mean;
  } else {
    scales.warnings.push_back("discomfort weights are all zero; discomfort normalizer set to 1");
  }
  return scales;
}

EdgeCosts blend_weights(const riskmap::WeightedStreetGraph& graph, double alpha,
                        const BlendOptions& options) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1], got " + format_double(alpha));
  }
  EdgeCosts costs;
  costs.alpha = alpha;
  costs.scales = weight_scales(graph, options);
  costs.forward.reserve(graph.edges.size());
  costs.backward.reserve(graph.edges.size());
  for (const auto& e : graph.edges) {
    costs.forward.push_back(blended_cost(e, e.a, alpha, costs.scales));
    costs.backward.push_back(blended_cost(e, e.b, alpha, costs.scales));
  }
  return costs;
}

NodeMatch nearest_node(const riskmap::WeightedStreetGraph& graph, const GeoPoint& p) {
  if (graph.nodes.empty()) throw ValidationError("cannot match a point on an empty graph");
  NodeMatch best;
  best.distance_m = std::numeric_limits<double>::infinity();
  for (const auto& n : graph.nodes) {
    const double d = haversine_m(p, n.location);
    if (d < best.distance_m || (d == best.distance_m && n.id < best.node)) {
      best.node = n.id;
      best.distance_m = d;
    }
  }
  if (best.distance_m > kFarMatchM) {
    best.warning = "point " + to_string(p) + " is " + format_fixed6(best.distance_m) +
                   " m from the nearest node " + std::to_string(best.node);
  }
  return best;
}

std::vector<std::vector<Incidence>> build_adjacency(const riskmap::WeightedStreetGraph& graph) {
  std::vector<std::vector<Incidence>> adjacency(graph.nodes.size());
  for (EdgeId i = 0; i < graph.edges.size(); ++i) {
    const auto& e = graph.edges[i];
    if (!e.routable) continue;
    adjacency[e.a].push_back({i, e.b});
    adjacency[e.b].push_back({i, e.a});
  }
  for (auto& list : adjacency) {
    std::sort(list.begin(), list.end(), [](const Incidence& x, const Incidence& y) {
      return std::pair(x.to, x.edge) < std::pair(y.to, y.edge);
    });
  }
  return adjacency;
}

Route make_route(const riskmap::WeightedStreetGraph& graph, std::vector<NodeId> nodes,
                 std::vector<EdgeId> edges, std::optional<double> alpha, const WeightScales& scales) {
  if (nodes.empty() || edges.size() + 1 != nodes.size()) {
    throw DataError("route needs exactly one more node than edges");
  }
  Route route;
  route.alpha = alpha;
  const double a = alpha.value_or(0.0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = graph.edges.at(edges[i]);
    const NodeId from = nodes[i];
    if (!((e.a == from && e.b == nodes[i + 1]) || (e.b == from && e.a == nodes[i + 1]))) {
      throw DataError("edge " + std::to_string(edges[i]) + " does not join nodes " +
                      std::to_string(from) + " and " + std::to_string(nodes[i + 1]));
    }
    route.total_risk += e.risk;
    route.total_discomfort += e.discomfort_from(from);
    route.total_length_m += e.length_m;
    if (alpha) route.total_cost += blended_cost(e, from, a, scales);
  }
  route.nodes = std::move(nodes);
  route.edges = std::move(edges);
  return route;
}

Router::Router(riskmap::WeightedStreetGraph graph, BlendOptions options)
    : graph_(std::move(graph)), options_(options) {
  graph_.validate();
  scales_ = weight_scales(graph_, options_);
  adjacency_ = build_adjacency(graph_);
}

namespace {

constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

struct Label {
  double cost = std::numeric_limits<double>::infinity();
  NodeId pred = kNone;
  EdgeId via = 0;
};

std::vector<NodeId> chain(const std::vector<Label>& labels, NodeId v) {
  std::vector<NodeId> out;
  for (NodeId at = v; at != kNone; at = labels[at].pred) out.push_back(at);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

Route Router::route_between(NodeId from, NodeId to, double alpha) const {
  if (from >= graph_.nodes.size() || to >= graph_.nodes.size()) {
    throw ValidationError("node id out of range");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("alpha must lie in [0, 1], got " + format_double(alpha));
  }
  if (from == to) return make_route(graph_, {from}, {}, alpha, scales_);

  std::vector<Label> labels(graph_.nodes.size());
  using Entry = std::pair<double, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  labels[from].cost = 0.0;
  open.push({0.0, from});

  while (!open.empty()) {
    const auto [cost, u] = open.top();
    open.pop();
    if (cost > labels[to].cost) break;
    if (cost != labels[u].cost || u == to) continue;
    for (const auto& inc : adjacency_[u]) {
      const double next = cost + blended_cost(graph_.edges[inc.edge], u, alpha, scales_);
      // A partial path already costlier than a complete one is abandoned.
      if (next > labels[to].cost) continue;
      auto& label = labels[inc.to];
      if (next < label.cost) {
        label = {next, u, inc.edge};
        open.push({next, inc.to});
      } else if (next == label.cost && inc.to != from && label.pred != u) {
        auto candidate = chain(labels, u);
        // Zero-cost cycles must not loop the predecessor chain back on itself.
        if (std::find(candidate.begin(), candidate.end(), inc.to) != candidate.end()) continue;
        candidate.push_back(inc.to);
        const auto current = chain(labels, inc.to);
        if (std::lexicographical_compare(candidate.begin(), candidate.end(), current.begin(),
                                         current.end())) {
          label = {next, u, inc.edge};
          open.push({next, inc.to});
        }
      }
    }
  }
  if (labels[to].pred == kNone) {
    throw NoRouteError("no route from node " + std::to_string(from) + " to node " +
                       std::to_string(to));
  }
  std::vector<NodeId> nodes = chain(labels, to);
  std::vector<EdgeId> edges;
  edges.reserve(nodes.size() - 1);
  for (std::size_t i = 1; i < nodes.size(); ++i) edges.push_back(labels[nodes[i]].via);
  return make_route(graph_, std::move(nodes), std::move(edges), alpha, scales_);
}

Route Router::find_route(const RouteQuery& query, std::vector<std::string>* warnings) const {
  query.validate();
  std::vector<GeoPoint> points;
  points.push_back(query.departure);
  points.insert(points.end(), query.waypoints.begin(), query.waypoints.end());
  points.push_back(query.destination);

  std::vector<NodeId> stops;
  for (const auto& p : points) {
    auto match = nearest_node(graph_, p);
    if (match.warning && warnings) warnings->push_back(*match.warning);
    if (stops.empty() || stops.back() != match.node) stops.push_back(match.node);
  }

  std::vector<NodeId> nodes{stops.front()};
  std::vector<EdgeId> edges;
  for (std::size_t i = 1; i < stops.size(); ++i) {
    auto leg = route_between(stops[i - 1], stops[i], query.alpha);
    nodes.insert(nodes.end(), leg.nodes.begin() + 1, leg.nodes.end());
    edges.insert(edges.end(), leg.edges.begin(), leg.edges.end());
  }
  return make_route(graph_, std::move(nodes), std::move(edges), query.alpha, scales_);
}

}  // namespace bikerisk::router
