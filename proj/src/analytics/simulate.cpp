#include "bikerisk/analytics/simulate.hpp"

#include "bikerisk/csv.hpp"
#include "bikerisk/format.hpp"
#include "bikerisk/parallel.hpp"

#include <algorithm>

namespace bikerisk::analytics {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// Unbiased draw from [0, n) by rejection.
std::uint64_t bounded(std::uint64_t& state, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const auto x = splitmix64(state);
    if (x >= threshold) return x % n;
  }
}

std::vector<router::NodeId> largest_component(const router::Router& router) {
  const auto& adjacency = router.adjacency();
  const auto n = adjacency.size();
  std::vector<std::uint32_t> comp(n, UINT32_MAX);
  std::vector<router::NodeId> best;
  std::uint32_t next = 0;
  for (router::NodeId s = 0; s < n; ++s) {
    if (comp[s] != UINT32_MAX) continue;
    std::vector<router::NodeId> members{s};
    comp[s] = next;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (const auto& inc : adjacency[members[i]]) {
        if (comp[inc.to] == UINT32_MAX) {
          comp[inc.to] = next;
          members.push_back(inc.to);
        }
      }
    }
    ++next;
    if (members.size() > best.size()) best = std::move(members);
  }
  std::sort(best.begin(), best.end());
  return best;
}

AlphaCounts count_traversals(const router::Router& router, const std::vector<OdPair>& pairs,
                             double alpha, unsigned threads) {
  std::vector<std::vector<router::EdgeId>> routes(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      routes[i] = router.route_between(pairs[i].from, pairs[i].to, alpha).edges;
    }
  });
  AlphaCounts out;
  out.alpha = alpha;
  out.counts.assign(router.graph().edges.size(), 0);
  for (const auto& edges : routes) {
    for (auto e : edges) ++out.counts[e];
    out.route_edges += edges.size();
  }
  return out;
}

}  // namespace

SimulationResult simulate_od(const router::Router& router, const SimulationOptions& options) {
  if (options.pairs == 0) throw ValidationError("at least one OD pair is required");
  if (options.alphas.empty()) throw ValidationError("at least one alpha is required");
  for (double a : options.alphas) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ValidationError("alpha must lie in [0, 1], got " + format_double(a));
    }
  }
  const auto nodes = largest_component(router);
  if (nodes.size() < 2) throw DataError("the network has fewer than two connected nodes");

  SimulationResult result;
  result.pairs.resize(options.pairs);
  std::vector<std::size_t> degenerate(options.pairs, 0);
  for (std::size_t i = 0; i < options.pairs; ++i) {
    std::uint64_t mix = options.seed ^ (0xd1b54a32d192ed03ULL * (i + 1));
    std::uint64_t state = splitmix64(mix);
    for (std::size_t draw = 0;; ++draw) {
      if (draw == options.max_draws) {
        throw DataError("could not draw a distinct OD pair after " +
                        std::to_string(options.max_draws) + " attempts");
      }
      const auto from = nodes[bounded(state, nodes.size())];
      const auto to = nodes[bounded(state, nodes.size())];
      if (from != to) {
        result.pairs[i] = {from, to};
        break;
      }
      ++result.degenerate_redraws;
    }
  }

  result.reference = count_traversals(router, result.pairs, 0.0, options.threads);
  for (double a : options.alphas) {
    result.per_alpha.push_back(a == 0.0 ? result.reference
                                        : count_traversals(router, result.pairs, a, options.threads));
  }
  return result;
}

std::vector<UtilizationDelta> utilization_deltas(const SimulationResult& result) {
  std::vector<UtilizationDelta> out;
  for (const auto& counts : result.per_alpha) {
    UtilizationDelta d;
    d.alpha_ref = result.reference.alpha;
    d.alpha_cmp = counts.alpha;
    d.ref_counts = result.reference.counts;
    d.cmp_counts = counts.counts;
    d.delta.resize(d.ref_counts.size());
    for (std::size_t e = 0; e < d.delta.size(); ++e) {
      d.delta[e] = static_cast<std::int64_t>(d.cmp_counts[e]) -
                   static_cast<std::int64_t>(d.ref_counts[e]);
    }
    out.push_back(std::move(d));
  }
  return out;
}

nlohmann::json delta_to_geojson(const UtilizationDelta& delta,
                                const riskmap::WeightedStreetGraph& graph) {
  nlohmann::json features = nlohmann::json::array();
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& edge = graph.edges[e];
    const auto& a = graph.nodes[edge.a].location;
    const auto& b = graph.nodes[edge.b].location;
    features.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "LineString"}, {"coordinates", {{a.lon, a.lat}, {b.lon, b.lat}}}}},
         {"properties",
          {{"edge", e}, {"ref_count", delta.ref_counts[e]}, {"count", delta.cmp_counts[e]},
           {"delta", delta.delta[e]}}}});
  }
  return {{"type", "FeatureCollection"},
          {"alpha_ref", delta.alpha_ref},
          {"alpha", delta.alpha_cmp},
          {"style", {{"increase", "#e66101"}, {"decrease", "#5e3c99"}}},
          {"features", std::move(features)}};
}

std::string delta_to_csv(const UtilizationDelta& delta, const riskmap::WeightedStreetGraph& graph) {
  std::string out = csv_line({"edge", "a", "b", "ref_count", "count", "delta"});
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    out += csv_line({std::to_string(e), std::to_string(graph.edges[e].a),
                     std::to_string(graph.edges[e].b), std::to_string(delta.ref_counts[e]),
                     std::to_string(delta.cmp_counts[e]), std::to_string(delta.delta[e])});
  }
  return out;
}

}  // namespace bikerisk::analytics
