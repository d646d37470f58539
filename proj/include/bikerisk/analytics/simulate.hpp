#pragma once

#include "bikerisk/router/router.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace bikerisk::analytics {

struct SimulationOptions {
  std::size_t pairs = 2000;
  std::vector<double> alphas = {0.0, 0.5, 0.75};
  std::uint64_t seed = 7;
  unsigned threads = 0;
  /// Draws allowed per pair before giving up on finding a usable one.
  std::size_t max_draws = 1000;
};

struct OdPair {
  router::NodeId from = 0;
  router::NodeId to = 0;

  friend bool operator==(const OdPair&, const OdPair&) = default;
};

struct AlphaCounts {
  double alpha = 0.0;
  std::vector<std::uint64_t> counts;  // traversals per edge
  std::uint64_t route_edges = 0;      // summed edge count of all routes

  friend bool operator==(const AlphaCounts&, const AlphaCounts&) = default;
};

struct SimulationResult {
  std::vector<OdPair> pairs;
  std::size_t degenerate_redraws = 0;   // departure equal to destination
  AlphaCounts reference;                // alpha = 0
  std::vector<AlphaCounts> per_alpha;   // in the requested order
};

/// Uniform OD pairs over the nodes of the largest routable component, so
/// every pair is reachable. Pair i
/// draws from its own generator seeded from (seed, i), so results do not
/// depend on the thread count.
SimulationResult simulate_od(const router::Router& router, const SimulationOptions& options);

struct UtilizationDelta {
  double alpha_ref = 0.0;
  double alpha_cmp = 0.0;
  std::vector<std::uint64_t> ref_counts;
  std::vector<std::uint64_t> cmp_counts;
  std::vector<std::int64_t> delta;  // cmp - ref
};

/// One delta per requested alpha against the alpha = 0 reference.
std::vector<UtilizationDelta> utilization_deltas(const SimulationResult& result);

/// LineString per edge with `edge`, `ref_count`, `count` and `delta`.
nlohmann::json delta_to_geojson(const UtilizationDelta& delta,
                                const riskmap::WeightedStreetGraph& graph);
/// Columns: edge,a,b,ref_count,count,delta
std::string delta_to_csv(const UtilizationDelta& delta, const riskmap::WeightedStreetGraph& graph);

/// splitmix64 step, exposed for tests.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace bikerisk::analytics
