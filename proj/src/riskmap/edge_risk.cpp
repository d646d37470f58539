#include "bikerisk/riskmap/edge_risk.hpp"

#include <algorithm>
#include <cmath>

namespace bikerisk::riskmap {

double interpolate_risk(const density::RiskGrid& grid, const GeoPoint& p,
                        const std::string& label) {
  const auto& g = grid.grid();
  if (!g.bbox.contains(p)) {
    throw OutsideGridError((label.empty() ? std::string("point") : label) + " at " +
                           to_string(p) + " lies outside the risk grid " + to_string(g.bbox));
  }
  const double fr = (p.lat - g.bbox.min.lat) / g.lat_step();
  const double fc = (p.lon - g.bbox.min.lon) / g.lon_step();
  const int r0 = std::clamp(static_cast<int>(std::floor(fr)), 0, grid.rows() - 2);
  const int c0 = std::clamp(static_cast<int>(std::floor(fc)), 0, grid.cols() - 2);
  const double t = std::clamp(fr - r0, 0.0, 1.0);
  const double u = std::clamp(fc - c0, 0.0, 1.0);
  const double south = (1.0 - u) * grid.at(r0, c0) + u * grid.at(r0, c0 + 1);
  const double north = (1.0 - u) * grid.at(r0 + 1, c0) + u * grid.at(r0 + 1, c0 + 1);
  return (1.0 - t) * south + t * north;
}

EdgeRisk assign_edge_risk(const density::RiskGrid& grid, const ingest::StreetGraph& graph,
                          const EdgeRiskOptions& options) {
  EdgeRisk out;
  out.risk.assign(graph.edges.size(), 0.0);
  out.routable.assign(graph.edges.size(), 1);

  std::vector<double> node_risk(graph.nodes.size(), 0.0);
  std::vector<char> node_ok(graph.nodes.size(), 1);
  for (const auto& n : graph.nodes) {
    try {
      node_risk[n.id] = interpolate_risk(grid, n.location, "node " + std::to_string(n.id));
    } catch (const OutsideGridError& e) {
      node_ok[n.id] = 0;
      out.warnings.push_back(e.what());
    }
  }

  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const auto& e = graph.edges[i];
    if (!node_ok[e.a] || !node_ok[e.b]) {
      out.routable[i] = 0;
      out.warnings.push_back("edge " + std::to_string(i) +
                             " has an endpoint off the risk grid; excluded from routing");
      continue;
    }
    int pieces = 1;
    if (options.dense_sampling && options.max_sample_spacing_m > 0.0 &&
        e.length_m > options.max_sample_spacing_m) {
      pieces = static_cast<int>(std::ceil(e.length_m / options.max_sample_spacing_m));
    }
    if (pieces == 1) {
      out.risk[i] = e.length_m * 0.5 * (node_risk[e.a] + node_risk[e.b]);
      continue;
    }
    const GeoPoint pa = graph.nodes[e.a].location;
    const GeoPoint pb = graph.nodes[e.b].location;
    double prev = node_risk[e.a];
    double sum = 0.0;
    for (int k = 1; k <= pieces; ++k) {
      double cur;
      if (k == pieces) {
        cur = node_risk[e.b];
      } else {
        const double s = static_cast<double>(k) / pieces;
        cur = interpolate_risk(grid, {pa.lat + s * (pb.lat - pa.lat), pa.lon + s * (pb.lon - pa.lon)});
      }
      sum += 0.5 * (prev + cur);
      prev = cur;
    }
    out.risk[i] = e.length_m * sum / pieces;
  }
  return out;
}

}  // namespace bikerisk::riskmap
