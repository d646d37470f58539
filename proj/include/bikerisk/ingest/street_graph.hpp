#pragma once

#include "bikerisk/geo.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bikerisk::ingest {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct StreetNode {
  NodeId id = 0;
  GeoPoint location;
  std::optional<double> altitude;  // meters
};

/// Undirected edge; `grade` is signed in the a -> b direction.
struct StreetEdge {
  NodeId a = 0;
  NodeId b = 0;
  double length_m = 0.0;
  double grade = 0.0;
};

struct StreetGraph {
  std::vector<StreetNode> nodes;  // nodes[i].id == i
  std::vector<StreetEdge> edges;
};

/// 3D polyline vertex of a raw street segment.
struct PolylinePoint {
  GeoPoint location;
  std::optional<double> altitude;
};

struct SegmentRecord {
  std::string id;
  std::vector<PolylinePoint> points;
};

/// Newline-delimited JSON, one segment per line:
///   {"id":"s1","coords":[[lat,lon,alt],[lat,lon,alt],...]}
/// The altitude may be omitted ([lat,lon]). Blank lines are ignored.
std::vector<SegmentRecord> parse_segments(std::string_view ndjson);
std::string write_segments(std::span<const SegmentRecord> segments);

struct GraphBuildOptions {
  /// Points closer than this on both axes are the same street point.
  double coordinate_tolerance_deg = 1e-6;
  /// Distinct points within this many tolerances are reported as near misses.
  double near_miss_factor = 10.0;
};

struct GraphBuildReport {
  std::size_t segments = 0;
  std::size_t raw_points = 0;        // polyline vertices after merging
  std::size_t zero_length_dropped = 0;
  std::size_t duplicate_links_dropped = 0;
  std::size_t near_misses = 0;
  double raw_length_m = 0.0;         // all kept links, before component filtering
  std::vector<std::size_t> dropped_component_nodes;  // sizes of discarded components
  std::vector<std::string> warnings;
};

struct GraphBuild {
  StreetGraph graph;
  GraphBuildReport report;
};

/// Merges coincident polyline vertices, keeps only intersections and dead
/// ends (degree != 2), sums the geodesic length of every elided chain into a
/// single edge, and keeps the largest connected component. Chains that would
/// become self-loops or parallel edges keep one interior node.
GraphBuild build_street_graph(std::span<const SegmentRecord> segments,
                              const GraphBuildOptions& options = {});

GraphBuild build_street_graph(std::string_view ndjson, const GraphBuildOptions& options = {});

/// Grade from altitudes over `length_m`, clamped to [-1, 1]; 0 if unknown.
double edge_grade(const std::optional<double>& from_alt, const std::optional<double>& to_alt,
                  double length_m);

}  // namespace bikerisk::ingest
