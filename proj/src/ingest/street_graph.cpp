#include "bikerisk/ingest/street_graph.hpp"

#include "bikerisk/error.hpp"
#include "bikerisk/format.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

namespace bikerisk::ingest {

double edge_grade(const std::optional<double>& from_alt, const std::optional<double>& to_alt,
                  double length_m) {
  if (!from_alt || !to_alt || !(length_m > 0.0)) return 0.0;
  return std::clamp((*to_alt - *from_alt) / length_m, -1.0, 1.0);
}

std::vector<SegmentRecord> parse_segments(std::string_view ndjson) {
  std::vector<SegmentRecord> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < ndjson.size()) {
    auto end = ndjson.find('\n', start);
    if (end == std::string_view::npos) end = ndjson.size();
    const auto line = trim(ndjson.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;

    SegmentRecord seg;
    try {
      const auto obj = nlohmann::json::parse(line);
      seg.id = obj.contains("id") ? obj["id"].get<std::string>() : std::to_string(line_no);
      for (const auto& c : obj.at("coords")) {
        if (!c.is_array() || c.size() < 2 || c.size() > 3) {
          throw DataError("coordinate must be [lat, lon] or [lat, lon, alt]");
        }
        PolylinePoint p{{c[0].get<double>(), c[1].get<double>()}, std::nullopt};
        if (c.size() == 3 && !c[2].is_null()) p.altitude = c[2].get<double>();
        if (!is_valid(p.location)) throw DataError("coordinate out of range");
        seg.points.push_back(p);
      }
    } catch (const nlohmann::json::exception& e) {
      throw DataError("street segment line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("street segment line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(std::move(seg));
  }
  return out;
}

std::string write_segments(std::span<const SegmentRecord> segments) {
  std::string out;
  for (const auto& s : segments) {
    out += "{\"id\":" + nlohmann::json(s.id).dump() + ",\"coords\":[";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto& p = s.points[i];
      if (i) out += ",";
      out += "[" + format_double(p.location.lat) + "," + format_double(p.location.lon);
      if (p.altitude) out += "," + format_double(*p.altitude);
      out += "]";
    }
    out += "]}\n";
  }
  return out;
}

namespace {

struct CellKey {
  std::int64_t lat;
  std::int64_t lon;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    return std::hash<std::int64_t>()(k.lat * 1000003LL ^ k.lon);
  }
};

// Spatial hash over points for tolerance matching.
class PointIndex {
 public:
  explicit PointIndex(double cell) : cell_(cell) {}

  CellKey key(const GeoPoint& p) const {
    return {static_cast<std::int64_t>(std::floor(p.lat / cell_)),
            static_cast<std::int64_t>(std::floor(p.lon / cell_))};
  }

  template <typename Fn>
  void for_neighbors(const GeoPoint& p, Fn&& fn) const {
    const auto k = key(p);
    for (std::int64_t dl = -1; dl <= 1; ++dl) {
      for (std::int64_t dn = -1; dn <= 1; ++dn) {
        auto it = cells_.find({k.lat + dl, k.lon + dn});
        if (it == cells_.end()) continue;
        for (auto idx : it->second) fn(idx);
      }
    }
  }

  void insert(const GeoPoint& p, std::uint32_t idx) { cells_[key(p)].push_back(idx); }

 private:
  double cell_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellKeyHash> cells_;
};

struct RawPoint {
  GeoPoint location;
  std::optional<double> altitude;
};

struct Link {
  std::uint32_t u;
  std::uint32_t v;
  double length_m;
};

struct Adjacent {
  std::uint32_t point;
  std::uint32_t link;
};

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

GraphBuild build_street_graph(std::span<const SegmentRecord> segments,
                              const GraphBuildOptions& options) {
  if (!(options.coordinate_tolerance_deg > 0.0)) {
    throw ValidationError("coordinate tolerance must be positive");
  }
  const double tol = options.coordinate_tolerance_deg;
  GraphBuild out;
  auto& report = out.report;
  report.segments = segments.size();

  // Merge coincident vertices.
  std::vector<RawPoint> points;
  PointIndex index(tol);
  auto intern = [&](const PolylinePoint& p) -> std::uint32_t {
    std::int64_t found = -1;
    index.for_neighbors(p.location, [&](std::uint32_t idx) {
      const auto& q = points[idx].location;
      if (found < 0 && std::abs(q.lat - p.location.lat) <= tol &&
          std::abs(q.lon - p.location.lon) <= tol) {
        found = idx;
      }
    });
    if (found >= 0) {
      auto& existing = points[static_cast<std::size_t>(found)];
      if (!existing.altitude && p.altitude) existing.altitude = p.altitude;
      return static_cast<std::uint32_t>(found);
    }
    const auto idx = static_cast<std::uint32_t>(points.size());
    points.push_back({p.location, p.altitude});
    index.insert(p.location, idx);
    return idx;
  };

  std::vector<Link> links;
  std::unordered_map<std::uint64_t, std::uint32_t> link_of_pair;
  for (const auto& seg : segments) {
    std::vector<std::uint32_t> chain;
    for (const auto& p : seg.points) {
      const auto idx = intern(p);
      if (chain.empty() || chain.back() != idx) chain.push_back(idx);
    }
    double seg_length = 0.0;
    for (std::size_t i = 1; i < chain.size(); ++i) {
      seg_length += haversine_m(points[chain[i - 1]].location, points[chain[i]].location);
    }
    if (chain.size() < 2 || !(seg_length > 0.0)) {
      ++report.zero_length_dropped;
      report.warnings.push_back("dropped zero-length segment '" + seg.id + "'");
      continue;
    }
    for (std::size_t i = 1; i < chain.size(); ++i) {
      const auto key = pair_key(chain[i - 1], chain[i]);
      if (link_of_pair.contains(key)) {
        ++report.duplicate_links_dropped;
        continue;
      }
      const double len = haversine_m(points[chain[i - 1]].location, points[chain[i]].location);
      link_of_pair.emplace(key, static_cast<std::uint32_t>(links.size()));
      links.push_back({chain[i - 1], chain[i], len});
      report.raw_length_m += len;
    }
  }
  if (report.duplicate_links_dropped > 0) {
    report.warnings.push_back("dropped " + std::to_string(report.duplicate_links_dropped) +
                              " repeated point-to-point links");
  }

  std::vector<std::vector<Adjacent>> adj(points.size());
  for (std::uint32_t l = 0; l < links.size(); ++l) {
    adj[links[l].u].push_back({links[l].v, l});
    adj[links[l].v].push_back({links[l].u, l});
  }
  std::size_t used_points = 0;
  for (const auto& a : adj) used_points += a.empty() ? 0 : 1;
  report.raw_points = used_points;

  // Endpoints that almost meet are kept distinct but reported.
  {
    const double reach = tol * options.near_miss_factor;
    PointIndex coarse(reach);
    for (std::uint32_t i = 0; i < points.size(); ++i) {
      if (adj[i].empty()) continue;
      coarse.for_neighbors(points[i].location, [&](std::uint32_t j) {
        const double dlat = std::abs(points[i].location.lat - points[j].location.lat);
        const double dlon = std::abs(points[i].location.lon - points[j].location.lon);
        if (dlat <= reach && dlon <= reach) {
          ++report.near_misses;
          if (report.near_misses <= 20) {
            report.warnings.push_back("near-miss street points beyond tolerance at " +
                                      to_string(points[i].location) + " and " +
                                      to_string(points[j].location));
          }
        }
      });
      coarse.insert(points[i].location, i);
    }
  }

  // Elide degree-2 points. Chains that would collapse into a self-loop or a
  // parallel edge keep their middle point, and the walk is repeated.
  std::vector<char> kept(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) kept[i] = !adj[i].empty() && adj[i].size() != 2;

  std::vector<std::vector<std::uint32_t>> chains;
  std::vector<std::vector<std::uint32_t>> chain_links;
  for (;;) {
    chains.clear();
    chain_links.clear();
    std::vector<char> visited(links.size(), 0);
    for (std::uint32_t u = 0; u < points.size(); ++u) {
      if (!kept[u]) continue;
      for (const auto& start : adj[u]) {
        if (visited[start.link]) continue;
        std::vector<std::uint32_t> chain{u};
        std::vector<std::uint32_t> via{start.link};
        visited[start.link] = 1;
        std::uint32_t cur = start.point;
        std::uint32_t came = start.link;
        while (!kept[cur]) {
          chain.push_back(cur);
          const auto& nb = adj[cur];
          const auto& next = nb[0].link == came ? nb[1] : nb[0];
          visited[next.link] = 1;
          via.push_back(next.link);
          came = next.link;
          cur = next.point;
        }
        chain.push_back(cur);
        chains.push_back(std::move(chain));
        chain_links.push_back(std::move(via));
      }
    }

    bool changed = false;
    // Pure cycles have no kept point at all.
    for (std::uint32_t l = 0; l < links.size() && !changed; ++l) {
      if (!visited[l]) {
        kept[std::min(links[l].u, links[l].v)] = 1;
        changed = true;
      }
    }
    if (!changed) {
      std::unordered_map<std::uint64_t, std::size_t> seen_pair;
      for (std::size_t c = 0; c < chains.size(); ++c) {
        const auto& ch = chains[c];
        if (ch.front() == ch.back()) {
          kept[ch[ch.size() / 2]] = 1;
          changed = true;
          continue;
        }
        const auto key = pair_key(ch.front(), ch.back());
        auto [it, inserted] = seen_pair.emplace(key, c);
        if (inserted) continue;
        const auto& other = chains[it->second];
        if (ch.size() > 2) {
          kept[ch[ch.size() / 2]] = 1;
        } else {
          kept[other[other.size() / 2]] = 1;
        }
        changed = true;
      }
    }
    if (!changed) break;
  }

  // Connected components over the kept points, via the chains.
  std::vector<std::uint32_t> parent(points.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& ch : chains) {
    const auto a = find(ch.front());
    const auto b = find(ch.back());
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<std::uint32_t, std::size_t> component_size;  // keyed by lowest member
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    if (kept[i]) ++component_size[find(i)];
  }
  std::uint32_t best_root = 0;
  std::size_t best_size = 0;
  for (const auto& [root, size] : component_size) {
    if (size > best_size) {
      best_size = size;
      best_root = root;
    }
  }
  for (const auto& [root, size] : component_size) {
    if (root != best_root) report.dropped_component_nodes.push_back(size);
  }
  if (!report.dropped_component_nodes.empty()) {
    report.warnings.push_back("kept the largest connected component (" +
                              std::to_string(best_size) + " nodes); dropped " +
                              std::to_string(report.dropped_component_nodes.size()) +
                              " smaller components");
  }

  std::vector<std::int64_t> node_of(points.size(), -1);
  auto& graph = out.graph;
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    if (!kept[i] || find(i) != best_root) continue;
    node_of[i] = static_cast<std::int64_t>(graph.nodes.size());
    graph.nodes.push_back(
        {static_cast<NodeId>(graph.nodes.size()), points[i].location, points[i].altitude});
  }
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto& ch = chains[c];
    if (node_of[ch.front()] < 0) continue;
    double length = 0.0;
    for (auto l : chain_links[c]) length += links[l].length_m;
    StreetEdge e;
    e.a = static_cast<NodeId>(node_of[ch.front()]);
    e.b = static_cast<NodeId>(node_of[ch.back()]);
    e.length_m = length;
    e.grade = edge_grade(points[ch.front()].altitude, points[ch.back()].altitude, length);
    graph.edges.push_back(e);
  }
  return out;
}

GraphBuild build_street_graph(std::string_view ndjson, const GraphBuildOptions& options) {
  const auto segments = parse_segments(ndjson);
  return build_street_graph(segments, options);
}

}  // namespace bikerisk::ingest
