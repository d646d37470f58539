// Generates the synthetic city under data/synthetic_city: a jittered street
// grid on a hill, accidents around two hotspots, GPX traces of simulated
// trips, a monthly climate table, and baseline routes. Run from the
// repository root (or pass it as the first argument). Output is
// deterministic.

#include "bikerisk/csv.hpp"
#include "bikerisk/format.hpp"
#include "bikerisk/geo.hpp"
#include "bikerisk/ingest/street_graph.hpp"
#include "bikerisk/io.hpp"
#include "bikerisk/pipeline/pipeline.hpp"
#include "bikerisk/router/route_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>
#include <queue>
#include <set>

namespace fs = std::filesystem;
using bikerisk::GeoPoint;

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * n); }
  double normal() {
    const double u = 1.0 - uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * uniform());
  }
  template <typename W>
  std::size_t weighted(const W& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if ((x -= weights[i]) < 0.0) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::uint64_t state_;
};

constexpr int kRows = 13;
constexpr int kCols = 16;
constexpr double kLat0 = 47.3668, kLat1 = 47.3868;
constexpr double kLon0 = 8.5165, kLon1 = 8.5499;
constexpr double kMetersPerDegLat = 111200.0;
constexpr double kMetersPerDegLon = 75350.0;

const bikerisk::BoundingBox kStudyBox = bikerisk::BoundingBox::make(47.3650, 8.5141, 47.3886, 8.5523);

double round7(double v) { return std::round(v * 1e7) / 1e7; }

double altitude(const GeoPoint& p) {
  const double dy = (p.lat - 47.3838) * kMetersPerDegLat;
  const double dx = (p.lon - 8.5445) * kMetersPerDegLon;
  const double hill = 48.0 * std::exp(-(dx * dx + dy * dy) / (2.0 * 420.0 * 420.0));
  const double slope = 22.0 * (p.lat - kLat0) / (kLat1 - kLat0);
  return std::round((408.0 + slope + hill) * 10.0) / 10.0;
}

GeoPoint offset_m(const GeoPoint& p, double north_m, double east_m) {
  return {p.lat + north_m / kMetersPerDegLat, p.lon + east_m / kMetersPerDegLon};
}

struct City {
  std::vector<GeoPoint> intersections;  // row-major kRows x kCols
  struct Block {
    int a, b;
    std::vector<GeoPoint> shape;  // a .. b inclusive
  };
  std::vector<Block> blocks;
  std::vector<std::vector<std::pair<int, int>>> adjacency;  // node -> (neighbour, block)

  int node(int r, int c) const { return r * kCols + c; }
};

std::vector<GeoPoint> block_shape(const GeoPoint& a, const GeoPoint& b, Rng& rng) {
  const int interior = 4 + static_cast<int>(rng.below(6));
  const double bend = (rng.uniform() - 0.5) * 0.12;
  const double dn = (b.lat - a.lat) * kMetersPerDegLat;
  const double de = (b.lon - a.lon) * kMetersPerDegLon;
  std::vector<GeoPoint> shape{a};
  for (int k = 1; k <= interior; ++k) {
    const double t = static_cast<double>(k) / (interior + 1);
    const double lateral = bend * std::sin(std::numbers::pi * t);
    GeoPoint p{a.lat + t * (b.lat - a.lat), a.lon + t * (b.lon - a.lon)};
    p = offset_m(p, -de * lateral, dn * lateral);
    shape.push_back({round7(p.lat), round7(p.lon)});
  }
  shape.push_back(b);
  return shape;
}

City make_city(Rng& rng) {
  City city;
  const double dlat = (kLat1 - kLat0) / (kRows - 1);
  const double dlon = (kLon1 - kLon0) / (kCols - 1);
  for (int r = 0; r < kRows; ++r) {
    for (int c = 0; c < kCols; ++c) {
      const double lat = kLat0 + r * dlat + 0.08 * dlat * rng.normal();
      const double lon = kLon0 + c * dlon + 0.08 * dlon * rng.normal();
      city.intersections.push_back({round7(lat), round7(lon)});
    }
  }
  city.adjacency.resize(city.intersections.size());
  auto add_block = [&](int a, int b) {
    if (rng.uniform() < 0.05) return;  // a missing street
    const int id = static_cast<int>(city.blocks.size());
    city.blocks.push_back({a, b, block_shape(city.intersections[a], city.intersections[b], rng)});
    city.adjacency[a].push_back({b, id});
    city.adjacency[b].push_back({a, id});
  };
  for (int r = 0; r < kRows; ++r) {
    for (int c = 0; c + 1 < kCols; ++c) add_block(city.node(r, c), city.node(r, c + 1));
  }
  for (int c = 0; c < kCols; ++c) {
    for (int r = 0; r + 1 < kRows; ++r) add_block(city.node(r, c), city.node(r + 1, c));
  }
  return city;
}

bikerisk::ingest::PolylinePoint with_altitude(const GeoPoint& p) { return {p, altitude(p)}; }

// Streets run along whole grid rows and columns and break where a block is
// missing. Some streets are split into two records at an interior vertex.
std::vector<bikerisk::ingest::SegmentRecord> make_segments(const City& city, Rng& rng) {
  std::map<std::pair<int, int>, int> block_of;
  for (int i = 0; i < static_cast<int>(city.blocks.size()); ++i) {
    block_of[{city.blocks[i].a, city.blocks[i].b}] = i;
  }
  std::vector<bikerisk::ingest::SegmentRecord> out;
  int next_id = 1;
  auto emit = [&](std::vector<GeoPoint> points) {
    if (points.size() < 2) return;
    bikerisk::ingest::SegmentRecord rec;
    rec.id = "way-" + std::to_string(next_id++);
    for (const auto& p : points) rec.points.push_back(with_altitude(p));
    out.push_back(std::move(rec));
  };
  auto flush = [&](std::vector<GeoPoint>& points, int blocks_in_way) {
    if (blocks_in_way >= 3 && rng.uniform() < 0.35) {
      const std::size_t cut = points.size() / 2;
      emit({points.begin(), points.begin() + static_cast<std::ptrdiff_t>(cut) + 1});
      emit({points.begin() + static_cast<std::ptrdiff_t>(cut), points.end()});
    } else {
      emit(points);
    }
    points.clear();
  };
  auto street = [&](auto node_at, int length, bool nudge) {
    std::vector<GeoPoint> way;
    int blocks = 0;
    for (int k = 0; k + 1 < length; ++k) {
      const auto it = block_of.find({node_at(k), node_at(k + 1)});
      if (it == block_of.end()) {
        flush(way, blocks);
        blocks = 0;
        continue;
      }
      auto shape = city.blocks[it->second].shape;
      // Crossing streets digitized a few centimeters apart still meet.
      if (nudge && rng.uniform() < 0.2) shape.front().lat += 3e-7;
      if (!way.empty()) shape.erase(shape.begin());
      way.insert(way.end(), shape.begin(), shape.end());
      ++blocks;
    }
    flush(way, blocks);
  };
  for (int r = 0; r < kRows; ++r) street([&](int k) { return city.node(r, k); }, kCols, false);
  for (int c = 0; c < kCols; ++c) street([&](int k) { return city.node(k, c); }, kRows, true);

  // A zero-length record, a spur that misses its junction by about 0.4 m and
  // a detached courtyard loop: all dropped or reported by the graph builder.
  const auto& junction = city.intersections[city.node(6, 7)];
  emit({junction, junction});
  const GeoPoint spur_start{junction.lat + 4e-6, junction.lon + 4e-6};
  emit({spur_start, offset_m(spur_start, 40, 45), offset_m(spur_start, 70, 80)});
  const GeoPoint yard{47.3657, 8.5150};
  emit({yard, offset_m(yard, 0, 60), offset_m(yard, 40, 60), offset_m(yard, 40, 0)});
  return out;
}

GeoPoint along(const std::vector<GeoPoint>& shape, double t) {
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < shape.size(); ++i) {
    cumulative.push_back(cumulative.back() + bikerisk::haversine_m(shape[i - 1], shape[i]));
  }
  const double target = t * cumulative.back();
  for (std::size_t i = 1; i < shape.size(); ++i) {
    if (cumulative[i] >= target) {
      const double span = cumulative[i] - cumulative[i - 1];
      const double u = span > 0.0 ? (target - cumulative[i - 1]) / span : 0.0;
      return {shape[i - 1].lat + u * (shape[i].lat - shape[i - 1].lat),
              shape[i - 1].lon + u * (shape[i].lon - shape[i - 1].lon)};
    }
  }
  return shape.back();
}

std::string make_accidents(const City& city, Rng& rng) {
  constexpr int kTotal = 1305;
  constexpr int kDeaths = 5;
  constexpr int kSevere = 277;
  const GeoPoint hotspot_a{47.3762, 8.5332};
  const GeoPoint hotspot_b{47.3708, 8.5228};
  const std::array<double, 12> month_w = {3, 3, 5, 7, 10, 11, 12, 11, 10, 7, 5, 3};
  const std::array<double, 7> weekday_w = {15, 15, 15, 15, 16, 12, 10};
  std::array<double, 24> hour_w{};
  for (int h = 0; h < 24; ++h) {
    hour_w[h] = 1.0 + 8.0 * std::exp(-0.5 * std::pow((h - 7.5) / 1.2, 2)) +
                9.0 * std::exp(-0.5 * std::pow((h - 17.0) / 1.8, 2)) + (h >= 9 && h <= 15 ? 3.0 : 0.0);
  }
  const std::array<const char*, 7> causes = {"self-caused", "head-on", "crossing-lanes",
                                             "overtaking", "rear-end", "turning", "other"};
  const std::array<double, 7> cause_w = {40, 6, 18, 7, 11, 12, 6};
  const std::array<const char*, 3> street_types = {"main road", "residential", "cycle lane"};

  struct Row {
    GeoPoint p;
    double score;
    int year, month, weekday, hour;
    std::size_t cause, street;
  };
  std::vector<Row> rows;
  while (rows.size() < kTotal) {
    const double u = rng.uniform();
    GeoPoint p;
    bool in_b = false;
    if (u < 0.30) {
      p = offset_m(hotspot_a, 120.0 * rng.normal(), 120.0 * rng.normal());
    } else if (u < 0.50) {
      p = offset_m(hotspot_b, 90.0 * rng.normal(), 90.0 * rng.normal());
      in_b = true;
    } else {
      const auto& block = city.blocks[rng.below(city.blocks.size())];
      p = offset_m(along(block.shape, rng.uniform()), 8.0 * rng.normal(), 8.0 * rng.normal());
    }
    if (!kStudyBox.contains(p)) continue;
    Row row;
    row.p = {round7(p.lat), round7(p.lon)};
    row.score = rng.uniform() * (in_b ? 0.45 : 1.0);
    row.year = 2011 + static_cast<int>(rng.weighted(std::array<double, 7>{12, 13, 14, 14, 15, 16, 16}));
    row.month = 1 + static_cast<int>(rng.weighted(month_w));
    row.weekday = 1 + static_cast<int>(rng.weighted(weekday_w));
    row.hour = static_cast<int>(rng.weighted(hour_w));
    row.cause = rng.weighted(cause_w);
    row.street = rng.weighted(std::array<double, 3>{5, 4, 2});
    rows.push_back(row);
  }
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return rows[x].score < rows[y].score; });
  std::vector<const char*> severity(rows.size(), "light");
  for (int k = 0; k < kDeaths + kSevere; ++k) severity[order[k]] = k < kDeaths ? "death" : "severe";

  std::string csv = bikerisk::csv_line(
      {"id", "lat", "lon", "severity", "cause", "year", "month", "weekday", "hour", "street_type"});
  char id[32];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::snprintf(id, sizeof id, "ACC-%05zu", i + 1);
    csv += bikerisk::csv_line({id, bikerisk::format_double(r.p.lat), bikerisk::format_double(r.p.lon),
                               severity[i], causes[r.cause], std::to_string(r.year),
                               std::to_string(r.month), std::to_string(r.weekday),
                               std::to_string(r.hour), street_types[r.street]});
  }
  return csv;
}

std::vector<int> shortest_blocks(const City& city, int from, int to) {
  std::vector<double> dist(city.intersections.size(), INFINITY);
  std::vector<std::pair<int, int>> prev(city.intersections.size(), {-1, -1});
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[from] = 0.0;
  open.push({0.0, from});
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d != dist[u]) continue;
    if (u == to) break;
    for (const auto& [v, block] : city.adjacency[u]) {
      const double nd =
          d + bikerisk::haversine_m(city.intersections[u], city.intersections[v]);
      if (nd < dist[v]) {
        dist[v] = nd;
        prev[v] = {u, block};
        open.push({nd, v});
      }
    }
  }
  std::vector<int> blocks;
  if (!std::isfinite(dist[to])) return blocks;
  for (int v = to; v != from; v = prev[v].first) blocks.push_back(prev[v].second);
  std::reverse(blocks.begin(), blocks.end());
  return blocks;
}

int pick_node(Rng& rng) {
  if (rng.uniform() < 0.55) {
    const int r = 3 + static_cast<int>(rng.below(7));
    const int c = 4 + static_cast<int>(rng.below(8));
    return r * kCols + c;
  }
  return static_cast<int>(rng.below(kRows * kCols));
}

void make_traces(const City& city, Rng& rng, const fs::path& dir) {
  constexpr int kFiles = 32;
  constexpr int kTripsPerFile = 5;
  constexpr double kSpacingM = 12.0;
  int trip = 0;
  for (int f = 0; f < kFiles; ++f) {
    std::string gpx =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<gpx version=\"1.1\" creator=\"make_fixtures\" "
        "xmlns=\"http://www.topografix.com/GPX/1/1\">\n";
    for (int t = 0; t < kTripsPerFile; ++t, ++trip) {
      int from = pick_node(rng), to = pick_node(rng);
      std::vector<int> blocks;
      while ((blocks = shortest_blocks(city, from, to)).size() < 3) {
        from = pick_node(rng);
        to = pick_node(rng);
      }
      char name[32];
      std::snprintf(name, sizeof name, "trip-%04d", trip + 1);
      gpx += "  <trk>\n    <name>" + std::string(name) + "</name>\n";
      if (trip % 20 == 3) gpx += "    <type>cycling</type>\n";
      if (trip % 20 == 7 || trip % 20 == 15) gpx += "    <type>car</type>\n";
      gpx += "    <trkseg>\n";
      int at = from;
      for (int b : blocks) {
        auto shape = city.blocks[b].shape;
        if (city.blocks[b].a != at) std::reverse(shape.begin(), shape.end());
        at = city.blocks[b].a == at ? city.blocks[b].b : city.blocks[b].a;
        double length = 0.0;
        for (std::size_t i = 1; i < shape.size(); ++i) {
          length += bikerisk::haversine_m(shape[i - 1], shape[i]);
        }
        const int samples = std::max(1, static_cast<int>(length / kSpacingM));
        for (int s = 0; s < samples; ++s) {
          const auto p = offset_m(along(shape, static_cast<double>(s) / samples), 4.0 * rng.normal(),
                                  4.0 * rng.normal());
          gpx += "      <trkpt lat=\"" + bikerisk::format_fixed6(p.lat) + "\" lon=\"" +
                 bikerisk::format_fixed6(p.lon) + "\"></trkpt>\n";
        }
      }
      gpx += "    </trkseg>\n  </trk>\n";
    }
    gpx += "</gpx>\n";
    char file[32];
    std::snprintf(file, sizeof file, "traces_%02d.gpx", f + 1);
    bikerisk::write_file(dir / file, gpx);
  }
}

std::string make_climate() {
  const std::array<double, 12> temp = {0.3, 1.6, 5.7, 9.4, 13.9, 17.2, 19.1, 18.5, 14.5, 10.3, 5.0, 1.5};
  const std::array<double, 12> rain = {68, 66, 77, 88, 118, 129, 136, 132, 94, 83, 80, 84};
  std::string csv = bikerisk::csv_line({"month", "temperature_c", "precipitation_mm"});
  for (int m = 0; m < 12; ++m) {
    csv += bikerisk::csv_line({std::to_string(m + 1), bikerisk::format_double(temp[m]),
                               bikerisk::format_double(rain[m])});
  }
  return csv;
}

// Shortest-length routes between distant intersections, written with their
// totals on the estimated network.
void make_baselines(const fs::path& root, const fs::path& dir, Rng& rng) {
  const auto config = bikerisk::pipeline::load_config(root / "config" / "synthetic_city.json");
  const auto in = bikerisk::pipeline::load_inputs(config);
  const auto surface = bikerisk::pipeline::estimate_risk(in.accidents, in.traces, config);
  const auto graph = bikerisk::pipeline::weight_network(in.network.graph, surface.risk, config);

  auto by_length = graph;
  for (auto& e : by_length.edges) {
    e.risk = 0.0;
    e.discomfort_forward = e.discomfort_backward = e.length_m;
  }
  const bikerisk::router::Router shortest(by_length, {.normalize = false});
  const bikerisk::router::Router real(graph, config.blend);

  std::vector<bikerisk::router::NodeId> junctions;
  for (const auto& n : graph.nodes) {
    if (shortest.adjacency()[n.id].size() >= 3) junctions.push_back(n.id);
  }
  std::set<std::pair<bikerisk::router::NodeId, bikerisk::router::NodeId>> used;
  int written = 0;
  while (written < 20) {
    const auto a = junctions[rng.below(junctions.size())];
    const auto b = junctions[rng.below(junctions.size())];
    if (a == b || used.count({a, b})) continue;
    if (bikerisk::haversine_m(graph.nodes[a].location, graph.nodes[b].location) < 900.0) continue;
    used.insert({a, b});
    const auto path = shortest.route_between(a, b, 0.0);
    const auto route = bikerisk::router::make_route(graph, path.nodes, path.edges, std::nullopt,
                                                    real.scales());
    char name[32];
    std::snprintf(name, sizeof name, "baseline_%02d.txt", ++written);
    bikerisk::write_file(dir / name, bikerisk::router::export_route_txt(route, graph));
  }
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::current_path();
  const fs::path out = root / "data" / "synthetic_city";
  fs::remove_all(out);
  Rng rng(20191203);

  const auto city = make_city(rng);
  const auto segments = make_segments(city, rng);
  bikerisk::write_file(out / "network.ndjson", bikerisk::ingest::write_segments(segments));
  bikerisk::write_file(out / "accidents.csv", make_accidents(city, rng));
  make_traces(city, rng, out / "traces");
  bikerisk::write_file(out / "climate.csv", make_climate());
  make_baselines(root, out / "baselines", rng);
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}
