#include "bikerisk/error.hpp"
#include "bikerisk/geo.hpp"
#include "bikerisk/ingest/accidents.hpp"
#include "bikerisk/ingest/extraction.hpp"
#include "bikerisk/ingest/street_graph.hpp"
#include "bikerisk/ingest/subdivide.hpp"
#include "bikerisk/ingest/traces.hpp"
#include "bikerisk/io.hpp"

#include "generators.hpp"

#include <doctest.h>

#include <filesystem>
#include <set>

using namespace bikerisk;
using namespace bikerisk::ingest;

namespace {

const BoundingBox kUnit = BoundingBox::make(0, 0, 1, 1);

SubdivisionOptions threshold(std::size_t t) {
  SubdivisionOptions o;
  o.threshold = t;
  return o;
}

AccidentRecord record(std::string id, GeoPoint p, Severity s = Severity::Light) {
  AccidentRecord r;
  r.id = std::move(id);
  r.location = p;
  r.severity = s;
  r.time = {2015, 6, 3, 17};
  return r;
}

std::string gpx(const std::string& type, std::initializer_list<GeoPoint> pts) {
  std::string s = "<?xml version=\"1.0\"?><gpx version=\"1.1\" xmlns=\"http://www.topografix.com/GPX/1/1\"><trk>";
  if (!type.empty()) s += "<type>" + type + "</type>";
  s += "<trkseg>";
  for (const auto& p : pts) {
    s += "<trkpt lat=\"" + std::to_string(p.lat) + "\" lon=\"" + std::to_string(p.lon) + "\"/>";
  }
  return s + "</trkseg></trk></gpx>";
}

SegmentRecord segment(std::string id, std::initializer_list<PolylinePoint> pts) {
  return {std::move(id), std::vector<PolylinePoint>(pts)};
}

}  // namespace

TEST_CASE("subdivision: one point per quadrant needs a single round") {
  const std::vector<GeoPoint> pts = {{0.25, 0.25}, {0.25, 0.75}, {0.75, 0.25}, {0.75, 0.75}};
  const auto s = subdivide_region(kUnit, pts, threshold(1));
  CHECK(s.iterations == 1);
  CHECK(s.cells.size() == 4);
  CHECK(s.counts == std::vector<std::size_t>{1, 1, 1, 1});
}

TEST_CASE("subdivision: already under the threshold") {
  const std::vector<GeoPoint> pts = {{0.5, 0.5}};
  const auto s = subdivide_region(kUnit, pts, threshold(1));
  CHECK(s.iterations == 0);
  CHECK(s.cells.size() == 1);
  CHECK(s.cells[0] == kUnit);
}

TEST_CASE("subdivision: a tight pair forces uniform refinement everywhere") {
  // 0.01 and 0.07 first fall in different cells when the cell edge is 1/16.
  const std::vector<GeoPoint> pts = {{0.01, 0.01}, {0.07, 0.07}};
  const auto s = subdivide_region(kUnit, pts, threshold(1));
  CHECK(s.iterations == 4);
  CHECK(s.cells.size() == 256);
}

TEST_CASE("subdivision: coincident points beyond the threshold fail at max depth") {
  const std::vector<GeoPoint> pts = {{0.3, 0.3}, {0.3, 0.3}, {0.9, 0.1}};
  try {
    subdivide_region(kUnit, pts, threshold(1));
    FAIL("expected SubdivisionError");
  } catch (const SubdivisionError& e) {
    CHECK(e.depth() == 20);
    CHECK(e.count() == 2);
    CHECK(e.cell().contains({0.3, 0.3}));
  }
}

TEST_CASE("subdivision rejects bad parameters") {
  const std::vector<GeoPoint> outside = {{1.5, 0.5}};
  CHECK_THROWS_AS(subdivide_region(kUnit, outside, threshold(1)), ValidationError);
  CHECK_THROWS_AS(subdivide_region(kUnit, {}, threshold(0)), ValidationError);
}

TEST_CASE("subdivision properties on random point sets") {
  gen::Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const auto box = BoundingBox::make(rng.uniform(-10, 0), rng.uniform(-10, 0),
                                       rng.uniform(0.5, 10), rng.uniform(0.5, 10));
    auto pts = gen::points_in(rng, box, 1 + rng.below(400));
    if (trial % 5 == 0) pts.push_back(box.max);
    if (trial % 7 == 0) pts.push_back(box.min);
    const std::size_t t = 1 + rng.below(50);
    const auto s = subdivide_region(box, pts, threshold(t));

    const std::size_t side = std::size_t{1} << s.iterations;
    REQUIRE(s.cells.size() == side * side);
    std::size_t total = 0;
    for (auto c : s.counts) {
      CHECK(c <= t);
      total += c;
    }
    CHECK(total == pts.size());

    // Each point is inside exactly the cell its index names.
    for (const auto& p : pts) {
      const auto idx = cell_index(box, s.iterations, p);
      REQUIRE(idx >= 0);
      CHECK(s.cells[static_cast<std::size_t>(idx)].contains(p));
    }
    // Cells tile the box: shared edges are bitwise equal.
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        const auto& cell = s.cells[r * side + c];
        if (c + 1 < side) CHECK(cell.max.lon == s.cells[r * side + c + 1].min.lon);
        if (r + 1 < side) CHECK(cell.max.lat == s.cells[(r + 1) * side + c].min.lat);
      }
    }
    CHECK(s.cells.front().min == box.min);
    CHECK(s.cells.back().max == box.max);

    // One fewer round would leave a cell above the threshold.
    if (s.iterations > 0) {
      std::map<std::ptrdiff_t, std::size_t> coarse;
      for (const auto& p : pts) ++coarse[cell_index(box, s.iterations - 1, p)];
      std::size_t worst = 0;
      for (auto& [k, n] : coarse) worst = std::max(worst, n);
      CHECK(worst > t);
    }
  }
}

TEST_CASE("extraction collects every record once despite overlapping windows") {
  gen::Rng rng(12);
  std::vector<AccidentRecord> recs;
  const auto region = BoundingBox::make(47.36, 8.51, 47.39, 8.56);
  for (int i = 0; i < 900; ++i) {
    GeoPoint p{rng.uniform(47.36, 47.39), rng.uniform(8.51, 8.56)};
    if (i % 50 == 0) p = {47.375, 8.535};  // sits on an internal cell boundary
    recs.push_back(record("a" + std::to_string(i), p));
  }
  InMemoryAccidentLayer layer(recs, 200);
  const auto ex = extract_accidents(layer, region);
  CHECK(ex.plan.iterations >= 1);
  CHECK(ex.records.size() == recs.size());
  std::set<std::string> ids;
  for (const auto& r : ex.records) ids.insert(r.id);
  CHECK(ids.size() == recs.size());
}

TEST_CASE("accident layer enforces its query limit") {
  InMemoryAccidentLayer layer({record("a", {0.5, 0.5}), record("b", {0.6, 0.6})}, 1);
  CHECK_THROWS_AS(layer.identify(kUnit), DataError);
  CHECK(layer.identify(BoundingBox::make(0, 0, 0.55, 0.55)).size() == 1);
}

TEST_CASE("accident CSV parsing, dedup and row errors") {
  const std::string csv =
      "id,lat,lon,severity,cause,year,month,weekday,hour,street_type\n"
      "1,47.37,8.53,light,rear-end,2014,3,2,8,main\n"
      "2,47.38,8.54,FATAL,head-on,2015,12,7,23,\n"
      "1,47.37,8.53,light,rear-end,2014,3,2,8,main\n"
      "3,47.38,8.54,bruised,other,2015,1,1,0,\n"
      "4,47.38,8.54,severe,aliens,2015,1,1,0,\n"
      "5,47.38,8.54,severe,other,2015,13,1,0,\n"
      "6,47.38\n";
  const auto load = load_accidents(csv, AccidentFormat::Csv);
  REQUIRE(load.records.size() == 3);
  CHECK(load.duplicates_removed == 1);
  CHECK(load.records[1].severity == Severity::Death);
  CHECK(load.records[1].cause == Cause::HeadOn);
  CHECK(load.records[2].cause == Cause::Other);
  REQUIRE(load.errors.size() == 3);
  CHECK(load.errors[0].row == 4);
  CHECK(load.errors[0].message.find("bruised") != std::string::npos);
  CHECK(load.errors[1].row == 6);
  CHECK(load.errors[2].row == 7);
}

TEST_CASE("accident CSV without a required column is rejected") {
  CHECK_THROWS_AS(load_accidents("id,lat,lon\n1,2,3\n", AccidentFormat::Csv), DataError);
}

TEST_CASE("accident ingest is idempotent through the normalized CSV") {
  gen::Rng rng(13);
  std::vector<AccidentRecord> recs;
  for (int i = 0; i < 50; ++i) {
    auto r = record("r" + std::to_string(i), {rng.uniform(47.36, 47.39), rng.uniform(8.51, 8.55)},
                    kAllSeverities[rng.below(3)]);
    r.cause = kAllCauses[rng.below(kAllCauses.size())];
    r.street_type = i % 3 ? "main" : "side, with comma";
    recs.push_back(r);
  }
  const auto once = write_accidents_csv(recs);
  const auto reloaded = load_accidents(once, AccidentFormat::Csv);
  CHECK(reloaded.errors.empty());
  CHECK(reloaded.records == recs);
  CHECK(write_accidents_csv(reloaded.records) == once);
}

TEST_CASE("accident JSON input and bounds") {
  const std::string json = R"({"records":[
    {"id":"x","lat":47.37,"lon":8.53,"severity":"severe","cause":"turning","year":2016,"month":5,"weekday":4,"hour":9},
    {"id":"y","lat":10.0,"lon":8.53,"severity":"light","year":2016,"month":5,"weekday":4,"hour":9},
    {"id":"z","lat":47.37,"lon":8.53,"severity":"light","year":1850,"month":5,"weekday":4,"hour":9}]})";
  AccidentSchema schema;
  schema.bounds = BoundingBox::make(47, 8, 48, 9);
  schema.min_year = 2000;
  const auto load = load_accidents(json, AccidentFormat::Json, schema);
  REQUIRE(load.records.size() == 1);
  CHECK(load.records[0].cause == Cause::Turning);
  CHECK(load.out_of_bounds == 1);
  CHECK(load.errors.size() == 1);
  CHECK_THROWS_AS(load_accidents("{", AccidentFormat::Json), DataError);
}

TEST_CASE("fixture accident file") {
  const auto load = load_accidents(read_file(std::filesystem::path(BIKERISK_DATA_DIR) /
                                             "synthetic_city/accidents.csv"),
                                   AccidentFormat::Csv);
  CHECK(load.errors.empty());
  CHECK(load.records.size() == 1305);
  std::map<Severity, int> by;
  for (const auto& r : load.records) ++by[r.severity];
  CHECK(by[Severity::Light] == 1023);
  CHECK(by[Severity::Severe] == 277);
  CHECK(by[Severity::Death] == 5);
}

TEST_CASE("traces: non-bike tracks are removed, unlabeled ones kept") {
  const std::vector<TraceSource> src = {
      {"a.gpx", gpx("cycling", {{47.37, 8.52}, {47.371, 8.521}})},
      {"b.gpx", gpx("car", {{47.37, 8.52}, {47.372, 8.522}, {47.373, 8.523}})},
      {"c.gpx", gpx("", {{47.375, 8.53}})},
      {"d.gpx", "<gpx><trk><trkseg><trkpt lat="},
  };
  const auto load = load_traces(src);
  CHECK(load.samples.size() == 3);
  CHECK(load.removed_non_bike == 3);
  CHECK(load.files_skipped == 1);
  CHECK_FALSE(load.warnings.empty());
  CHECK(load.samples[0].mode == TransportMode::Bike);
  CHECK(load.samples[2].mode == TransportMode::Unlabeled);
}

TEST_CASE("traces: window filter and empty result") {
  const std::vector<TraceSource> src = {{"a.gpx", gpx("bike", {{47.37, 8.52}, {40.0, 8.0}})}};
  const auto load = load_traces(src, BoundingBox::make(47, 8, 48, 9));
  CHECK(load.samples.size() == 1);
  CHECK(load.outside_window == 1);
  const std::vector<TraceSource> cars = {{"b.gpx", gpx("car", {{47.37, 8.52}})}};
  CHECK_THROWS_AS(load_traces(cars), DataError);
  CHECK(parse_mode("Bicycle") == TransportMode::Bike);
  CHECK(parse_mode("walk") == TransportMode::Other);
  CHECK(parse_mode("") == TransportMode::Unlabeled);
}

TEST_CASE("street graph: interior points are elided and lengths summed") {
  const std::vector<SegmentRecord> segs = {
      segment("s1", {{{47.3700, 8.5200}, 400.0},
                     {{47.3710, 8.5200}, 402.0},
                     {{47.3720, 8.5200}, 404.0},
                     {{47.3730, 8.5200}, 406.0}}),
      segment("s2", {{{47.3730, 8.5200}, 406.0}, {{47.3730, 8.5210}, 406.0}}),
  };
  const auto build = build_street_graph(segs);
  // The two segments meet at a degree-2 point, so everything collapses.
  REQUIRE(build.graph.nodes.size() == 2);
  REQUIRE(build.graph.edges.size() == 1);
  double raw = 0;
  for (const auto& s : segs) {
    for (std::size_t i = 1; i < s.points.size(); ++i) {
      raw += haversine_m(s.points[i - 1].location, s.points[i].location);
    }
  }
  CHECK(build.graph.edges[0].length_m == doctest::Approx(raw).epsilon(1e-12));
  CHECK(build.report.raw_points == 5);
}

TEST_CASE("street graph: grade follows altitude along the edge") {
  const GeoPoint a{47.37, 8.52};
  const GeoPoint b{47.371, 8.52};
  const double len = haversine_m(a, b);
  const std::vector<SegmentRecord> segs = {segment("s", {{a, 400.0}, {b, 400.0 + 0.05 * len}})};
  const auto build = build_street_graph(segs);
  REQUIRE(build.graph.edges.size() == 1);
  const auto& e = build.graph.edges[0];
  const double signed_grade = build.graph.nodes[e.a].location == a ? 0.05 : -0.05;
  CHECK(e.grade == doctest::Approx(signed_grade).epsilon(1e-9));
  CHECK(edge_grade(0.0, 500.0, 100.0) == 1.0);
  CHECK(edge_grade(std::nullopt, 5.0, 100.0) == 0.0);
}

TEST_CASE("street graph: zero-length and near-miss segments are reported") {
  const std::vector<SegmentRecord> segs = {
      segment("main", {{{47.3700, 8.5200}, 400.0}, {{47.3700, 8.5230}, 400.0}}),
      segment("dot", {{{47.3750, 8.5250}, 400.0}, {{47.3750, 8.5250}, 400.0}}),
      segment("miss", {{{47.3700, 8.523005}, 400.0}, {{47.3690, 8.5240}, 400.0}}),
  };
  const auto build = build_street_graph(segs);
  CHECK(build.report.zero_length_dropped == 1);
  CHECK(build.report.near_misses == 1);
  CHECK(build.report.dropped_component_nodes.size() == 1);
}

TEST_CASE("street graph: loops and parallel chains keep an interior node") {
  // Two different routes between the same pair of junctions, plus a loop.
  const std::vector<SegmentRecord> segs = {
      segment("north", {{{47.370, 8.520}, {}}, {{47.372, 8.522}, {}}, {{47.370, 8.524}, {}}}),
      segment("south", {{{47.370, 8.520}, {}}, {{47.368, 8.522}, {}}, {{47.370, 8.524}, {}}}),
      segment("loop", {{{47.370, 8.524}, {}},
                       {{47.371, 8.526}, {}},
                       {{47.369, 8.526}, {}},
                       {{47.370, 8.524}, {}}}),
  };
  const auto build = build_street_graph(segs);
  std::set<std::pair<NodeId, NodeId>> pairs;
  double total = 0;
  for (const auto& e : build.graph.edges) {
    CHECK(e.a != e.b);
    CHECK(pairs.insert({std::min(e.a, e.b), std::max(e.a, e.b)}).second);
    total += e.length_m;
  }
  CHECK(total == doctest::Approx(build.report.raw_length_m).epsilon(1e-12));
}

TEST_CASE("street graph: segment NDJSON round-trips") {
  const std::vector<SegmentRecord> segs = {
      segment("a", {{{47.1, 8.1}, 410.5}, {{47.2, 8.2}, std::nullopt}})};
  const auto text = write_segments(segs);
  const auto back = parse_segments(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0].id == "a");
  CHECK(back[0].points[0].altitude == 410.5);
  CHECK_FALSE(back[0].points[1].altitude.has_value());
  CHECK_THROWS_AS(parse_segments("{\"id\":1}\n"), DataError);
}

TEST_CASE("fixture network: graph reduces the raw point count") {
  const auto build = build_street_graph(
      read_file(std::filesystem::path(BIKERISK_DATA_DIR) / "synthetic_city/network.ndjson"));
  CHECK(build.graph.nodes.size() == 197);
  CHECK(build.graph.edges.size() == 357);
  const double ratio = static_cast<double>(build.graph.nodes.size()) /
                       static_cast<double>(build.report.raw_points);
  CHECK(ratio < 0.1);
  CHECK(build.report.zero_length_dropped == 1);
  CHECK(build.report.near_misses >= 1);
}
