#include "bikerisk/error.hpp"
#include "bikerisk/router/route_io.hpp"
#include "bikerisk/router/router.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace bikerisk;
using namespace bikerisk::router;
using riskmap::WeightedEdge;
using riskmap::WeightedStreetGraph;

namespace {

WeightedStreetGraph square(double top, double bottom) {
  // 0 - 1 - 3 along the top, 0 - 2 - 3 along the bottom.
  WeightedStreetGraph g;
  g.nodes = {{0, {47.370, 8.520}, {}}, {1, {47.371, 8.521}, {}}, {2, {47.369, 8.521}, {}},
             {3, {47.370, 8.522}, {}}};
  auto e = [](NodeId a, NodeId b, double w) {
    WeightedEdge x;
    x.a = a;
    x.b = b;
    x.length_m = 100;
    x.risk = w;
    x.discomfort_forward = x.discomfort_backward = w;
    return x;
  };
  g.edges = {e(0, 2, bottom), e(2, 3, bottom), e(0, 1, top), e(1, 3, top)};
  return g;
}

}  // namespace

TEST_CASE("blend endpoints use a single weight family") {
  const auto g = gen::two_path_network();
  const auto scales = weight_scales(g, {});
  CHECK(scales.risk == doctest::Approx(20.0));
  CHECK(scales.discomfort == doctest::Approx(17.5));
  const auto risk_only = blend_weights(g, 1.0);
  const auto effort_only = blend_weights(g, 0.0);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(risk_only.forward[i] == doctest::Approx(g.edges[i].risk / 20.0));
    CHECK(effort_only.backward[i] == doctest::Approx(g.edges[i].discomfort_backward / 17.5));
  }
  const auto raw = blend_weights(g, 0.25, {false});
  CHECK(raw.forward[0] == doctest::Approx(0.25 * 30 + 0.75 * 10));
  CHECK_THROWS_AS(blend_weights(g, 1.5), ValidationError);
  CHECK_THROWS_AS(blend_weights(g, -0.1), ValidationError);
}

TEST_CASE("zero weight family gets a unit scale and a warning") {
  auto g = gen::two_path_network();
  for (auto& e : g.edges) e.risk = 0.0;
  const auto s = weight_scales(g, {});
  CHECK(s.risk == 1.0);
  CHECK(s.warnings.size() == 1);
}

TEST_CASE("nearest node picks the closest and flags far matches") {
  const auto g = gen::two_path_network();
  const auto m = nearest_node(g, {47.3719, 8.5231});
  CHECK(m.node == 1);
  CHECK_FALSE(m.warning.has_value());
  const auto far = nearest_node(g, {47.40, 8.52});
  CHECK(far.warning.has_value());
  CHECK_THROWS_AS(nearest_node(WeightedStreetGraph{}, {47, 8}), ValidationError);
}

TEST_CASE("two-path network switches paths at the crossover") {
  const Router r(gen::two_path_network());
  CHECK(r.route_between(0, 2, 0.0).nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(r.route_between(0, 2, 1.0).nodes == std::vector<NodeId>{0, 3, 2});
  CHECK(r.route_between(0, 2, gen::kTwoPathCrossover - 0.005).nodes ==
        std::vector<NodeId>{0, 1, 2});
  CHECK(r.route_between(0, 2, gen::kTwoPathCrossover + 0.005).nodes ==
        std::vector<NodeId>{0, 3, 2});
  const auto risky = r.route_between(0, 2, 0.0);
  CHECK(risky.total_risk == 60.0);
  CHECK(risky.total_discomfort == 20.0);
  CHECK(risky.total_length_m == 600.0);
  CHECK(risky.alpha == 0.0);
}

TEST_CASE("exact ties go to the lexicographically smaller node sequence") {
  const Router r(square(1.0, 1.0));
  CHECK(r.route_between(0, 3, 0.5).nodes == std::vector<NodeId>{0, 1, 3});
  CHECK(r.route_between(3, 0, 0.5).nodes == std::vector<NodeId>{3, 1, 0});
  const Router cheaper_bottom(square(1.0, 0.9));
  CHECK(cheaper_bottom.route_between(0, 3, 0.5).nodes == std::vector<NodeId>{0, 2, 3});
}

TEST_CASE("zero-cost edges do not trap the search") {
  auto g = square(0.0, 0.0);
  g.edges[3].risk = 1.0;
  const Router r(g, {false});
  const auto route = r.route_between(0, 3, 0.0);
  CHECK(route.total_cost == 0.0);
  CHECK(route.nodes == std::vector<NodeId>{0, 1, 3});
}

TEST_CASE("router matches exhaustive search on small random graphs") {
  gen::Rng rng(51);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 2 + rng.below(9);
    const auto g = gen::random_network(rng, n, rng.below(2 * n));
    const double alpha = trial % 10 == 0 ? 0.0 : trial % 10 == 1 ? 1.0 : rng.uniform();
    const bool normalize = trial % 3 != 0;
    const Router r(g, {normalize});
    const auto arcs = gen::blended_arcs(g, alpha, normalize);
    const auto s = static_cast<NodeId>(rng.below(n));
    const auto t = static_cast<NodeId>(rng.below(n));
    const auto best = oracle::exhaustive_min(n, arcs, s, t);
    REQUIRE(best.has_value());
    const auto route = r.route_between(s, t, alpha);
    CHECK(route.total_cost == doctest::Approx(*best).epsilon(1e-12));
    CHECK(route.nodes.front() == s);
    CHECK(route.nodes.back() == t);
  }
}

TEST_CASE("router matches uniform-cost search on larger graphs") {
  gen::Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 20 + rng.below(180);
    auto g = gen::random_network(rng, n, rng.below(3 * n));
    // Some edges off the grid, which can disconnect parts of the graph.
    for (auto& e : g.edges) {
      if (rng.uniform() < 0.03) e.routable = false;
    }
    const double alpha = rng.uniform();
    const Router r(g);
    const auto arcs = gen::blended_arcs(g, alpha, true);
    const auto s = static_cast<NodeId>(rng.below(n));
    const auto t = static_cast<NodeId>(rng.below(n));
    const auto best = oracle::least_cost(n, arcs, s, t);
    if (!best) {
      CHECK_THROWS_AS(r.route_between(s, t, alpha), NoRouteError);
      continue;
    }
    const auto route = r.route_between(s, t, alpha);
    CHECK(route.total_cost == doctest::Approx(*best).epsilon(1e-12));
    for (auto e : route.edges) CHECK(g.edges[e].routable);
  }
}

TEST_CASE("route totals are the sums of the traversed edges") {
  gen::Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = gen::random_network(rng, 40, 60);
    const Router r(g);
    const double alpha = rng.uniform();
    const auto route = r.route_between(0, static_cast<NodeId>(1 + rng.below(39)), alpha);
    REQUIRE(route.nodes.size() == route.edges.size() + 1);
    double risk = 0, discomfort = 0, length = 0;
    for (std::size_t i = 0; i < route.edges.size(); ++i) {
      const auto& e = g.edges[route.edges[i]];
      CHECK(((e.a == route.nodes[i] && e.b == route.nodes[i + 1]) ||
             (e.b == route.nodes[i] && e.a == route.nodes[i + 1])));
      risk += e.risk;
      discomfort += e.discomfort_from(route.nodes[i]);
      length += e.length_m;
    }
    CHECK(route.total_risk == doctest::Approx(risk).epsilon(1e-12));
    CHECK(route.total_discomfort == doctest::Approx(discomfort).epsilon(1e-12));
    CHECK(route.total_length_m == doctest::Approx(length).epsilon(1e-12));
  }
}

TEST_CASE("disconnected and invalid queries") {
  auto g = gen::two_path_network();
  g.edges[1].routable = false;
  g.edges[3].routable = false;
  const Router r(g);
  CHECK_THROWS_AS(r.route_between(0, 2, 0.5), NoRouteError);
  CHECK_THROWS_AS(r.route_between(0, 9, 0.5), ValidationError);
  CHECK_THROWS_AS(r.route_between(0, 1, 2.0), ValidationError);
  CHECK(r.route_between(1, 1, 0.5).nodes == std::vector<NodeId>{1});
  RouteQuery q;
  q.alpha = -0.5;
  CHECK_THROWS_AS(q.validate(), ValidationError);
}

TEST_CASE("find_route stitches legs through waypoints") {
  const Router r(gen::two_path_network());
  RouteQuery q;
  q.departure = {47.3700, 8.5200};
  q.destination = {47.3700, 8.5260};
  q.waypoints = {{47.3680, 8.5230}};
  q.alpha = 0.0;
  std::vector<std::string> warnings;
  const auto route = r.find_route(q, &warnings);
  CHECK(route.nodes == std::vector<NodeId>{0, 3, 2});
  CHECK(route.total_discomfort == 50.0);
  CHECK(warnings.empty());
}

TEST_CASE("text export has the fixed layout") {
  const Router r(gen::two_path_network());
  const auto route = r.route_between(0, 2, 1.0);
  CHECK(export_route_txt(route, r.graph()) ==
        "47.370000,8.520000\n47.368000,8.523000\n47.370000,8.526000\nrisk=20\ndiscomfort=50\n");
}

TEST_CASE("text export and import round-trip on random routes") {
  gen::Rng rng(54);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = gen::random_network(rng, 60, 80);
    const Router r(g);
    const auto route = r.route_between(static_cast<NodeId>(rng.below(60)),
                                       static_cast<NodeId>(rng.below(60)), rng.uniform());
    const auto text = export_route_txt(route, g);
    const auto back = import_route_txt(text, r);
    CHECK(back.route.nodes == route.nodes);
    CHECK(back.route.total_risk == route.total_risk);
    CHECK(back.route.total_discomfort == route.total_discomfort);
    CHECK(back.file_risk == route.total_risk);
    CHECK(back.warnings.empty());
    CHECK_FALSE(back.route.alpha.has_value());
  }
}

TEST_CASE("import reports unmatched points and mismatched totals") {
  const Router r(gen::two_path_network());
  CHECK_THROWS_AS(import_route_txt("47.000000,8.000000\n", r), DataError);
  CHECK_THROWS_AS(import_route_txt("47.370000,8.520000\n47.370000,8.526000\n", r), DataError);
  CHECK_THROWS_AS(import_route_txt("", r), DataError);
  const auto imp = import_route_txt(
      "47.370000,8.520000\n47.372000,8.523000\n47.370000,8.526000\nrisk=61\ndiscomfort=20\n", r);
  CHECK(imp.route.total_risk == 60.0);
  CHECK(imp.warnings.size() == 1);
}

TEST_CASE("route JSON round-trips and GeoJSON lists lon,lat") {
  const Router r(gen::two_path_network());
  const auto route = r.route_between(0, 2, 0.3);
  CHECK(route_from_json(route_to_json(route, r.graph())) == route);
  const auto gj = route_to_geojson(route, r.graph());
  CHECK(gj["geometry"]["coordinates"][0][0] == 8.52);
  CHECK(gj["geometry"]["coordinates"][0][1] == 47.37);
}
