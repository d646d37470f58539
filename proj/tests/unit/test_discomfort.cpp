#include "bikerisk/discomfort/discomfort.hpp"
#include "bikerisk/error.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

using bikerisk::ValidationError;
using bikerisk::discomfort::assign_edge_discomfort;
using bikerisk::discomfort::discomfort;
using bikerisk::discomfort::DiscomfortParams;
namespace ingest = bikerisk::ingest;

TEST_CASE("discomfort law reference values") {
  CHECK(discomfort(500, -0.1) == doctest::Approx(187.289278790972).epsilon(1e-12));
  CHECK(discomfort(1000, 0.05) == doctest::Approx(3234.00003322535).epsilon(1e-12));
  CHECK(discomfort(100, 0.05) == doctest::Approx(323.400003322535).epsilon(1e-12));
  CHECK(discomfort(100, -0.05) == doctest::Approx(37.4578557581944).epsilon(1e-12));
  CHECK(discomfort(250, 0.0) == doctest::Approx(250.0).epsilon(1e-15));
  CHECK(discomfort(0, 0.3) == 0.0);
}

TEST_CASE("discomfort is flat below the grade floor") {
  const double floor_value = 0.374578557581944;
  for (double x : {-0.025, -0.03, -0.1, -0.5, -1.0}) {
    CHECK(discomfort(1, x) == doctest::Approx(floor_value).epsilon(1e-12));
  }
  CHECK(discomfort(1, -0.02) > floor_value);
}

TEST_CASE("discomfort agrees with the oracle and is monotone") {
  gen::Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    const double d = rng.uniform(0, 2000);
    const double x = rng.uniform(-1, 1);
    CHECK(discomfort(d, x) == doctest::Approx(oracle::discomfort(d, x)).epsilon(1e-12));
    const double y = std::min(1.0, x + rng.uniform(0, 0.2));
    CHECK(discomfort(d, y) >= discomfort(d, x));
    CHECK(discomfort(2 * d, x) == doctest::Approx(2 * discomfort(d, x)).epsilon(1e-12));
    CHECK(discomfort(d, x) >= 0.0);
  }
}

TEST_CASE("discomfort rejects bad inputs") {
  CHECK_THROWS_AS(discomfort(-1, 0), ValidationError);
  CHECK_THROWS_AS(discomfort(1, 1.5), ValidationError);
  CHECK_THROWS_AS(discomfort(1, NAN), ValidationError);
  DiscomfortParams p;
  p.amplitude = 1.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("edge discomfort is direction sensitive") {
  ingest::StreetGraph g;
  g.nodes = {{0, {47.37, 8.52}, 400.0}, {1, {47.371, 8.52}, 410.0}, {2, {47.372, 8.52}, {}}};
  g.edges = {{0, 1, 200.0, 0.05}, {1, 2, 100.0, 0.2}};
  const auto d = assign_edge_discomfort(g);
  CHECK(d.forward[0] == doctest::Approx(discomfort(200, 0.05)));
  CHECK(d.backward[0] == doctest::Approx(discomfort(200, -0.05)));
  CHECK(d.forward[0] > d.backward[0]);
  // Missing altitude falls back to a level edge.
  CHECK(d.forward[1] == doctest::Approx(100.0));
  CHECK(d.backward[1] == doctest::Approx(100.0));
  CHECK(d.warnings.size() == 1);
}
