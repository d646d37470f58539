#include "bikerisk/density/grid.hpp"
#include "bikerisk/density/grid_io.hpp"
#include "bikerisk/density/kde.hpp"
#include "bikerisk/density/kernel.hpp"
#include "bikerisk/density/transforms.hpp"
#include "bikerisk/error.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace bikerisk;
using namespace bikerisk::density;

namespace {

EvaluationGrid grid_over(const BoundingBox& box, int cols, int rows, double margin = 0.0) {
  EvaluationGrid g;
  g.bbox = box;
  g.lon_divisions = cols;
  g.lat_divisions = rows;
  g.margin = margin;
  return g;
}

KernelParams bw(double h) {
  KernelParams p;
  p.bandwidth = h;
  return p;
}

const BoundingBox kCity = BoundingBox::make(47.3650, 8.5141, 47.3886, 8.5523);

}  // namespace

TEST_CASE("kernel peak and one-bandwidth falloff") {
  CHECK(kernel_peak(bw(0.003)) == doctest::Approx(53.0516476972984).epsilon(1e-12));
  CHECK(kernel(0, 0, bw(0.003)) == doctest::Approx(53.0516476972984).epsilon(1e-12));
  // |v|^2 = 2h gives exp(-1) of the peak.
  const double r = std::sqrt(2 * 0.003);
  CHECK(kernel(r, 0, bw(0.003)) == doctest::Approx(19.5166105081064).epsilon(1e-12));
  CHECK(kernel(0, r, bw(0.003)) == doctest::Approx(19.5166105081064).epsilon(1e-12));
  CHECK(kernel_peak(bw(0.001)) == doctest::Approx(159.154943091895).epsilon(1e-12));
  CHECK(kernel_peak(bw(0.01)) == doctest::Approx(15.9154943091895).epsilon(1e-12));
}

TEST_CASE("kernel parameters are validated") {
  CHECK_THROWS_AS(bw(0).validate(), ValidationError);
  CHECK_THROWS_AS(bw(-1).validate(), ValidationError);
  KernelParams p;
  p.dimension = 3;
  CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("kernel is radially symmetric and decreasing") {
  gen::Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform(0, 0.2), b = rng.uniform(0, 0.2);
    CHECK(kernel(a, b, bw(0.003)) == kernel(-a, b, bw(0.003)));
    CHECK(kernel(a, b, bw(0.003)) == doctest::Approx(kernel(b, a, bw(0.003))).epsilon(1e-14));
    CHECK(kernel(a * 1.1 + 1e-6, b, bw(0.003)) < kernel(a, b, bw(0.003)) + 1e-300);
  }
}

TEST_CASE("grid lattice puts vertices on the box corners") {
  const auto g = grid_over(kCity, 560, 440);
  const auto l = g.lattice();
  CHECK(l.lat(0) == kCity.min.lat);
  CHECK(l.lon(0) == kCity.min.lon);
  CHECK(l.lat(439) == doctest::Approx(kCity.max.lat).epsilon(1e-15));
  CHECK(l.lon(559) == doctest::Approx(kCity.max.lon).epsilon(1e-15));
  CHECK_THROWS_AS(grid_over(kCity, 1, 440).validate(), ValidationError);
}

TEST_CASE("extended lattice shares vertices with the study lattice") {
  const auto g = grid_over(kCity, 56, 44, 0.01);
  const auto l = g.lattice();
  const auto e = g.extended_lattice();
  CHECK(e.lat(0) <= kCity.min.lat - 0.01 + 1e-12);
  CHECK(e.lon(e.cols - 1) >= kCity.max.lon + 0.01 - 1e-12);
  for (int r = 0; r < l.rows; ++r) CHECK(e.lat(r - e.row_offset) == l.lat(r));
  for (int c = 0; c < l.cols; ++c) CHECK(e.lon(c - e.col_offset) == l.lon(c));
}

TEST_CASE("KDE matches a direct long double sum") {
  gen::Rng rng(22);
  for (double h : {0.003, 1e-4, 9e-6}) {
    const auto pts = gen::points_in(rng, kCity, 150);
    const auto g = grid_over(kCity, 23, 17);
    const auto est = estimate_density(pts, g, bw(h));
    const auto l = g.lattice();
    for (int r = 0; r < l.rows; ++r) {
      for (int c = 0; c < l.cols; ++c) {
        const double want = oracle::kde_at(pts, l.lat(r), l.lon(c), h);
        CHECK(est.at(r, c) == doctest::Approx(want).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("KDE of a single point at a vertex is the kernel peak") {
  const auto g = grid_over(BoundingBox::make(0, 0, 1, 1), 11, 11);
  const std::vector<GeoPoint> pts = {{0.5, 0.5}};
  const auto est = estimate_density(pts, g, bw(0.003));
  CHECK(est.at(5, 5) == doctest::Approx(53.0516476972984).epsilon(1e-12));
  CHECK(est.argmax() == 5 * 11 + 5);
}

TEST_CASE("KDE is bitwise independent of the thread count") {
  gen::Rng rng(23);
  const auto pts = gen::points_in(rng, kCity.expanded(0.005), 700);
  const auto g = grid_over(kCity, 71, 53, 0.01);
  const auto one = estimate_density(pts, g, bw(1e-5), 1);
  for (unsigned t : {2u, 3u, 8u}) CHECK(estimate_density(pts, g, bw(1e-5), t) == one);
}

TEST_CASE("KDE integrates to nearly one when the support is well inside") {
  gen::Rng rng(24);
  const auto pts = gen::points_in(rng, BoundingBox::make(0.2, 0.2, 0.8, 0.8), 40);
  const auto est = estimate_density(pts, grid_over(BoundingBox::make(0, 0, 1, 1), 201, 201),
                                    bw(0.003));
  const double mass = trapezoid_mass(est);
  CHECK(mass >= 0.95);
  CHECK(mass <= 1.0 + 1e-9);
}

TEST_CASE("KDE is translation equivariant") {
  gen::Rng rng(25);
  const auto box = BoundingBox::make(10, 20, 10.05, 20.08);
  const auto moved = BoundingBox::make(11, 21, 11.05, 21.08);
  const auto pts = gen::points_in(rng, box, 60);
  std::vector<GeoPoint> shifted;
  for (const auto& p : pts) shifted.push_back({p.lat + 1.0, p.lon + 1.0});
  const auto a = estimate_density(pts, grid_over(box, 30, 20), bw(1e-4));
  const auto b = estimate_density(shifted, grid_over(moved, 30, 20), bw(1e-4));
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    CHECK(b.values()[i] == doctest::Approx(a.values()[i]).epsilon(1e-7));
  }
}

TEST_CASE("larger bandwidth lowers the peak of a single-point estimate") {
  const auto g = grid_over(BoundingBox::make(0, 0, 1, 1), 21, 21);
  const std::vector<GeoPoint> pts = {{0.5, 0.5}};
  double last = INFINITY;
  for (double h : {1e-4, 1e-3, 3e-3, 1e-2, 3e-2}) {
    const double peak = estimate_density(pts, g, bw(h)).max_value();
    CHECK(peak < last);
    last = peak;
  }
}

TEST_CASE("margin renormalization keeps the inside fraction of the mass") {
  gen::Rng rng(26);
  const auto box = BoundingBox::make(0, 0, 0.1, 0.1);
  auto pts = gen::points_in(rng, box, 80);
  const auto outside = gen::points_in(rng, BoundingBox::make(0.1005, 0.02, 0.105, 0.08), 20);
  pts.insert(pts.end(), outside.begin(), outside.end());
  const auto est = estimate_density(pts, grid_over(box, 81, 81, 0.01), bw(1e-5));
  CHECK(trapezoid_mass(est) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK_THROWS_AS(estimate_density(pts, grid_over(box, 81, 81, 0.0), bw(1e-5)), ValidationError);
  const std::vector<GeoPoint> far = {{0.5, 0.5}};
  CHECK_THROWS_AS(estimate_density(far, grid_over(box, 81, 81, 0.01), bw(1e-5)), ValidationError);
  CHECK_THROWS_AS(estimate_density({}, grid_over(box, 81, 81), bw(1e-5)), DataError);
}

TEST_CASE("pooled partition estimates reproduce the joint estimate") {
  gen::Rng rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<GeoPoint>> parts(3);
    std::vector<GeoPoint> all;
    for (int i = 0; i < 120; ++i) {
      const auto p = gen::points_in(rng, kCity, 1)[0];
      parts[rng.below(3)].push_back(p);
      all.push_back(p);
    }
    if (trial == 0) parts[1].clear();
    all.clear();
    for (const auto& part : parts) all.insert(all.end(), part.begin(), part.end());
    const auto g = grid_over(kCity, 28, 22);
    const auto pd = estimate_partitioned(parts, g, bw(2e-5));
    if (trial == 0) CHECK(pd.warnings.size() == 1);
    const auto pooled = pd.pooled();
    const auto joint = estimate_density(all, g, bw(2e-5));
    const double peak = joint.max_value();
    for (std::size_t i = 0; i < pooled.values().size(); ++i) {
      CHECK(std::abs(pooled.values()[i] - joint.values()[i]) <= 1e-9 * peak);
    }
  }
  const std::vector<std::vector<GeoPoint>> empty(2);
  CHECK_THROWS_AS(estimate_partitioned(empty, grid_over(kCity, 5, 5), bw(1e-4)), DataError);
}

TEST_CASE("severity weights normalize a ratio") {
  const auto w = SeverityWeights::standard();
  CHECK(w.light() == doctest::Approx(1.0 / 13));
  CHECK(w.severe() == doctest::Approx(6.0 / 13));
  CHECK(w.death() == doctest::Approx(6.0 / 13));
  CHECK(w.light() + w.severe() + w.death() == doctest::Approx(1.0).epsilon(1e-15));
  const auto ins = SeverityWeights::insurance();
  CHECK(ins.death() == doctest::Approx(20.0 / 27));
  CHECK_THROWS_AS(SeverityWeights::from_ratio(0, 0, 0), ValidationError);
  CHECK_THROWS_AS(SeverityWeights::from_ratio(-1, 1, 1), ValidationError);
}

TEST_CASE("reweight, traffic normalization and Box-Cox") {
  const auto g = grid_over(BoundingBox::make(0, 0, 1, 1), 2, 2);
  std::map<Severity, RiskGrid> parts;
  parts.emplace(Severity::Light, RiskGrid(g, {1, 2, 3, 4}));
  parts.emplace(Severity::Severe, RiskGrid(g, {0, 0, 13, 0}));
  const auto f = reweight(parts, SeverityWeights::standard());
  CHECK(f.values()[0] == doctest::Approx(1.0 / 13));
  CHECK(f.values()[2] == doctest::Approx(3.0 / 13 + 6.0));

  const RiskGrid joint(g, {1, 1, 1, 1});
  const RiskGrid traffic(g, {0, 0.5, 1, 2});
  const auto n = normalize_by_traffic(joint, traffic, 0.1);
  CHECK(n.values() == std::vector<double>{5.0, 2.0, 1.0, 0.5});
  CHECK_THROWS_AS(normalize_by_traffic(joint, RiskGrid(g), 0.1), DataError);
  CHECK_THROWS_AS(normalize_by_traffic(joint, traffic, 0.0), ValidationError);

  const auto bc = box_cox(RiskGrid(g, {0, 1, 4, 9}), 0.5);
  CHECK(bc.values() == std::vector<double>{0, 1, 2, 3});
  CHECK_THROWS_AS(box_cox(RiskGrid(g, {0, -1, 4, 9}), 0.5), DataError);
}

TEST_CASE("Box-Cox preserves order") {
  gen::Rng rng(28);
  const auto g = grid_over(BoundingBox::make(0, 0, 1, 1), 20, 10);
  std::vector<double> v(200);
  for (auto& x : v) x = rng.uniform(0, 50);
  const RiskGrid in(g, v);
  for (double lambda : {0.1, 0.5, 1.0, 2.0}) {
    const auto out = box_cox(in, lambda);
    for (std::size_t i = 1; i < v.size(); ++i) {
      CHECK((v[i - 1] < v[i]) == (out.values()[i - 1] < out.values()[i]));
    }
  }
}

TEST_CASE("grid files round-trip exactly") {
  gen::Rng rng(29);
  const auto g = grid_over(kCity, 13, 7, 0.01);
  std::vector<double> v(g.lattice().size());
  for (auto& x : v) x = rng.uniform(0, 10);
  const RiskGrid grid(g, v);
  CHECK(read_grid_binary(write_grid_binary(grid)) == grid);
  CHECK(grid_from_json(grid_to_json(grid)) == grid);
  auto bytes = write_grid_binary(grid);
  CHECK_THROWS_AS(read_grid_binary(bytes.substr(0, bytes.size() - 3)), DataError);
  bytes[0] = 'X';
  CHECK_THROWS_AS(read_grid_binary(bytes), DataError);
}
