#include "bikerisk/density/kde.hpp"

#include "bikerisk/error.hpp"
#include "bikerisk/parallel.hpp"

#include <cmath>

namespace bikerisk::density {
namespace {

constexpr std::size_t kBlock = 128;

}  // namespace

// The Gaussian factorizes into a latitude and a longitude term, so every
// point contributes an outer product gy (rows) x gx (cols) to the lattice.
std::vector<double> evaluate_kde(std::span<const GeoPoint> points, const Lattice& lattice,
                                 const KernelParams& params, unsigned threads) {
  params.validate();
  if (points.empty()) throw DataError("no observations");

  const auto rows = static_cast<std::size_t>(lattice.rows);
  const auto cols = static_cast<std::size_t>(lattice.cols);
  std::vector<double> lat(rows), lon(cols);
  for (std::size_t r = 0; r < rows; ++r) lat[r] = lattice.lat(static_cast<int>(r));
  for (std::size_t c = 0; c < cols; ++c) lon[c] = lattice.lon(static_cast<int>(c));

  const double inv_two_h = 1.0 / (2.0 * params.bandwidth);
  std::vector<double> values(rows * cols, 0.0);
  std::vector<double> gx(kBlock * cols), gy(kBlock * rows);

  for (std::size_t first = 0; first < points.size(); first += kBlock) {
    const std::size_t count = std::min(kBlock, points.size() - first);
    for (std::size_t i = 0; i < count; ++i) {
      const auto& p = points[first + i];
      for (std::size_t c = 0; c < cols; ++c) {
        const double d = lon[c] - p.lon;
        gx[i * cols + c] = std::exp(-d * d * inv_two_h);
      }
      for (std::size_t r = 0; r < rows; ++r) {
        const double d = lat[r] - p.lat;
        gy[i * rows + r] = std::exp(-d * d * inv_two_h);
      }
    }
    parallel_for(rows, threads, [&](std::size_t r0, std::size_t r1) {
      for (std::size_t r = r0; r < r1; ++r) {
        double* out = values.data() + r * cols;
        for (std::size_t i = 0; i < count; ++i) {
          const double wy = gy[i * rows + r];
          if (wy == 0.0) continue;
          const double* wx = gx.data() + i * cols;
          for (std::size_t c = 0; c < cols; ++c) out[c] += wy * wx[c];
        }
      }
    });
  }

  const double scale = kernel_peak(params) / static_cast<double>(points.size());
  for (auto& v : values) v *= scale;
  return values;
}

RiskGrid estimate_density(std::span<const GeoPoint> points, const EvaluationGrid& grid,
                          const KernelParams& params, unsigned threads) {
  grid.validate();
  params.validate();
  if (points.empty()) throw DataError("no observations");
  const BoundingBox window = grid.bbox.expanded(grid.margin);
  for (const auto& p : points) {
    if (!window.contains(p)) {
      throw ValidationError("observation " + to_string(p) + " outside the estimation window " +
                            to_string(window));
    }
  }

  if (grid.margin <= 0.0) {
    return RiskGrid(grid, evaluate_kde(points, grid.lattice(), params, threads));
  }

  const Lattice ext = grid.extended_lattice();
  const auto full = evaluate_kde(points, ext, params, threads);
  std::vector<double> restricted;
  restricted.reserve(grid.lattice().size());
  for (int r = 0; r < grid.lat_divisions; ++r) {
    const auto row = static_cast<std::size_t>(r - ext.row_offset);
    const auto col0 = static_cast<std::size_t>(-ext.col_offset);
    const double* src = full.data() + row * static_cast<std::size_t>(ext.cols) + col0;
    restricted.insert(restricted.end(), src, src + grid.lon_divisions);
  }
  RiskGrid out(grid, std::move(restricted));

  std::size_t inside = 0;
  for (const auto& p : points) inside += grid.bbox.contains(p) ? 1 : 0;
  const double fraction = static_cast<double>(inside) / static_cast<double>(points.size());
  const double mass = trapezoid_mass(out);
  const double scale = mass > 0.0 ? fraction / mass : 0.0;
  for (auto& v : out.mutable_values()) v *= scale;
  return out;
}

std::size_t PartitionedDensity::total() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

RiskGrid PartitionedDensity::pooled() const {
  if (grids.empty()) throw DataError("no partitions");
  RiskGrid out(grids.front().grid());
  const double n = static_cast<double>(total());
  auto& acc = out.mutable_values();
  for (std::size_t s = 0; s < grids.size(); ++s) {
    const double w = static_cast<double>(counts[s]) / n;
    const auto& v = grids[s].values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
  }
  return out;
}

PartitionedDensity estimate_partitioned(std::span<const std::vector<GeoPoint>> partitions,
                                        const EvaluationGrid& grid, const KernelParams& params,
                                        unsigned threads) {
  PartitionedDensity out;
  for (std::size_t s = 0; s < partitions.size(); ++s) {
    if (partitions[s].empty()) {
      out.warnings.push_back("partition " + std::to_string(s) + " is empty and was skipped");
      continue;
    }
    out.grids.push_back(estimate_density(partitions[s], grid, params, threads));
    out.counts.push_back(partitions[s].size());
    out.source.push_back(s);
  }
  if (out.grids.empty()) throw DataError("all partitions are empty");
  return out;
}

SeverityDensities estimate_by_severity(const std::map<Severity, std::vector<GeoPoint>>& partitions,
                                       const EvaluationGrid& grid, const KernelParams& params,
                                       unsigned threads) {
  SeverityDensities out;
  for (auto s : kAllSeverities) {
    auto it = partitions.find(s);
    if (it == partitions.end() || it->second.empty()) {
      out.warnings.push_back(std::string("no ") + std::string(to_string(s)) +
                             " observations; partition skipped");
      continue;
    }
    out.grids.emplace(s, estimate_density(it->second, grid, params, threads));
    out.counts.emplace(s, it->second.size());
  }
  if (out.grids.empty()) throw DataError("all severity partitions are empty");
  return out;
}

}  // namespace bikerisk::density
