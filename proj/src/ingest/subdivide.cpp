#include "bikerisk/ingest/subdivide.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace bikerisk::ingest {
namespace {

// Boundary i of n equal parts of [lo, hi]; the last boundary is exactly hi.
double boundary(double lo, double hi, std::uint64_t i, std::uint64_t n) {
  if (i >= n) return hi;
  return lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(n));
}

// Half-open bin of v among n parts of [lo, hi]; hi itself falls in the last bin.
std::ptrdiff_t bin_of(double v, double lo, double hi, std::uint64_t n) {
  if (v < lo || v > hi) return -1;
  auto i = static_cast<std::int64_t>(std::floor((v - lo) / (hi - lo) * static_cast<double>(n)));
  i = std::clamp<std::int64_t>(i, 0, static_cast<std::int64_t>(n) - 1);
  while (i > 0 && boundary(lo, hi, static_cast<std::uint64_t>(i), n) > v) --i;
  while (i + 1 < static_cast<std::int64_t>(n) &&
         boundary(lo, hi, static_cast<std::uint64_t>(i + 1), n) <= v) {
    ++i;
  }
  return static_cast<std::ptrdiff_t>(i);
}

BoundingBox cell_box(const BoundingBox& region, std::uint64_t n, std::uint64_t row,
                     std::uint64_t col) {
  return BoundingBox{{boundary(region.min.lat, region.max.lat, row, n),
                      boundary(region.min.lon, region.max.lon, col, n)},
                     {boundary(region.min.lat, region.max.lat, row + 1, n),
                      boundary(region.min.lon, region.max.lon, col + 1, n)}};
}

}  // namespace

std::ptrdiff_t cell_index(const BoundingBox& region, int depth, const GeoPoint& p) {
  const std::uint64_t n = std::uint64_t{1} << depth;
  const auto row = bin_of(p.lat, region.min.lat, region.max.lat, n);
  const auto col = bin_of(p.lon, region.min.lon, region.max.lon, n);
  if (row < 0 || col < 0) return -1;
  return static_cast<std::ptrdiff_t>(static_cast<std::uint64_t>(row) * n +
                                     static_cast<std::uint64_t>(col));
}

Subdivision subdivide_region(const BoundingBox& region, std::span<const GeoPoint> points,
                             const SubdivisionOptions& options) {
  if (options.threshold < 1) {
    throw ValidationError("subdivision threshold must be >= 1");
  }
  if (options.max_depth < 0 || options.max_depth > 30) {
    throw ValidationError("subdivision max_depth must be in [0, 30]");
  }
  for (const auto& p : points) {
    if (!region.contains(p)) {
      throw ValidationError("point " + to_string(p) + " outside subdivision region " +
                            to_string(region));
    }
  }

  std::vector<std::uint64_t> keys(points.size());
  for (int depth = 0;; ++depth) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      keys[i] = static_cast<std::uint64_t>(cell_index(region, depth, points[i]));
    }
    std::sort(keys.begin(), keys.end());

    std::size_t worst = 0;
    std::uint64_t worst_key = 0;
    for (std::size_t i = 0; i < keys.size();) {
      std::size_t j = i;
      while (j < keys.size() && keys[j] == keys[i]) ++j;
      if (j - i > worst) {
        worst = j - i;
        worst_key = keys[i];
      }
      i = j;
    }

    const std::uint64_t n = std::uint64_t{1} << depth;
    if (worst <= options.threshold) {
      const std::uint64_t total = n * n;
      if (total > options.max_cells) {
        throw DataError("subdivision needs " + std::to_string(total) +
                        " cells, above the configured maximum");
      }
      Subdivision out;
      out.iterations = depth;
      out.cells.reserve(total);
      out.counts.assign(total, 0);
      for (std::uint64_t r = 0; r < n; ++r) {
        for (std::uint64_t c = 0; c < n; ++c) out.cells.push_back(cell_box(region, n, r, c));
      }
      for (auto k : keys) ++out.counts[k];
      return out;
    }
    if (depth == options.max_depth) {
      const BoundingBox cell = cell_box(region, n, worst_key / n, worst_key % n);
      throw SubdivisionError("subdivision did not converge by depth " + std::to_string(depth) +
                                 ": cell " + to_string(cell) + " still holds " +
                                 std::to_string(worst) + " points",
                             cell, worst, depth);
    }
  }
}

}  // namespace bikerisk::ingest
