#pragma once

#include "bikerisk/error.hpp"
#include "bikerisk/geo.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace bikerisk::ingest {

/// Result of uniform recursive quartering. After `iterations` rounds the
/// region is split into 2^iterations x 2^iterations equal cells, listed
/// row-major from the south-west corner.
struct Subdivision {
  int iterations = 0;
  std::vector<BoundingBox> cells;
  std::vector<std::size_t> counts;  // points per cell, aligned with `cells`
};

struct SubdivisionOptions {
  std::size_t threshold = 200;
  int max_depth = 20;
  /// Refuse to materialize more cells than this (4^depth grows fast).
  std::size_t max_cells = std::size_t{1} << 22;
};

/// Raised when quartering cannot bring every cell under the threshold,
/// e.g. more than `threshold` coincident points.
class SubdivisionError : public DataError {
 public:
  SubdivisionError(const std::string& what, BoundingBox cell, std::size_t count, int depth)
      : DataError(what), cell_(cell), count_(count), depth_(depth) {}
  const BoundingBox& cell() const { return cell_; }
  std::size_t count() const { return count_; }
  int depth() const { return depth_; }

 private:
  BoundingBox cell_;
  std::size_t count_;
  int depth_;
};

/// Quarters every cell while any cell holds more than `threshold` points.
/// Cell membership is half-open [min, max) on both axes except on the
/// region's own north and east edges, which are closed.
Subdivision subdivide_region(const BoundingBox& region, std::span<const GeoPoint> points,
                             const SubdivisionOptions& options);

/// Index of the cell containing `p` at the given depth, or -1 if outside.
std::ptrdiff_t cell_index(const BoundingBox& region, int depth, const GeoPoint& p);

}  // namespace bikerisk::ingest
