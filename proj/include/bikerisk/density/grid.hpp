#pragma once

#include "bikerisk/geo.hpp"

#include <cstddef>
#include <vector>

namespace bikerisk::density {

/// Regular lattice of vertices. Vertex (row, col) sits at
///   lat = lat_origin + (row + row_offset) * lat_step
///   lon = lon_origin + (col + col_offset) * lon_step
/// The offsets let an enlarged lattice share vertices bit-for-bit with the
/// lattice it was grown from.
struct Lattice {
  double lat_origin = 0.0;
  double lon_origin = 0.0;
  double lat_step = 0.0;
  double lon_step = 0.0;
  int row_offset = 0;
  int col_offset = 0;
  int rows = 0;
  int cols = 0;

  double lat(int row) const { return lat_origin + (row + row_offset) * lat_step; }
  double lon(int col) const { return lon_origin + (col + col_offset) * lon_step; }
  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
};

/// Evaluation grid over the study box. Divisions count grid vertices per
/// axis (560 along longitude and 440 along latitude by default), so the box
/// corners are vertices. `margin` widens the estimation window on every side.
struct EvaluationGrid {
  BoundingBox bbox;
  int lon_divisions = 560;
  int lat_divisions = 440;
  double margin = 0.0;

  void validate() const;

  double lat_step() const { return bbox.lat_span() / (lat_divisions - 1); }
  double lon_step() const { return bbox.lon_span() / (lon_divisions - 1); }

  Lattice lattice() const;
  /// Study lattice grown by whole cells until it covers `margin` on each side.
  Lattice extended_lattice() const;

  friend bool operator==(const EvaluationGrid&, const EvaluationGrid&) = default;
};

/// Scalar field on an EvaluationGrid's vertices, row-major with row 0 at the
/// southern edge and column 0 at the western edge.
class RiskGrid {
 public:
  RiskGrid() = default;
  RiskGrid(EvaluationGrid grid, std::vector<double> values);
  /// All-zero field.
  explicit RiskGrid(EvaluationGrid grid);

  const EvaluationGrid& grid() const { return grid_; }
  int rows() const { return grid_.lat_divisions; }
  int cols() const { return grid_.lon_divisions; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  double at(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols()) +
                   static_cast<std::size_t>(col)];
  }
  double& at(int row, int col) {
    return values_[static_cast<std::size_t>(row) * static_cast<std::size_t>(cols()) +
                   static_cast<std::size_t>(col)];
  }

  double max_value() const;
  /// Flat index of the first maximal vertex.
  std::size_t argmax() const;

  /// Throws DataError if any value is negative or non-finite.
  void check_values() const;

  friend bool operator==(const RiskGrid&, const RiskGrid&) = default;

 private:
  EvaluationGrid grid_;
  std::vector<double> values_;
};

/// Trapezoid-rule integral over the grid's box, in (density x degrees^2).
double trapezoid_mass(const RiskGrid& grid);

/// Throws DataError unless both grids share bbox and divisions.
void require_aligned(const RiskGrid& a, const RiskGrid& b, const char* what);

}  // namespace bikerisk::density
