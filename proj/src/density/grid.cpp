#include "bikerisk/density/grid.hpp"

#include "bikerisk/error.hpp"

#include <algorithm>
#include <cmath>

namespace bikerisk::density {

void EvaluationGrid::validate() const {
  if (!(bbox.min.lat < bbox.max.lat) || !(bbox.min.lon < bbox.max.lon)) {
    throw ValidationError("evaluation grid box must satisfy min < max");
  }
  if (lon_divisions < 2 || lat_divisions < 2) {
    throw ValidationError("evaluation grid needs at least 2 divisions per axis");
  }
  if (!(margin >= 0.0) || !std::isfinite(margin)) {
    throw ValidationError("extension margin must be >= 0");
  }
}

Lattice EvaluationGrid::lattice() const {
  return Lattice{bbox.min.lat, bbox.min.lon, lat_step(), lon_step(), 0, 0, lat_divisions,
                 lon_divisions};
}

Lattice EvaluationGrid::extended_lattice() const {
  Lattice l = lattice();
  if (margin <= 0.0) return l;
  const int extra_rows = static_cast<int>(std::ceil(margin / l.lat_step));
  const int extra_cols = static_cast<int>(std::ceil(margin / l.lon_step));
  l.row_offset = -extra_rows;
  l.col_offset = -extra_cols;
  l.rows += 2 * extra_rows;
  l.cols += 2 * extra_cols;
  return l;
}

RiskGrid::RiskGrid(EvaluationGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.lattice().size()) {
    throw DataError("grid value count " + std::to_string(values_.size()) +
                    " does not match divisions " + std::to_string(grid_.lon_divisions) + "x" +
                    std::to_string(grid_.lat_divisions));
  }
}

RiskGrid::RiskGrid(EvaluationGrid grid) : RiskGrid(grid, std::vector<double>(grid.lattice().size(), 0.0)) {}

double RiskGrid::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

std::size_t RiskGrid::argmax() const {
  return static_cast<std::size_t>(std::max_element(values_.begin(), values_.end()) -
                                  values_.begin());
}

void RiskGrid::check_values() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw DataError("grid value at index " + std::to_string(i) + " is negative or non-finite");
    }
  }
}

double trapezoid_mass(const RiskGrid& grid) {
  const int rows = grid.rows();
  const int cols = grid.cols();
  double sum = 0.0;
  for (int r = 0; r < rows; ++r) {
    const double wr = (r == 0 || r == rows - 1) ? 0.5 : 1.0;
    for (int c = 0; c < cols; ++c) {
      const double wc = (c == 0 || c == cols - 1) ? 0.5 : 1.0;
      sum += wr * wc * grid.at(r, c);
    }
  }
  return sum * grid.grid().lat_step() * grid.grid().lon_step();
}

void require_aligned(const RiskGrid& a, const RiskGrid& b, const char* what) {
  const auto& ga = a.grid();
  const auto& gb = b.grid();
  if (!(ga.bbox == gb.bbox) || ga.lon_divisions != gb.lon_divisions ||
      ga.lat_divisions != gb.lat_divisions) {
    throw DataError(std::string(what) + ": grids are not aligned");
  }
}

}  // namespace bikerisk::density
