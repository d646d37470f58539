#pragma once

#include "bikerisk/density/grid.hpp"
#include "bikerisk/error.hpp"
#include "bikerisk/ingest/street_graph.hpp"

#include <string>
#include <vector>

namespace bikerisk::riskmap {

class OutsideGridError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Bilinear interpolation of the four vertices around `p`. Throws
/// OutsideGridError (mentioning `label` when given) if `p` is off the grid.
double interpolate_risk(const density::RiskGrid& grid, const GeoPoint& p,
                        const std::string& label = {});

struct EdgeRiskOptions {
  /// Edges longer than this are integrated with the trapezoid rule over
  /// ceil(length / spacing) straight pieces instead of only their endpoints.
  double max_sample_spacing_m = 200.0;
  bool dense_sampling = true;
};

struct EdgeRisk {
  std::vector<double> risk;     // w_r per edge
  std::vector<char> routable;   // 0 when an endpoint lies off the grid
  std::vector<std::string> warnings;
};

/// w_r = length * mean interpolated risk along the edge (the endpoint mean for
/// short edges).
EdgeRisk assign_edge_risk(const density::RiskGrid& grid, const ingest::StreetGraph& graph,
                          const EdgeRiskOptions& options = {});

}  // namespace bikerisk::riskmap
