#pragma once

#include "bikerisk/density/grid.hpp"
#include "bikerisk/density/kernel.hpp"
#include "bikerisk/severity.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace bikerisk::density {

/// Raw kernel density (1/n) * sum_i K_h(x - x_i) at every lattice vertex.
/// Each vertex is summed in input order, so the result does not depend on
/// `threads`.
std::vector<double> evaluate_kde(std::span<const GeoPoint> points, const Lattice& lattice,
                                 const KernelParams& params, unsigned threads = 1);

/// Kernel density on the study grid. With a zero margin this is the plain
/// estimate at the grid vertices. With a positive margin the estimate is made
/// on the extended lattice, restricted to the study box, and rescaled so its
/// trapezoid mass equals the fraction of points inside the box.
RiskGrid estimate_density(std::span<const GeoPoint> points, const EvaluationGrid& grid,
                          const KernelParams& params, unsigned threads = 1);

/// Per-partition estimates plus the pooled reconstruction.
struct PartitionedDensity {
  std::vector<RiskGrid> grids;        // one per non-empty partition
  std::vector<std::size_t> counts;    // n_s
  std::vector<std::size_t> source;    // index of the partition in the input
  std::vector<std::string> warnings;

  std::size_t total() const;
  /// sum_s (n_s / n) * f_s
  RiskGrid pooled() const;
};

/// Throws DataError if every partition is empty; empty partitions are
/// skipped with a warning.
PartitionedDensity estimate_partitioned(std::span<const std::vector<GeoPoint>> partitions,
                                        const EvaluationGrid& grid, const KernelParams& params,
                                        unsigned threads = 1);

struct SeverityDensities {
  std::map<Severity, RiskGrid> grids;
  std::map<Severity, std::size_t> counts;
  std::vector<std::string> warnings;
};

SeverityDensities estimate_by_severity(const std::map<Severity, std::vector<GeoPoint>>& partitions,
                                       const EvaluationGrid& grid, const KernelParams& params,
                                       unsigned threads = 1);

}  // namespace bikerisk::density
