#pragma once

#include "bikerisk/density/grid.hpp"
#include "bikerisk/severity.hpp"

#include <map>

namespace bikerisk::density {

/// Mixture weights a_s over the severity partitions, summing to one.
class SeverityWeights {
 public:
  /// Normalizes a non-negative ratio, e.g. 1:6:6 -> (1/13, 6/13, 6/13).
  static SeverityWeights from_ratio(double light, double severe, double death);
  /// Default recombination 1:6:6.
  static SeverityWeights standard() { return from_ratio(1, 6, 6); }
  /// Compensation ratio 5'000 : 30'000 : 100'000 CHF, i.e. 1:6:20.
  static SeverityWeights insurance() { return from_ratio(1, 6, 20); }

  double light() const { return light_; }
  double severe() const { return severe_; }
  double death() const { return death_; }
  double weight(Severity s) const;

 private:
  SeverityWeights(double l, double s, double d) : light_(l), severe_(s), death_(d) {}
  double light_, severe_, death_;
};

/// f_R(x) = sum_s a_s * grid_s(x) over the partitions present in the map.
RiskGrid reweight(const std::map<Severity, RiskGrid>& partitions, const SeverityWeights& weights);

/// joint(x) / max(traffic(x), floor_fraction * max traffic).
RiskGrid normalize_by_traffic(const RiskGrid& joint, const RiskGrid& traffic,
                              double floor_fraction);

/// Pointwise value^lambda; a monotone contrast transform for display.
RiskGrid box_cox(const RiskGrid& grid, double lambda);

}  // namespace bikerisk::density
