#include "bikerisk/density/transforms.hpp"

#include "bikerisk/error.hpp"

#include <algorithm>
#include <cmath>

namespace bikerisk::density {

SeverityWeights SeverityWeights::from_ratio(double light, double severe, double death) {
  for (double v : {light, severe, death}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("severity weights must be finite and non-negative");
    }
  }
  const double total = light + severe + death;
  if (!(total > 0.0)) throw ValidationError("severity weights must not all be zero");
  return SeverityWeights(light / total, severe / total, death / total);
}

double SeverityWeights::weight(Severity s) const {
  switch (s) {
    case Severity::Light:
      return light_;
    case Severity::Severe:
      return severe_;
    case Severity::Death:
      return death_;
  }
  return 0.0;
}

RiskGrid reweight(const std::map<Severity, RiskGrid>& partitions, const SeverityWeights& weights) {
  if (partitions.empty()) throw DataError("reweight needs at least one partition grid");
  const RiskGrid& first = partitions.begin()->second;
  RiskGrid out(first.grid());
  auto& acc = out.mutable_values();
  for (const auto& [severity, grid] : partitions) {
    require_aligned(first, grid, "reweight");
    const double w = weights.weight(severity);
    const auto& v = grid.values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
  }
  return out;
}

RiskGrid normalize_by_traffic(const RiskGrid& joint, const RiskGrid& traffic,
                              double floor_fraction) {
  require_aligned(joint, traffic, "normalize_by_traffic");
  if (!(floor_fraction > 0.0 && floor_fraction < 1.0)) {
    throw ValidationError("traffic floor fraction must be in (0, 1)");
  }
  const double peak = traffic.max_value();
  if (!(peak > 0.0)) throw DataError("traffic density is identically zero");
  const double floor = floor_fraction * peak;

  RiskGrid out(joint.grid());
  auto& dst = out.mutable_values();
  const auto& num = joint.values();
  const auto& den = traffic.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = num[i] / std::max(den[i], floor);
  return out;
}

RiskGrid box_cox(const RiskGrid& grid, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("Box-Cox exponent must be positive");
  }
  RiskGrid out(grid.grid());
  auto& dst = out.mutable_values();
  const auto& src = grid.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (src[i] < 0.0) {
      throw DataError("Box-Cox input is negative at index " + std::to_string(i));
    }
    dst[i] = lambda == 1.0 ? src[i] : std::pow(src[i], lambda);
  }
  return out;
}

}  // namespace bikerisk::density
