#pragma once

#include "bikerisk/ingest/street_graph.hpp"

#include <string>
#include <vector>

namespace bikerisk::discomfort {

/// Constants of the effort law d * (amplitude * exp(rate * x) - 1), held
/// constant below `grade_floor`.
struct DiscomfortParams {
  double grade_floor = -0.025;
  double rate = 15.0;
  double amplitude = 2.0;

  void validate() const;
};

/// Effort of riding `length_m` meters at signed average grade `grade`.
/// f(d, 0) == d for the default amplitude of 2.
double discomfort(double length_m, double grade, const DiscomfortParams& params = {});

/// Direction-sensitive edge effort: `forward` rides a -> b at the edge's
/// grade, `backward` rides b -> a at the negated grade.
struct EdgeDiscomfort {
  std::vector<double> forward;
  std::vector<double> backward;
  std::vector<std::string> warnings;
};

EdgeDiscomfort assign_edge_discomfort(const ingest::StreetGraph& graph,
                                      const DiscomfortParams& params = {});

}  // namespace bikerisk::discomfort
