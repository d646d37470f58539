#include "bikerisk/discomfort/discomfort.hpp"

#include "bikerisk/error.hpp"
#include "bikerisk/format.hpp"

#include <cmath>

namespace bikerisk::discomfort {

void DiscomfortParams::validate() const {
  if (!(grade_floor < 0.0)) throw ValidationError("discomfort grade floor must be negative");
  if (!(rate > 0.0)) throw ValidationError("discomfort rate must be positive");
  if (!(amplitude > 1.0)) throw ValidationError("discomfort amplitude must exceed 1");
}

double discomfort(double length_m, double grade, const DiscomfortParams& params) {
  if (!(length_m >= 0.0) || !std::isfinite(length_m)) {
    throw ValidationError("discomfort length must be finite and >= 0, got " +
                          format_double(length_m));
  }
  if (!(grade >= -1.0 && grade <= 1.0)) {
    throw ValidationError("discomfort grade must lie in [-1, 1], got " + format_double(grade));
  }
  const double x = grade < params.grade_floor ? params.grade_floor : grade;
  return length_m * (params.amplitude * std::exp(params.rate * x) - 1.0);
}

EdgeDiscomfort assign_edge_discomfort(const ingest::StreetGraph& graph,
                                      const DiscomfortParams& params) {
  params.validate();
  EdgeDiscomfort out;
  out.forward.reserve(graph.edges.size());
  out.backward.reserve(graph.edges.size());
  std::size_t missing = 0;
  for (const auto& e : graph.edges) {
    double grade = e.grade;
    if (!graph.nodes[e.a].altitude || !graph.nodes[e.b].altitude) {
      ++missing;
      grade = 0.0;
    }
    out.forward.push_back(discomfort(e.length_m, grade, params));
    out.backward.push_back(discomfort(e.length_m, -grade, params));
  }
  if (missing > 0) {
    out.warnings.push_back(std::to_string(missing) +
                           " edges lack endpoint altitude; their grade was taken as 0");
  }
  return out;
}

}  // namespace bikerisk::discomfort
