#pragma once

#include "bikerisk/router/router.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bikerisk::analytics {

struct BaselineRoute {
  std::string name;
  router::Route route;
};

struct BaselineSet {
  std::vector<BaselineRoute> routes;
  std::vector<std::string> excluded;  // "name: reason"
  std::vector<std::string> warnings;
};

/// Imports every *.txt route file of `dir` in name order. Files that cannot
/// be matched onto the network are excluded and reported.
BaselineSet load_baselines(const std::filesystem::path& dir, const router::Router& router);

struct ImprovementCurve {
  std::vector<double> alphas;
  std::vector<double> risk_improvement;        // mean over routes of (b - r) / b
  std::vector<double> discomfort_improvement;
  std::vector<double> mean_improvement;        // average of the two curves
  std::size_t routes = 0;
  std::vector<std::string> excluded;
};

/// Relative improvement of the recommended route between each baseline's
/// endpoints, on raw totals. A zero baseline total yields improvement 0.
ImprovementCurve compare_baselines(std::span<const BaselineRoute> baselines,
                                   const router::Router& router, std::span<const double> alphas,
                                   unsigned threads = 0);

/// Columns: alpha,risk_improvement,discomfort_improvement,mean_improvement
std::string curve_to_csv(const ImprovementCurve& curve);

}  // namespace bikerisk::analytics
