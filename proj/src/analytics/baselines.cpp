#include "bikerisk/analytics/baselines.hpp"

#include "bikerisk/csv.hpp"
#include "bikerisk/format.hpp"
#include "bikerisk/io.hpp"
#include "bikerisk/parallel.hpp"
#include "bikerisk/router/route_io.hpp"

#include <algorithm>
#include <optional>

namespace bikerisk::analytics {

BaselineSet load_baselines(const std::filesystem::path& dir, const router::Router& router) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("baseline directory " + dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  BaselineSet set;
  for (const auto& file : files) {
    const auto name = file.filename().string();
    try {
      auto imported = router::import_route_txt(read_file(file), router);
      for (const auto& w : imported.warnings) set.warnings.push_back(name + ": " + w);
      if (imported.route.nodes.size() < 2) {
        set.excluded.push_back(name + ": route has a single node");
        continue;
      }
      set.routes.push_back({name, std::move(imported.route)});
    } catch (const Error& e) {
      set.excluded.push_back(name + ": " + e.what());
    }
  }
  return set;
}

namespace {

double relative_improvement(double baseline, double recommended) {
  return baseline == 0.0 ? 0.0 : (baseline - recommended) / baseline;
}

}  // namespace

ImprovementCurve compare_baselines(std::span<const BaselineRoute> baselines,
                                   const router::Router& router, std::span<const double> alphas,
                                   unsigned threads) {
  if (alphas.empty()) throw ValidationError("at least one alpha is required");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ValidationError("alpha must lie in [0, 1], got " + format_double(a));
    }
  }

  // Per baseline, per alpha: (risk improvement, discomfort improvement).
  using Row = std::vector<std::pair<double, double>>;
  std::vector<std::optional<Row>> rows(baselines.size());
  std::vector<std::string> failures(baselines.size());
  parallel_for(baselines.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto& base = baselines[i].route;
      try {
        Row row;
        for (double a : alphas) {
          const auto rec = router.route_between(base.nodes.front(), base.nodes.back(), a);
          row.emplace_back(relative_improvement(base.total_risk, rec.total_risk),
                           relative_improvement(base.total_discomfort, rec.total_discomfort));
        }
        rows[i] = std::move(row);
      } catch (const router::NoRouteError& e) {
        failures[i] = e.what();
      }
    }
  });

  ImprovementCurve curve;
  curve.alphas.assign(alphas.begin(), alphas.end());
  curve.risk_improvement.assign(alphas.size(), 0.0);
  curve.discomfort_improvement.assign(alphas.size(), 0.0);
  for (std::size_t i = 0; i < baselines.size(); ++i) {
    if (!rows[i]) {
      curve.excluded.push_back(baselines[i].name + ": " + failures[i]);
      continue;
    }
    ++curve.routes;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      curve.risk_improvement[k] += (*rows[i])[k].first;
      curve.discomfort_improvement[k] += (*rows[i])[k].second;
    }
  }
  if (curve.routes == 0) throw DataError("no baseline route could be compared");
  const auto n = static_cast<double>(curve.routes);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    curve.risk_improvement[k] /= n;
    curve.discomfort_improvement[k] /= n;
    curve.mean_improvement.push_back(0.5 * (curve.risk_improvement[k] + curve.discomfort_improvement[k]));
  }
  return curve;
}

std::string curve_to_csv(const ImprovementCurve& curve) {
  std::string out =
      csv_line({"alpha", "risk_improvement", "discomfort_improvement", "mean_improvement"});
  for (std::size_t k = 0; k < curve.alphas.size(); ++k) {
    out += csv_line({format_double(curve.alphas[k]), format_double(curve.risk_improvement[k]),
                     format_double(curve.discomfort_improvement[k]),
                     format_double(curve.mean_improvement[k])});
  }
  return out;
}

}  // namespace bikerisk::analytics
