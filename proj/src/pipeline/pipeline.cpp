#include "bikerisk/pipeline/pipeline.hpp"

#include "bikerisk/density/kde.hpp"
#include "bikerisk/density/transforms.hpp"
#include "bikerisk/error.hpp"
#include "bikerisk/io.hpp"
#include "bikerisk/riskmap/edge_risk.hpp"

namespace bikerisk::pipeline {

namespace {

void require_path(const std::filesystem::path& p, const char* key) {
  if (p.empty()) throw ValidationError(std::string("config lacks data.") + key);
}

}  // namespace

ingest::AccidentLoad load_accident_file(const PipelineConfig& config) {
  require_path(config.data.accidents, "accidents");
  ingest::AccidentSchema schema;
  schema.min_year = config.min_year;
  schema.max_year = config.max_year;
  schema.bounds = config.bbox.expanded(config.margin);
  return ingest::load_accidents(read_file(config.data.accidents), config.data.accident_format,
                                schema);
}

ingest::GraphBuild load_network_file(const PipelineConfig& config) {
  require_path(config.data.network, "network");
  return ingest::build_street_graph(read_file(config.data.network), config.network);
}

Inputs load_inputs(const PipelineConfig& config) {
  Inputs in;
  in.accidents = load_accident_file(config);
  require_path(config.data.traces, "traces");
  const auto sources = ingest::read_trace_directory(config.data.traces);
  in.traces = ingest::load_traces(sources, config.bbox.expanded(config.margin));
  in.network = load_network_file(config);
  return in;
}

RiskSurface estimate_risk(const ingest::AccidentLoad& accidents, const ingest::TraceLoad& traces,
                          const PipelineConfig& config) {
  config.validate();
  const auto grid = config.evaluation_grid();
  RiskSurface out;

  const auto trace_points = ingest::locations(traces.samples);
  out.traffic = density::estimate_density(trace_points, grid, config.kernel, config.threads);

  std::map<Severity, std::vector<GeoPoint>> partitions;
  for (const auto& r : accidents.records) partitions[r.severity].push_back(r.location);
  auto joint = density::estimate_by_severity(partitions, grid, config.kernel, config.threads);
  out.counts = joint.counts;
  out.warnings = joint.warnings;

  for (const auto& [severity, density] : joint.grids) {
    out.conditional.emplace(severity,
                            density::normalize_by_traffic(density, out.traffic, config.traffic_floor));
  }
  out.risk = density::reweight(out.conditional, config.severity_weights());
  return out;
}

density::RiskGrid display_surface(const density::RiskGrid& risk, const PipelineConfig& config) {
  return density::box_cox(risk, config.box_cox_lambda);
}

riskmap::WeightedStreetGraph weight_network(const ingest::StreetGraph& graph,
                                            const density::RiskGrid& risk,
                                            const PipelineConfig& config,
                                            std::vector<std::string>* warnings) {
  const auto surface =
      config.edge_surface == RiskSurfaceKind::Raw ? risk : display_surface(risk, config);
  auto edge_risk = riskmap::assign_edge_risk(surface, graph, config.edge_risk);
  auto edge_discomfort = discomfort::assign_edge_discomfort(graph, config.discomfort);
  if (warnings) {
    warnings->insert(warnings->end(), edge_risk.warnings.begin(), edge_risk.warnings.end());
    warnings->insert(warnings->end(), edge_discomfort.warnings.begin(),
                     edge_discomfort.warnings.end());
  }
  return riskmap::combine(graph, edge_risk, edge_discomfort);
}

}  // namespace bikerisk::pipeline
