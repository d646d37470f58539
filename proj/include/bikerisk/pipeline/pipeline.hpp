#pragma once

#include "bikerisk/density/grid.hpp"
#include "bikerisk/ingest/accidents.hpp"
#include "bikerisk/ingest/street_graph.hpp"
#include "bikerisk/ingest/traces.hpp"
#include "bikerisk/pipeline/config.hpp"
#include "bikerisk/riskmap/weighted_graph.hpp"

#include <map>
#include <string>
#include <vector>

namespace bikerisk::pipeline {

struct Inputs {
  ingest::AccidentLoad accidents;
  ingest::TraceLoad traces;
  ingest::GraphBuild network;
};

/// Accidents and traces are kept when they fall inside the extended window.
Inputs load_inputs(const PipelineConfig& config);
ingest::AccidentLoad load_accident_file(const PipelineConfig& config);
ingest::GraphBuild load_network_file(const PipelineConfig& config);

struct RiskSurface {
  density::RiskGrid traffic;                            // f_T
  std::map<Severity, density::RiskGrid> conditional;    // f_{A_s|T}
  std::map<Severity, std::size_t> counts;
  density::RiskGrid risk;                               // f_R
  std::vector<std::string> warnings;
};

/// Traffic and per-severity accident densities, the traffic-normalized
/// conditional risks, and their severity-weighted recombination.
RiskSurface estimate_risk(const ingest::AccidentLoad& accidents, const ingest::TraceLoad& traces,
                          const PipelineConfig& config);

/// Box-Cox display surface of f_R.
density::RiskGrid display_surface(const density::RiskGrid& risk, const PipelineConfig& config);

/// Edge risk (from the configured surface) and directed discomfort.
riskmap::WeightedStreetGraph weight_network(const ingest::StreetGraph& graph,
                                            const density::RiskGrid& risk,
                                            const PipelineConfig& config,
                                            std::vector<std::string>* warnings = nullptr);

}  // namespace bikerisk::pipeline
