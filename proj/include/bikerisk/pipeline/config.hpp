#pragma once

#include "bikerisk/density/grid.hpp"
#include "bikerisk/density/kernel.hpp"
#include "bikerisk/density/transforms.hpp"
#include "bikerisk/discomfort/discomfort.hpp"
#include "bikerisk/ingest/accidents.hpp"
#include "bikerisk/ingest/street_graph.hpp"
#include "bikerisk/riskmap/edge_risk.hpp"
#include "bikerisk/router/router.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bikerisk::pipeline {

enum class RiskSurfaceKind { Raw, BoxCox };

struct DataPaths {
  std::filesystem::path accidents;
  ingest::AccidentFormat accident_format = ingest::AccidentFormat::Csv;
  std::filesystem::path traces;     // directory of *.gpx
  std::filesystem::path network;    // NDJSON segments
  std::filesystem::path climate;    // optional
  std::filesystem::path baselines;  // optional directory of route .txt files
};

struct ServiceSettings {
  std::string listen = "127.0.0.1:8080";
  std::vector<std::string> cors_origins = {"*"};
  std::filesystem::path static_dir;  // optional
  std::filesystem::path risk_grid;   // optional precomputed raw risk grid
};

struct PipelineConfig {
  /// Directory relative data paths were resolved against.
  std::filesystem::path base_dir;
  DataPaths data;

  BoundingBox bbox = BoundingBox::make(47.3650, 8.5141, 47.3886, 8.5523);
  density::KernelParams kernel;
  int lon_divisions = 560;
  int lat_divisions = 440;
  double margin = 0.01;
  double traffic_floor = 1e-3;
  std::array<double, 3> severity_ratio = {1.0, 6.0, 6.0};
  double box_cox_lambda = 0.5;
  int min_year = 1900;
  int max_year = 2100;

  discomfort::DiscomfortParams discomfort;
  ingest::GraphBuildOptions network;
  riskmap::EdgeRiskOptions edge_risk;
  router::BlendOptions blend;
  RiskSurfaceKind edge_surface = RiskSurfaceKind::Raw;

  ServiceSettings service;
  unsigned threads = 0;

  density::EvaluationGrid evaluation_grid() const;
  density::SeverityWeights severity_weights() const;
  /// Throws ValidationError naming the first out-of-range parameter.
  void validate() const;
};

/// Values that replace parts of a config file at load time.
struct Overrides {
  std::optional<std::string> listen;
  /// Directory relative data paths are resolved against.
  std::optional<std::filesystem::path> data_dir;
};

/// BIKERISK_LISTEN and BIKERISK_DATA_DIR from the process environment.
Overrides environment_overrides();

/// Parses a config document. Every key is optional and unknown keys are
/// rejected; relative paths are resolved against `base_dir`.
PipelineConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                                const Overrides& overrides = {});
PipelineConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

/// Effective parameters in the same layout config_from_json reads.
nlohmann::json config_to_json(const PipelineConfig& config);

}  // namespace bikerisk::pipeline
