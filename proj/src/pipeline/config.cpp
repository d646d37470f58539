#include "bikerisk/pipeline/config.hpp"

#include "bikerisk/error.hpp"
#include "bikerisk/format.hpp"
#include "bikerisk/io.hpp"

#include <cmath>
#include <cstdlib>
#include <set>

namespace bikerisk::pipeline {

density::EvaluationGrid PipelineConfig::evaluation_grid() const {
  return {bbox, lon_divisions, lat_divisions, margin};
}

density::SeverityWeights PipelineConfig::severity_weights() const {
  return density::SeverityWeights::from_ratio(severity_ratio[0], severity_ratio[1],
                                              severity_ratio[2]);
}

void PipelineConfig::validate() const {
  kernel.validate();
  evaluation_grid().validate();
  if (!(traffic_floor > 0.0 && traffic_floor < 1.0)) {
    throw ValidationError("density.traffic_floor must lie in (0, 1)");
  }
  if (!(box_cox_lambda > 0.0) || !std::isfinite(box_cox_lambda)) {
    throw ValidationError("density.box_cox_lambda must be > 0");
  }
  severity_weights();
  discomfort.validate();
  if (!(network.coordinate_tolerance_deg > 0.0)) {
    throw ValidationError("network.coordinate_tolerance_deg must be > 0");
  }
  if (!(edge_risk.max_sample_spacing_m > 0.0)) {
    throw ValidationError("routing.max_sample_spacing_m must be > 0");
  }
  if (min_year > max_year) throw ValidationError("accidents.min_year exceeds accidents.max_year");
}

namespace {

// Reads the members of one JSON object and rejects the ones never asked for.
class Section {
 public:
  Section(const nlohmann::json& doc, std::string name) : doc_(doc), name_(std::move(name)) {
    if (!doc_.is_object()) throw ValidationError(label() + " must be an object");
  }

  const nlohmann::json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = doc_.find(key);
    return it == doc_.end() || it->is_null() ? nullptr : &*it;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (const auto* v = find(key)) {
      try {
        out = v->get<T>();
      } catch (const nlohmann::json::exception&) {
        throw ValidationError(path(key) + " has the wrong type");
      }
    }
  }

  void read_path(const std::string& key, std::filesystem::path& out,
                 const std::filesystem::path& base) {
    std::string text;
    read(key, text);
    if (!text.empty()) out = resolve(text, base);
  }

  std::optional<Section> child(const std::string& key) {
    if (const auto* v = find(key)) return Section(*v, path(key));
    return std::nullopt;
  }

  void finish() const {
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) throw ValidationError("unknown config key " + path(key));
    }
  }

  std::string path(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

  static std::filesystem::path resolve(const std::string& text, const std::filesystem::path& base) {
    std::filesystem::path p(text);
    return p.is_absolute() ? p : (base / p).lexically_normal();
  }

 private:
  std::string label() const { return name_.empty() ? "config" : name_; }

  const nlohmann::json& doc_;
  std::string name_;
  std::set<std::string> seen_;
};

}  // namespace

Overrides environment_overrides() {
  Overrides o;
  if (const char* listen = std::getenv("BIKERISK_LISTEN"); listen && *listen) o.listen = listen;
  if (const char* dir = std::getenv("BIKERISK_DATA_DIR"); dir && *dir) o.data_dir = dir;
  return o;
}

PipelineConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                                const Overrides& overrides) {
  PipelineConfig c;
  c.base_dir = overrides.data_dir.value_or(base_dir);
  const auto& base = c.base_dir;
  Section root(doc, "");

  if (auto data = root.child("data")) {
    data->read_path("accidents", c.data.accidents, base);
    std::string format = "csv";
    data->read("accident_format", format);
    if (format == "csv") {
      c.data.accident_format = ingest::AccidentFormat::Csv;
    } else if (format == "json") {
      c.data.accident_format = ingest::AccidentFormat::Json;
    } else {
      throw ValidationError("data.accident_format must be csv or json");
    }
    data->read_path("traces", c.data.traces, base);
    data->read_path("network", c.data.network, base);
    data->read_path("climate", c.data.climate, base);
    data->read_path("baselines", c.data.baselines, base);
    data->finish();
  }
  if (auto bbox = root.child("bbox")) {
    double min_lat = c.bbox.min.lat, min_lon = c.bbox.min.lon;
    double max_lat = c.bbox.max.lat, max_lon = c.bbox.max.lon;
    bbox->read("min_lat", min_lat);
    bbox->read("min_lon", min_lon);
    bbox->read("max_lat", max_lat);
    bbox->read("max_lon", max_lon);
    bbox->finish();
    c.bbox = BoundingBox::make(min_lat, min_lon, max_lat, max_lon);
  }
  if (auto d = root.child("density")) {
    d->read("bandwidth", c.kernel.bandwidth);
    d->read("lon_divisions", c.lon_divisions);
    d->read("lat_divisions", c.lat_divisions);
    d->read("margin", c.margin);
    d->read("traffic_floor", c.traffic_floor);
    if (const auto* ratio = d->find("severity_ratio")) {
      if (ratio->is_string()) {
        const auto name = ratio->get<std::string>();
        if (name == "standard") {
          c.severity_ratio = {1.0, 6.0, 6.0};
        } else if (name == "insurance") {
          c.severity_ratio = {1.0, 6.0, 20.0};
        } else {
          throw ValidationError("density.severity_ratio preset must be standard or insurance");
        }
      } else {
        std::vector<double> values;
        try {
          values = ratio->get<std::vector<double>>();
        } catch (const nlohmann::json::exception&) {
          throw ValidationError("density.severity_ratio must be three numbers or a preset name");
        }
        if (values.size() != 3) throw ValidationError("density.severity_ratio needs three numbers");
        c.severity_ratio = {values[0], values[1], values[2]};
      }
    }
    d->read("box_cox_lambda", c.box_cox_lambda);
    d->finish();
  }
  if (auto a = root.child("accidents")) {
    a->read("min_year", c.min_year);
    a->read("max_year", c.max_year);
    a->finish();
  }
  if (auto d = root.child("discomfort")) {
    d->read("grade_floor", c.discomfort.grade_floor);
    d->read("rate", c.discomfort.rate);
    d->read("amplitude", c.discomfort.amplitude);
    d->finish();
  }
  if (auto n = root.child("network")) {
    n->read("coordinate_tolerance_deg", c.network.coordinate_tolerance_deg);
    n->read("near_miss_factor", c.network.near_miss_factor);
    n->finish();
  }
  if (auto r = root.child("routing")) {
    r->read("normalize", c.blend.normalize);
    r->read("max_sample_spacing_m", c.edge_risk.max_sample_spacing_m);
    r->read("dense_sampling", c.edge_risk.dense_sampling);
    std::string surface = "raw";
    r->read("risk_surface", surface);
    if (surface == "raw") {
      c.edge_surface = RiskSurfaceKind::Raw;
    } else if (surface == "boxcox") {
      c.edge_surface = RiskSurfaceKind::BoxCox;
    } else {
      throw ValidationError("routing.risk_surface must be raw or boxcox");
    }
    r->finish();
  }
  if (auto s = root.child("service")) {
    s->read("listen", c.service.listen);
    s->read("cors_origins", c.service.cors_origins);
    s->read_path("static_dir", c.service.static_dir, base);
    s->read_path("risk_grid", c.service.risk_grid, base);
    s->finish();
  }
  root.read("threads", c.threads);
  root.finish();

  if (overrides.listen) c.service.listen = *overrides.listen;
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc, std::filesystem::absolute(path).parent_path(), overrides);
}

nlohmann::json config_to_json(const PipelineConfig& c) {
  auto str = [](const std::filesystem::path& p) -> nlohmann::json {
    return p.empty() ? nlohmann::json(nullptr) : nlohmann::json(p.string());
  };
  return {
      {"data",
       {{"accidents", str(c.data.accidents)},
        {"accident_format", c.data.accident_format == ingest::AccidentFormat::Csv ? "csv" : "json"},
        {"traces", str(c.data.traces)},
        {"network", str(c.data.network)},
        {"climate", str(c.data.climate)},
        {"baselines", str(c.data.baselines)}}},
      {"bbox",
       {{"min_lat", c.bbox.min.lat},
        {"min_lon", c.bbox.min.lon},
        {"max_lat", c.bbox.max.lat},
        {"max_lon", c.bbox.max.lon}}},
      {"density",
       {{"bandwidth", c.kernel.bandwidth},
        {"lon_divisions", c.lon_divisions},
        {"lat_divisions", c.lat_divisions},
        {"margin", c.margin},
        {"traffic_floor", c.traffic_floor},
        {"severity_ratio", c.severity_ratio},
        {"box_cox_lambda", c.box_cox_lambda}}},
      {"accidents", {{"min_year", c.min_year}, {"max_year", c.max_year}}},
      {"discomfort",
       {{"grade_floor", c.discomfort.grade_floor},
        {"rate", c.discomfort.rate},
        {"amplitude", c.discomfort.amplitude}}},
      {"network",
       {{"coordinate_tolerance_deg", c.network.coordinate_tolerance_deg},
        {"near_miss_factor", c.network.near_miss_factor}}},
      {"routing",
       {{"normalize", c.blend.normalize},
        {"max_sample_spacing_m", c.edge_risk.max_sample_spacing_m},
        {"dense_sampling", c.edge_risk.dense_sampling},
        {"risk_surface", c.edge_surface == RiskSurfaceKind::Raw ? "raw" : "boxcox"}}},
      {"service",
       {{"listen", c.service.listen},
        {"cors_origins", c.service.cors_origins},
        {"static_dir", str(c.service.static_dir)},
        {"risk_grid", str(c.service.risk_grid)}}},
      {"threads", c.threads}};
}

}  // namespace bikerisk::pipeline
