#include "bikerisk/service/service.hpp"

#include "bikerisk/analytics/stats.hpp"
#include "bikerisk/density/grid_io.hpp"
#include "bikerisk/density/transforms.hpp"
#include "bikerisk/error.hpp"
#include "bikerisk/format.hpp"
#include "bikerisk/io.hpp"
#include "bikerisk/pipeline/pipeline.hpp"
#include "bikerisk/riskmap/contours.hpp"
#include "bikerisk/riskmap/weighted_graph.hpp"
#include "bikerisk/router/route_io.hpp"

#include <httplib.h>

#include <algorithm>
#include <iostream>

namespace bikerisk::service {

std::shared_ptr<const ServiceState> build_state(const pipeline::PipelineConfig& config) {
  auto state = std::make_shared<ServiceState>();
  state->config = config;

  auto accidents = pipeline::load_accident_file(config);
  for (const auto& e : accidents.errors) {
    state->warnings.push_back("accidents row " + std::to_string(e.row) + ": " + e.message);
  }
  auto network = pipeline::load_network_file(config);
  state->warnings.insert(state->warnings.end(), network.report.warnings.begin(),
                         network.report.warnings.end());

  if (!config.service.risk_grid.empty()) {
    state->risk = density::read_grid_binary(read_file(config.service.risk_grid));
    if (!(state->risk.grid() == config.evaluation_grid())) {
      throw DataError("precomputed grid " + config.service.risk_grid.string() +
                      " does not match the configured evaluation grid");
    }
  } else {
    const auto traces = ingest::load_traces(ingest::read_trace_directory(config.data.traces),
                                            config.bbox.expanded(config.margin));
    auto surface = pipeline::estimate_risk(accidents, traces, config);
    state->warnings.insert(state->warnings.end(), surface.warnings.begin(), surface.warnings.end());
    state->risk = std::move(surface.risk);
  }
  state->display = pipeline::display_surface(state->risk, config);

  auto weighted = pipeline::weight_network(network.graph, state->risk, config, &state->warnings);
  auto router = std::make_shared<router::Router>(std::move(weighted), config.blend);
  state->warnings.insert(state->warnings.end(), router->scales().warnings.begin(),
                         router->scales().warnings.end());
  state->router = std::move(router);
  state->accidents = std::move(accidents.records);
  return state;
}

ListenAddress parse_listen(const std::string& text) {
  const auto colon = text.rfind(':');
  ListenAddress a;
  a.host = colon == std::string::npos ? "127.0.0.1" : text.substr(0, colon);
  const auto port = colon == std::string::npos ? text : text.substr(colon + 1);
  const auto value = parse_integer(port, "listen port");
  if (value < 0 || value > 65535) throw ValidationError("listen port out of range: " + port);
  a.port = static_cast<int>(value);
  if (a.host.empty()) a.host = "0.0.0.0";
  return a;
}

namespace {

class RequestError : public ValidationError {
 public:
  RequestError(int status, std::string field, const std::string& message)
      : ValidationError(message), status_(status), field_(std::move(field)) {}
  int status() const { return status_; }
  const std::string& field() const { return field_; }

 private:
  int status_;
  std::string field_;
};

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message,
                const std::string& field = {}) {
  nlohmann::json body = {{"error", message}};
  if (!field.empty()) body["field"] = field;
  send_json(res, status, body);
}

GeoPoint point_field(const nlohmann::json& doc, const std::string& field) {
  try {
    GeoPoint p;
    if (doc.is_object()) {
      p = {doc.at("lat").get<double>(), doc.at("lon").get<double>()};
    } else if (doc.is_array() && doc.size() == 2) {
      p = {doc[0].get<double>(), doc[1].get<double>()};
    } else if (doc.is_string()) {
      p = parse_geo_point(doc.get<std::string>());
    } else {
      throw RequestError(400, field, field + " must be {lat, lon}, [lat, lon] or \"lat,lon\"");
    }
    if (!is_valid(p)) throw RequestError(400, field, field + " is not a valid coordinate");
    return p;
  } catch (const nlohmann::json::exception&) {
    throw RequestError(400, field, field + " must be {lat, lon}, [lat, lon] or \"lat,lon\"");
  } catch (const RequestError&) {
    throw;
  } catch (const ValidationError& e) {
    throw RequestError(400, field, e.what());
  }
}

router::RouteQuery parse_route_request(const std::string& body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw RequestError(400, "", "request body is not valid JSON");
  }
  if (!doc.is_object()) throw RequestError(400, "", "request body must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "from" && key != "to" && key != "waypoints" && key != "alpha") {
      throw RequestError(400, key, "unknown field " + key);
    }
  }
  router::RouteQuery q;
  if (!doc.contains("from")) throw RequestError(400, "from", "from is required");
  if (!doc.contains("to")) throw RequestError(400, "to", "to is required");
  q.departure = point_field(doc["from"], "from");
  q.destination = point_field(doc["to"], "to");
  if (doc.contains("waypoints") && !doc["waypoints"].is_null()) {
    if (!doc["waypoints"].is_array()) throw RequestError(400, "waypoints", "waypoints must be a list");
    for (std::size_t i = 0; i < doc["waypoints"].size(); ++i) {
      q.waypoints.push_back(point_field(doc["waypoints"][i], "waypoints[" + std::to_string(i) + "]"));
    }
  }
  if (!doc.contains("alpha")) throw RequestError(400, "alpha", "alpha is required");
  if (!doc["alpha"].is_number()) throw RequestError(400, "alpha", "alpha must be a number");
  q.alpha = doc["alpha"].get<double>();
  if (!(q.alpha >= 0.0 && q.alpha <= 1.0)) {
    throw RequestError(400, "alpha", "alpha must lie in [0, 1], got " + format_double(q.alpha));
  }
  return q;
}

const density::RiskGrid& surface_param(const ServiceState& s, const httplib::Request& req) {
  const auto t = req.has_param("transform") ? req.get_param_value("transform") : "boxcox";
  if (t == "boxcox") return s.display;
  if (t == "raw") return s.risk;
  throw RequestError(400, "transform", "transform must be raw or boxcox");
}

std::vector<double> default_levels(const density::RiskGrid& grid) {
  const auto [lo, hi] = std::minmax_element(grid.values().begin(), grid.values().end());
  std::vector<double> levels;
  if (!(*lo < *hi)) return levels;
  for (int k = 1; k <= 5; ++k) levels.push_back(*lo + (*hi - *lo) * k / 6.0);
  return levels;
}

}  // namespace

Service::Service(pipeline::PipelineConfig config)
    : config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

Service::~Service() {
  stop();
  if (loader_.joinable()) loader_.join();
}

void Service::start_loading() {
  loader_ = std::thread([this] {
    try {
      auto state = build_state(config_);
      std::lock_guard lock(mutex_);
      state_ = std::move(state);
    } catch (const std::exception& e) {
      std::lock_guard lock(mutex_);
      failure_ = e.what();
    }
  });
}

void Service::set_state(std::shared_ptr<const ServiceState> state) {
  std::lock_guard lock(mutex_);
  state_ = std::move(state);
}

bool Service::ready() const { return state() != nullptr; }

std::string Service::failure() const {
  std::lock_guard lock(mutex_);
  return failure_;
}

std::shared_ptr<const ServiceState> Service::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

int Service::bind() {
  const auto addr = parse_listen(config_.service.listen);
  if (addr.port == 0) return server_->bind_to_any_port(addr.host);
  return server_->bind_to_port(addr.host, addr.port) ? addr.port : -1;
}

bool Service::serve() { return server_->listen_after_bind(); }

void Service::stop() {
  if (server_) server_->stop();
}

void Service::install_routes() {
  auto& srv = *server_;
  const auto origins = config_.service.cors_origins;

  srv.set_post_routing_handler([origins](const httplib::Request& req, httplib::Response& res) {
    const bool any = std::find(origins.begin(), origins.end(), "*") != origins.end();
    const auto origin = req.get_header_value("Origin");
    if (any) {
      res.set_header("Access-Control-Allow-Origin", "*");
    } else if (!origin.empty() && std::find(origins.begin(), origins.end(), origin) != origins.end()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  });
  srv.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  if (!config_.service.static_dir.empty()) {
    srv.set_mount_point("/", config_.service.static_dir.string());
  }

  // Wraps a handler that needs the ready state; maps errors onto statuses.
  auto with_state = [this](auto body) {
    return [this, body](const httplib::Request& req, httplib::Response& res) {
      const auto s = state();
      if (!s) {
        const auto why = failure();
        if (why.empty()) {
          send_json(res, 503, {{"status", "loading"}, {"error", "risk surface is being estimated"}});
        } else {
          send_json(res, 500, {{"status", "failed"}, {"error", why}});
        }
        return;
      }
      try {
        body(*s, req, res);
      } catch (const RequestError& e) {
        send_error(res, e.status(), e.what(), e.field());
      } catch (const router::NoRouteError& e) {
        send_error(res, 404, e.what());
      } catch (const ValidationError& e) {
        send_error(res, 400, e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, e.what());
      }
    };
  };

  srv.Get("/api/health", with_state([](const ServiceState& s, const httplib::Request&,
                                       httplib::Response& res) {
    send_json(res, 200,
              {{"status", "ok"},
               {"build", {{"name", "bikerisk"}, {"version", "1.0.0"}, {"compiler", __VERSION__}}},
               {"config", pipeline::config_to_json(s.config)},
               {"network",
                {{"nodes", s.router->graph().nodes.size()},
                 {"edges", s.router->graph().edges.size()}}},
               {"accidents", s.accidents.size()},
               {"warnings", s.warnings.size()}});
  }));

  srv.Post("/api/route", with_state([](const ServiceState& s, const httplib::Request& req,
                                       httplib::Response& res) {
    const auto query = parse_route_request(req.body);
    std::vector<std::string> warnings;
    const auto route = s.router->find_route(query, &warnings);
    auto body = router::route_to_json(route, s.router->graph());
    body["warnings"] = warnings;
    send_json(res, 200, body);
  }));

  srv.Post("/api/route/export", with_state([](const ServiceState& s, const httplib::Request& req,
                                              httplib::Response& res) {
    const auto query = parse_route_request(req.body);
    const auto route = s.router->find_route(query);
    res.status = 200;
    res.set_header("Content-Disposition", "attachment; filename=\"route.txt\"");
    res.set_content(router::export_route_txt(route, s.router->graph()), "text/plain");
  }));

  srv.Get("/api/risk", with_state([](const ServiceState& s, const httplib::Request& req,
                                     httplib::Response& res) {
    send_json(res, 200, density::grid_to_json(surface_param(s, req)));
  }));

  srv.Get("/api/contours", with_state([](const ServiceState& s, const httplib::Request& req,
                                         httplib::Response& res) {
    const auto& grid = surface_param(s, req);
    std::vector<double> levels;
    if (req.has_param("levels")) {
      try {
        levels = parse_double_list(req.get_param_value("levels"), "levels");
      } catch (const ValidationError& e) {
        throw RequestError(400, "levels", e.what());
      }
    } else {
      levels = default_levels(grid);
    }
    try {
      send_json(res, 200, riskmap::contours_to_geojson(riskmap::extract_contours(grid, levels)));
    } catch (const ValidationError& e) {
      throw RequestError(400, "levels", e.what());
    }
  }));

  srv.Get("/api/network", with_state([](const ServiceState& s, const httplib::Request&,
                                        httplib::Response& res) {
    send_json(res, 200, riskmap::weighted_graph_to_json(s.router->graph()));
  }));

  srv.Get(R"(/api/stats/([a-z\-]+))", with_state([](const ServiceState& s,
                                                     const httplib::Request& req,
                                                     httplib::Response& res) {
    analytics::Grouping grouping;
    try {
      grouping = analytics::parse_grouping(req.matches[1].str());
    } catch (const ValidationError& e) {
      throw RequestError(404, "group", e.what());
    }
    const auto format = req.has_param("format") ? req.get_param_value("format") : "json";
    if (format != "json" && format != "csv") {
      throw RequestError(400, "format", "format must be json or csv");
    }
    const auto stats = analytics::severity_stats(s.accidents, grouping);
    if (format == "csv") {
      res.status = 200;
      res.set_content(analytics::stats_to_csv(stats), "text/csv");
    } else {
      send_json(res, 200, analytics::stats_to_json(stats));
    }
  }));
}

}  // namespace bikerisk::service
