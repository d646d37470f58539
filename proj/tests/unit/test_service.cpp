#include "bikerisk/density/grid.hpp"
#include "bikerisk/service/service.hpp"

#include "generators.hpp"

#include <doctest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <thread>

using namespace bikerisk;
using namespace bikerisk::service;
using nlohmann::json;

namespace {

std::shared_ptr<const ServiceState> small_state(pipeline::PipelineConfig config) {
  auto s = std::make_shared<ServiceState>();
  s->config = config;
  density::EvaluationGrid g;
  g.bbox = BoundingBox::make(47.365, 8.518, 47.374, 8.528);
  g.lon_divisions = 21;
  g.lat_divisions = 19;
  density::RiskGrid risk(g);
  const auto l = g.lattice();
  for (int r = 0; r < l.rows; ++r) {
    for (int c = 0; c < l.cols; ++c) {
      const double d2 = std::pow((l.lat(r) - 47.3695) / 0.002, 2) + std::pow((l.lon(c) - 8.523) / 0.002, 2);
      risk.at(r, c) = std::exp(-d2);
    }
  }
  s->risk = risk;
  s->display = risk;
  s->router = std::make_shared<router::Router>(gen::two_path_network());
  ingest::AccidentRecord a;
  a.id = "1";
  a.location = {47.37, 8.52};
  a.severity = Severity::Severe;
  a.time = {2014, 5, 2, 8};
  s->accidents = {a};
  return s;
}

struct Running {
  explicit Running(bool with_state = true) : service(config()) {
    if (with_state) service.set_state(small_state(service.config()));
    port = service.bind();
    REQUIRE(port > 0);
    thread = std::thread([this] { service.serve(); });
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
    for (int i = 0; i < 100; ++i) {
      if (client->Options("/api/health")) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }
  ~Running() {
    service.stop();
    thread.join();
  }
  static pipeline::PipelineConfig config() {
    pipeline::PipelineConfig c;
    c.service.listen = "127.0.0.1:0";
    return c;
  }

  Service service;
  int port = -1;
  std::thread thread;
  std::unique_ptr<httplib::Client> client;
};

json post(httplib::Client& c, const std::string& path, const json& body, int expect) {
  auto res = c.Post(path, body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == expect);
  return res->get_header_value("Content-Type").find("json") != std::string::npos
             ? json::parse(res->body)
             : json(res->body);
}

}  // namespace

TEST_CASE("listen address parsing") {
  CHECK(parse_listen("0.0.0.0:8080").host == "0.0.0.0");
  CHECK(parse_listen("0.0.0.0:8080").port == 8080);
  CHECK(parse_listen("9000").host == "127.0.0.1");
  CHECK_THROWS(parse_listen("host:notaport"));
  CHECK_THROWS(parse_listen("host:70000"));
}

TEST_CASE("API answers 503 until the state is ready") {
  Running r(false);
  auto res = r.client->Get("/api/health");
  REQUIRE(res);
  CHECK(res->status == 503);
  CHECK(json::parse(res->body)["status"] == "loading");
  r.service.set_state(small_state(r.service.config()));
  res = r.client->Get("/api/health");
  REQUIRE(res);
  CHECK(res->status == 200);
}

TEST_CASE("health reports build, config and network") {
  Running r;
  auto res = r.client->Get("/api/health");
  REQUIRE(res);
  const auto body = json::parse(res->body);
  CHECK(body["status"] == "ok");
  CHECK(body["network"]["nodes"] == 4);
  CHECK(body["accidents"] == 1);
  CHECK(body["config"]["density"]["bandwidth"] == 0.003);
  CHECK(body["build"].contains("version"));
}

TEST_CASE("route endpoint follows alpha") {
  Running r;
  const auto safe = post(*r.client, "/api/route",
                         {{"from", {{"lat", 47.37}, {"lon", 8.52}}}, {"to", "47.37,8.526"}, {"alpha", 1.0}},
                         200);
  CHECK(safe["nodes"] == json::array({0, 3, 2}));
  CHECK(safe["total_risk"] == 20.0);
  CHECK(safe["alpha"] == 1.0);
  const auto easy = post(*r.client, "/api/route",
                         {{"from", {47.37, 8.52}}, {"to", {47.37, 8.526}}, {"alpha", 0.0}}, 200);
  CHECK(easy["nodes"] == json::array({0, 1, 2}));
  const auto via = post(*r.client, "/api/route",
                        {{"from", {47.37, 8.52}},
                         {"to", {47.37, 8.526}},
                         {"waypoints", json::array({json::array({47.368, 8.523})})},
                         {"alpha", 0.0}},
                        200);
  CHECK(via["nodes"] == json::array({0, 3, 2}));
}

TEST_CASE("route endpoint validates its body") {
  Running r;
  auto e = post(*r.client, "/api/route", {{"from", {47.37, 8.52}}, {"to", {47.37, 8.526}}, {"alpha", 1.5}},
                400);
  CHECK(e["field"] == "alpha");
  e = post(*r.client, "/api/route", {{"from", {47.37, 8.52}}, {"to", {47.37, 8.526}}, {"alpha", "x"}}, 400);
  CHECK(e["field"] == "alpha");
  e = post(*r.client, "/api/route", {{"from", {47.37, 8.52}}, {"alpha", 0.5}}, 400);
  CHECK(e["field"] == "to");
  e = post(*r.client, "/api/route",
           {{"from", {47.37, 8.52}}, {"to", {47.37, 8.526}}, {"alpha", 0.5}, {"mode", "fast"}}, 400);
  e = post(*r.client, "/api/route", {{"from", "nowhere"}, {"to", {47.37, 8.526}}, {"alpha", 0.5}}, 400);
  CHECK(e["field"] == "from");
  auto res = r.client->Post("/api/route", "{not json", "application/json");
  REQUIRE(res);
  CHECK(res->status == 400);
}

TEST_CASE("export endpoint returns the text format") {
  Running r;
  auto res = r.client->Post("/api/route/export",
                            json{{"from", {47.37, 8.52}}, {"to", {47.37, 8.526}}, {"alpha", 1.0}}.dump(),
                            "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->body ==
        "47.370000,8.520000\n47.368000,8.523000\n47.370000,8.526000\nrisk=20\ndiscomfort=50\n");
}

TEST_CASE("risk, contours and network endpoints") {
  Running r;
  auto res = r.client->Get("/api/risk?transform=raw");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["values"].size() == 21 * 19);
  res = r.client->Get("/api/risk?transform=log");
  REQUIRE(res);
  CHECK(res->status == 400);

  res = r.client->Get("/api/contours?levels=0.5&transform=raw");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto gj = json::parse(res->body);
  CHECK(gj["features"].size() == 1);
  CHECK(gj["features"][0]["properties"]["closed"] == true);
  res = r.client->Get("/api/contours");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["levels"].size() == 5);
  res = r.client->Get("/api/contours?levels=0.5,0.2");
  REQUIRE(res);
  CHECK(res->status == 400);

  res = r.client->Get("/api/network");
  REQUIRE(res);
  CHECK(json::parse(res->body)["edges"].size() == 4);
}

TEST_CASE("stats endpoint") {
  Running r;
  auto res = r.client->Get("/api/stats/monthly");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto body = json::parse(res->body);
  CHECK(body["groups"].size() == 12);
  CHECK(body["groups"][4]["count"] == 1);
  res = r.client->Get("/api/stats/cause?format=csv");
  REQUIRE(res);
  CHECK(res->body.rfind("group,count,severe,p,sigma\n", 0) == 0);
  res = r.client->Get("/api/stats/daily");
  REQUIRE(res);
  CHECK(res->status == 404);
}

TEST_CASE("CORS headers and preflight") {
  Running r;
  auto res = r.client->Get("/api/health", {{"Origin", "http://localhost:5173"}});
  REQUIRE(res);
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
  res = r.client->Options("/api/route");
  REQUIRE(res);
  CHECK(res->status == 204);
  CHECK(res->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
}

TEST_CASE("identical queries get identical answers") {
  Running r;
  const json q = {{"from", {47.37, 8.52}}, {"to", {47.37, 8.526}}, {"alpha", 0.3}};
  const auto a = r.client->Post("/api/route", q.dump(), "application/json");
  r.client->Post("/api/route", json{{"from", {47.37, 8.526}}, {"to", {47.37, 8.52}}, {"alpha", 0.9}}.dump(),
                 "application/json");
  const auto b = r.client->Post("/api/route", q.dump(), "application/json");
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->body == b->body);
}
