#include "bikerisk/cli/cli.hpp"

#include "bikerisk/analytics/baselines.hpp"
#include "bikerisk/analytics/climate.hpp"
#include "bikerisk/analytics/simulate.hpp"
#include "bikerisk/analytics/stats.hpp"
#include "bikerisk/density/grid_io.hpp"
#include "bikerisk/error.hpp"
#include "bikerisk/format.hpp"
#include "bikerisk/io.hpp"
#include "bikerisk/pipeline/pipeline.hpp"
#include "bikerisk/riskmap/contours.hpp"
#include "bikerisk/router/route_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>

namespace bikerisk::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config = "config/synthetic_city.json";
  std::string out = "out";
  int threads = -1;
};

struct Options {
  Common common;
  // estimate
  std::string grid;
  // route
  std::string from, to;
  std::vector<std::string> via;
  double alpha = 0.3;
  std::string graph;
  // simulate
  std::size_t pairs = 2000;
  std::string alphas;
  std::uint64_t seed = 7;
  // stats
  std::string group = "yearly";
  std::string format = "csv";
  // contours
  std::string levels;
  std::string transform = "boxcox";
  std::string grid_file;
  // compare-baselines
  std::string dir;
};

pipeline::PipelineConfig load(const Options& o) {
  auto config = pipeline::load_config(o.common.config);
  if (o.common.threads >= 0) config.threads = static_cast<unsigned>(o.common.threads);
  if (!o.grid.empty()) {
    const auto x = o.grid.find('x');
    if (x == std::string::npos) throw ValidationError("--grid expects <lon>x<lat>, e.g. 56x44");
    config.lon_divisions = static_cast<int>(parse_integer(o.grid.substr(0, x), "--grid"));
    config.lat_divisions = static_cast<int>(parse_integer(o.grid.substr(x + 1), "--grid"));
    config.validate();
  }
  return config;
}

void report(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

void write(std::ostream& out, const fs::path& path, std::string_view content) {
  write_file(path, content);
  out << "wrote " << path.string() << "\n";
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

/// Weighted network from --graph, or estimated from the config.
riskmap::WeightedStreetGraph weighted_graph(const Options& o, const pipeline::PipelineConfig& config,
                                            std::ostream& err) {
  if (!o.graph.empty()) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(o.graph));
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError("graph file " + o.graph + " is not valid JSON: " + e.what());
    }
    return riskmap::weighted_graph_from_json(doc);
  }
  const auto in = pipeline::load_inputs(config);
  auto surface = pipeline::estimate_risk(in.accidents, in.traces, config);
  report(err, surface.warnings);
  std::vector<std::string> warnings;
  auto g = pipeline::weight_network(in.network.graph, surface.risk, config, &warnings);
  report(err, warnings);
  return g;
}

router::Router make_router(const Options& o, const pipeline::PipelineConfig& config,
                           std::ostream& err) {
  router::Router r(weighted_graph(o, config, err), config.blend);
  report(err, r.scales().warnings);
  return r;
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = load(o);
  const auto in = pipeline::load_inputs(config);
  for (const auto& e : in.accidents.errors) {
    err << "warning: accidents row " << e.row << ": " << e.message << "\n";
  }
  report(err, in.traces.warnings);
  report(err, in.network.report.warnings);

  std::size_t counts[3] = {0, 0, 0};
  for (const auto& r : in.accidents.records) ++counts[static_cast<int>(r.severity)];
  const auto& net = in.network.report;
  const nlohmann::json summary = {
      {"accidents",
       {{"records", in.accidents.records.size()},
        {"light", counts[0]},
        {"severe", counts[1]},
        {"death", counts[2]},
        {"rejected_rows", in.accidents.errors.size()},
        {"duplicates_removed", in.accidents.duplicates_removed},
        {"out_of_bounds", in.accidents.out_of_bounds}}},
      {"traces",
       {{"samples", in.traces.samples.size()},
        {"traces", in.traces.traces_seen},
        {"files_skipped", in.traces.files_skipped},
        {"removed_non_bike", in.traces.removed_non_bike},
        {"outside_window", in.traces.outside_window}}},
      {"network",
       {{"segments", net.segments},
        {"raw_points", net.raw_points},
        {"nodes", in.network.graph.nodes.size()},
        {"edges", in.network.graph.edges.size()},
        {"zero_length_dropped", net.zero_length_dropped},
        {"duplicate_links_dropped", net.duplicate_links_dropped},
        {"near_misses", net.near_misses},
        {"dropped_components", net.dropped_component_nodes}}}};
  const fs::path dir = o.common.out;
  write(out, dir / "accidents.csv", ingest::write_accidents_csv(in.accidents.records));
  write(out, dir / "ingest_report.json", dump(summary));
  out << "accidents " << in.accidents.records.size() << " (light " << counts[0] << ", severe "
      << counts[1] << ", death " << counts[2] << "), trace samples " << in.traces.samples.size()
      << ", network " << in.network.graph.nodes.size() << " nodes / "
      << in.network.graph.edges.size() << " edges\n";
  return kExitOk;
}

int cmd_estimate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = load(o);
  const auto in = pipeline::load_inputs(config);
  report(err, in.traces.warnings);
  auto surface = pipeline::estimate_risk(in.accidents, in.traces, config);
  report(err, surface.warnings);
  std::vector<std::string> warnings;
  const auto graph = pipeline::weight_network(in.network.graph, surface.risk, config, &warnings);
  report(err, warnings);

  const fs::path dir = o.common.out;
  write(out, dir / "risk.brgrid", density::write_grid_binary(surface.risk));
  write(out, dir / "risk_boxcox.brgrid",
        density::write_grid_binary(pipeline::display_surface(surface.risk, config)));
  write(out, dir / "traffic.brgrid", density::write_grid_binary(surface.traffic));
  write(out, dir / "weighted_graph.json", dump(riskmap::weighted_graph_to_json(graph)));
  // The thread count never changes the results, so it stays out of the artifacts.
  auto echo = pipeline::config_to_json(config);
  echo.erase("threads");
  write(out, dir / "estimate_config.json", dump(echo));
  return kExitOk;
}

int cmd_route(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = load(o);
  router::RouteQuery q;
  q.departure = parse_geo_point(o.from);
  q.destination = parse_geo_point(o.to);
  for (const auto& v : o.via) q.waypoints.push_back(parse_geo_point(v));
  q.alpha = o.alpha;
  q.validate();
  const auto r = make_router(o, config, err);
  std::vector<std::string> warnings;
  const auto route = r.find_route(q, &warnings);
  report(err, warnings);

  const auto txt = router::export_route_txt(route, r.graph());
  const fs::path dir = o.common.out;
  write(out, dir / "route.txt", txt);
  write(out, dir / "route.json", dump(router::route_to_json(route, r.graph())));
  write(out, dir / "route.geojson", dump(router::route_to_geojson(route, r.graph())));
  out << txt;
  out << "nodes=" << route.nodes.size() << " length_m=" << format_double(route.total_length_m)
      << " cost=" << format_double(route.total_cost) << "\n";
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = load(o);
  analytics::SimulationOptions sim;
  sim.pairs = o.pairs;
  if (!o.alphas.empty()) sim.alphas = parse_double_list(o.alphas, "--alphas");
  sim.seed = o.seed;
  sim.threads = config.threads;
  const auto r = make_router(o, config, err);
  const auto result = analytics::simulate_od(r, sim);
  const auto deltas = analytics::utilization_deltas(result);

  const fs::path dir = o.common.out;
  nlohmann::json summary = {{"pairs", result.pairs.size()},
                            {"seed", sim.seed},
                            {"degenerate_redraws", result.degenerate_redraws},
                            {"alphas", nlohmann::json::array()}};
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const auto& d = deltas[k];
    const auto stem = "utilization_alpha_" + format_double(d.alpha_cmp);
    write(out, dir / (stem + ".geojson"), dump(analytics::delta_to_geojson(d, r.graph())));
    write(out, dir / (stem + ".csv"), analytics::delta_to_csv(d, r.graph()));
    std::uint64_t traversals = 0;
    for (auto c : d.cmp_counts) traversals += c;
    summary["alphas"].push_back({{"alpha", d.alpha_cmp},
                                 {"route_edges", result.per_alpha[k].route_edges},
                                 {"traversals", traversals}});
  }
  write(out, dir / "simulation.json", dump(summary));
  return kExitOk;
}

int cmd_stats(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = load(o);
  const auto grouping = analytics::parse_grouping(o.group);
  if (o.format != "csv" && o.format != "json") throw ValidationError("--format must be csv or json");
  const auto accidents = pipeline::load_accident_file(config);
  for (const auto& e : accidents.errors) {
    err << "warning: accidents row " << e.row << ": " << e.message << "\n";
  }
  const auto stats = analytics::severity_stats(accidents.records, grouping);
  const fs::path dir = o.common.out;
  const auto stem = "stats_" + std::string(analytics::to_string(grouping));
  const auto text = o.format == "csv" ? analytics::stats_to_csv(stats)
                                      : dump(analytics::stats_to_json(stats));
  write(out, dir / (stem + "." + o.format), text);
  if (grouping == analytics::Grouping::Month && !config.data.climate.empty()) {
    const auto climate = analytics::load_climate(read_file(config.data.climate));
    write(out, dir / "stats_monthly_climate.csv",
          analytics::climate_to_csv(analytics::join_climate(stats, climate)));
  }
  out << text;
  return kExitOk;
}

int cmd_contours(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = load(o);
  if (o.transform != "raw" && o.transform != "boxcox") {
    throw ValidationError("--transform must be raw or boxcox");
  }
  density::RiskGrid risk;
  if (!o.grid_file.empty()) {
    risk = density::read_grid_binary(read_file(o.grid_file));
  } else {
    const auto in = pipeline::load_inputs(config);
    auto surface = pipeline::estimate_risk(in.accidents, in.traces, config);
    report(err, surface.warnings);
    risk = std::move(surface.risk);
  }
  const auto grid = o.transform == "raw" ? risk : pipeline::display_surface(risk, config);
  const auto levels = parse_double_list(o.levels, "--levels");
  const auto set = riskmap::extract_contours(grid, levels);
  write(out, fs::path(o.common.out) / "contours.geojson", dump(riskmap::contours_to_geojson(set)));
  for (double level : levels) {
    out << "level " << format_double(level) << ": " << set.count(level) << " lines ("
        << set.closed_count(level) << " closed)\n";
  }
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = load(o);
  std::vector<double> alphas;
  if (o.alphas.empty()) {
    for (int k = 0; k <= 10; ++k) alphas.push_back(k / 10.0);
  } else {
    alphas = parse_double_list(o.alphas, "--alphas");
  }
  const fs::path dir = o.dir.empty() ? config.data.baselines : fs::path(o.dir);
  if (dir.empty()) throw ValidationError("no baseline directory (--dir or data.baselines)");
  const auto r = make_router(o, config, err);
  const auto baselines = analytics::load_baselines(dir, r);
  report(err, baselines.warnings);
  for (const auto& x : baselines.excluded) err << "excluded: " << x << "\n";
  const auto curve = analytics::compare_baselines(baselines.routes, r, alphas, config.threads);
  for (const auto& x : curve.excluded) err << "excluded: " << x << "\n";
  const auto csv = analytics::curve_to_csv(curve);
  write(out, fs::path(o.common.out) / "improvement.csv", csv);
  out << csv;
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cycling risk estimation and route recommendation", "bikerisk"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.common.config, "Pipeline config file")->capture_default_str();
    sub->add_option("--out", o.common.out, "Output directory")->capture_default_str();
    sub->add_option("--threads", o.common.threads, "Worker threads (0 = all cores)");
  };
  auto graph_option = [&o](CLI::App* sub) {
    sub->add_option("--graph", o.graph, "Weighted graph JSON written by estimate");
  };

  auto* ingest = app.add_subcommand("ingest", "Validate and normalize the inputs");
  common(ingest);

  auto* estimate = app.add_subcommand("estimate", "Estimate the risk grid and weight the network");
  common(estimate);
  estimate->add_option("--grid", o.grid, "Override divisions as <lon>x<lat>");

  auto* route = app.add_subcommand("route", "Recommend a route");
  common(route);
  graph_option(route);
  route->add_option("--from", o.from, "Departure lat,lon")->required();
  route->add_option("--to", o.to, "Destination lat,lon")->required();
  route->add_option("--via", o.via, "Waypoint lat,lon (repeatable)");
  route->add_option("--alpha", o.alpha, "Risk/discomfort preference in [0, 1]")
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Random OD street-utilization study");
  common(simulate);
  graph_option(simulate);
  simulate->add_option("--pairs", o.pairs, "Number of OD pairs")->capture_default_str();
  simulate->add_option("--alphas", o.alphas, "Comma separated alphas (default 0,0.5,0.75)");
  simulate->add_option("--seed", o.seed, "Master seed")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Accident severity statistics");
  common(stats);
  stats->add_option("--group", o.group, "yearly, monthly, hourweekday or cause")
      ->capture_default_str();
  stats->add_option("--format", o.format, "csv or json")->capture_default_str();

  auto* contours = app.add_subcommand("contours", "Risk contour lines as GeoJSON");
  common(contours);
  contours->add_option("--levels", o.levels, "Comma separated increasing levels")->required();
  contours->add_option("--transform", o.transform, "raw or boxcox")->capture_default_str();
  contours->add_option("--grid-file", o.grid_file, "Raw risk grid written by estimate");

  auto* compare = app.add_subcommand("compare-baselines", "Improvement over baseline routes");
  common(compare);
  graph_option(compare);
  compare->add_option("--dir", o.dir, "Directory of baseline route .txt files");
  compare->add_option("--alphas", o.alphas, "Comma separated alphas (default 0,0.1,...,1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*ingest) return cmd_ingest(o, out, err);
    if (*estimate) return cmd_estimate(o, out, err);
    if (*route) return cmd_route(o, out, err);
    if (*simulate) return cmd_simulate(o, out, err);
    if (*stats) return cmd_stats(o, out, err);
    if (*contours) return cmd_contours(o, out, err);
    if (*compare) return cmd_compare(o, out, err);
  } catch (const ValidationError& e) {
    err << "error (invalid input): " << e.what() << "\n";
    return kExitValidation;
  } catch (const DataError& e) {
    err << "error (data): " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    err << "error (data): " << e.what() << "\n";
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error (data): " << e.what() << "\n";
    return kExitData;
  }
  return kExitValidation;
}

}  // namespace bikerisk::cli
