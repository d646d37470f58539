#include "bikerisk/density/grid_io.hpp"

#include "bikerisk/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>

namespace bikerisk::density {
namespace {

constexpr char kMagic[8] = {'B', 'R', 'G', 'R', 'I', 'D', '0', '1'};

template <typename T>
void put(std::string& out, T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    out.append(bytes.data(), bytes.size());
  } else {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    out.append(bytes, sizeof(T));
  }
}

template <typename T>
T take(std::string_view& in) {
  if (in.size() < sizeof(T)) throw DataError("grid file is truncated");
  char bytes[sizeof(T)];
  std::memcpy(bytes, in.data(), sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  in.remove_prefix(sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

std::string write_grid_binary(const RiskGrid& grid) {
  const auto& g = grid.grid();
  std::string out(kMagic, sizeof kMagic);
  out.reserve(out.size() + 48 + grid.values().size() * 8);
  put(out, g.bbox.min.lat);
  put(out, g.bbox.min.lon);
  put(out, g.bbox.max.lat);
  put(out, g.bbox.max.lon);
  put(out, g.margin);
  put(out, static_cast<std::uint32_t>(g.lon_divisions));
  put(out, static_cast<std::uint32_t>(g.lat_divisions));
  for (double v : grid.values()) put(out, v);
  return out;
}

RiskGrid read_grid_binary(std::string_view bytes) {
  if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw DataError("not a grid file (bad magic)");
  }
  bytes.remove_prefix(sizeof kMagic);
  EvaluationGrid g;
  g.bbox.min.lat = take<double>(bytes);
  g.bbox.min.lon = take<double>(bytes);
  g.bbox.max.lat = take<double>(bytes);
  g.bbox.max.lon = take<double>(bytes);
  g.margin = take<double>(bytes);
  g.lon_divisions = static_cast<int>(take<std::uint32_t>(bytes));
  g.lat_divisions = static_cast<int>(take<std::uint32_t>(bytes));
  g.validate();
  const std::size_t n = g.lattice().size();
  if (bytes.size() != n * sizeof(double)) {
    throw DataError("grid file holds " + std::to_string(bytes.size() / 8) + " values, expected " +
                    std::to_string(n));
  }
  std::vector<double> values(n);
  for (auto& v : values) v = take<double>(bytes);
  return RiskGrid(g, std::move(values));
}

nlohmann::json grid_to_json(const RiskGrid& grid) {
  const auto& g = grid.grid();
  return {{"bbox",
           {{"min_lat", g.bbox.min.lat},
            {"min_lon", g.bbox.min.lon},
            {"max_lat", g.bbox.max.lat},
            {"max_lon", g.bbox.max.lon}}},
          {"lon_divisions", g.lon_divisions},
          {"lat_divisions", g.lat_divisions},
          {"margin", g.margin},
          {"order", "row-major, south row first"},
          {"values", grid.values()}};
}

RiskGrid grid_from_json(const nlohmann::json& doc) {
  try {
    EvaluationGrid g;
    const auto& b = doc.at("bbox");
    g.bbox = BoundingBox{{b.at("min_lat").get<double>(), b.at("min_lon").get<double>()},
                         {b.at("max_lat").get<double>(), b.at("max_lon").get<double>()}};
    g.lon_divisions = doc.at("lon_divisions").get<int>();
    g.lat_divisions = doc.at("lat_divisions").get<int>();
    g.margin = doc.value("margin", 0.0);
    return RiskGrid(g, doc.at("values").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed grid JSON: ") + e.what());
  }
}

}  // namespace bikerisk::density
