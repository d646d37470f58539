#pragma once

#include "bikerisk/density/grid.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace bikerisk::density {

/// Binary grid file: magic "BRGRID01", then little-endian
///   f64 min_lat, min_lon, max_lat, max_lon, margin
///   u32 lon_divisions, lat_divisions
///   f64 values[lat_divisions * lon_divisions]   (row-major, south row first)
std::string write_grid_binary(const RiskGrid& grid);
RiskGrid read_grid_binary(std::string_view bytes);

nlohmann::json grid_to_json(const RiskGrid& grid);
RiskGrid grid_from_json(const nlohmann::json& doc);

}  // namespace bikerisk::density
