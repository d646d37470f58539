#pragma once

// Independent reference implementations used to check the library.

#include "bikerisk/geo.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace oracle {

/// Direct (1/n) sum of the 2D Gaussian with variance h at one location.
double kde_at(std::span<const bikerisk::GeoPoint> points, double lat, double lon, double h);

struct Arc {
  std::uint32_t u, v;
  double cost_uv, cost_vu;
};

/// Plain uniform-cost search without pruning or tie rules.
std::optional<double> least_cost(std::size_t nodes, std::span<const Arc> arcs, std::uint32_t s,
                                 std::uint32_t t);

/// Minimum over every simple path, each summed left to right from s.
std::optional<double> exhaustive_min(std::size_t nodes, std::span<const Arc> arcs, std::uint32_t s,
                                     std::uint32_t t);

/// Discomfort law written out from its definition.
double discomfort(double d, double x);

}  // namespace oracle
