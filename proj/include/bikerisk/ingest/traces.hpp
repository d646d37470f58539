#pragma once

#include "bikerisk/geo.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bikerisk::ingest {

enum class TransportMode { Bike, Other, Unlabeled };

struct TraceSample {
  GeoPoint location;
  std::string trace_id;
  TransportMode mode = TransportMode::Unlabeled;
};

/// One GPX document.
struct TraceSource {
  std::string name;
  std::string content;
};

struct TraceLoad {
  std::vector<TraceSample> samples;
  std::vector<std::string> warnings;
  std::size_t files_skipped = 0;
  std::size_t removed_non_bike = 0;
  std::size_t outside_window = 0;
  std::size_t traces_seen = 0;
};

/// Maps a free-text mode label ("bike", "cycling", "car", ...) to a mode.
/// Empty means unlabeled.
TransportMode parse_mode(std::string_view label);

/// Reads <trk>/<trkpt> samples from GPX documents. The track's <type>
/// element carries the transport-mode label. Samples of tracks labeled with a
/// non-bike mode are removed; unlabeled tracks are kept. Files that fail to
/// parse are skipped with a warning. When `window` is given, samples outside
/// it are dropped. Throws DataError if no sample survives.
TraceLoad load_traces(std::span<const TraceSource> sources,
                      const std::optional<BoundingBox>& window = std::nullopt);

/// Every *.gpx file of a directory, sorted by file name.
std::vector<TraceSource> read_trace_directory(const std::filesystem::path& dir);

std::vector<GeoPoint> locations(std::span<const TraceSample> samples);

}  // namespace bikerisk::ingest
