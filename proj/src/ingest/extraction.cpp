#include "bikerisk/ingest/extraction.hpp"

#include "bikerisk/io.hpp"

namespace bikerisk::ingest {

std::string FileFetcher::fetch(std::string_view resource) const {
  return read_file(root_ / std::filesystem::path(resource));
}

std::vector<GeoPoint> InMemoryAccidentLayer::locate(const BoundingBox& window) const {
  std::vector<GeoPoint> out;
  for (const auto& r : records_) {
    if (window.contains(r.location)) out.push_back(r.location);
  }
  return out;
}

std::vector<AccidentRecord> InMemoryAccidentLayer::identify(const BoundingBox& window) const {
  std::vector<AccidentRecord> out;
  for (const auto& r : records_) {
    if (window.contains(r.location)) out.push_back(r);
  }
  if (out.size() > limit_) {
    throw DataError("identify window " + to_string(window) + " holds " +
                    std::to_string(out.size()) + " elements, limit is " +
                    std::to_string(limit_));
  }
  return out;
}

Extraction extract_accidents(const AccidentLayer& layer, const BoundingBox& region,
                             double overlap_deg) {
  Extraction out;
  const auto points = layer.locate(region);
  SubdivisionOptions options;
  options.threshold = layer.limit();
  out.plan = subdivide_region(region, points, options);

  for (const auto& cell : out.plan.cells) {
    // Clipped to the region: points outside it were never planned for.
    BoundingBox window = cell.expanded(overlap_deg);
    window.min.lat = std::max(window.min.lat, region.min.lat);
    window.min.lon = std::max(window.min.lon, region.min.lon);
    window.max.lat = std::min(window.max.lat, region.max.lat);
    window.max.lon = std::min(window.max.lon, region.max.lon);
    auto batch = layer.identify(window);
    out.records.insert(out.records.end(), std::make_move_iterator(batch.begin()),
                       std::make_move_iterator(batch.end()));
  }
  out.duplicates_removed = dedup_by_id(out.records);
  return out;
}

}  // namespace bikerisk::ingest
