#pragma once

#include "bikerisk/ingest/accidents.hpp"
#include "bikerisk/ingest/subdivide.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace bikerisk::ingest {

/// Source of raw bytes by resource name. Production deployments would put a
/// web client behind this; the repository ships a directory-backed one.
class Fetcher {
 public:
  virtual ~Fetcher() = default;
  virtual std::string fetch(std::string_view resource) const = 0;
};

class FileFetcher final : public Fetcher {
 public:
  explicit FileFetcher(std::filesystem::path root) : root_(std::move(root)) {}
  std::string fetch(std::string_view resource) const override;

 private:
  std::filesystem::path root_;
};

/// Accident layer answering window queries with a hard per-query limit, the
/// way a paged map-identify service does.
class AccidentLayer {
 public:
  virtual ~AccidentLayer() = default;
  virtual std::size_t limit() const = 0;
  /// Locations of all elements in the window (used to plan subdivisions).
  virtual std::vector<GeoPoint> locate(const BoundingBox& window) const = 0;
  /// Elements in the closed window; throws DataError when more than limit().
  virtual std::vector<AccidentRecord> identify(const BoundingBox& window) const = 0;
};

class InMemoryAccidentLayer final : public AccidentLayer {
 public:
  InMemoryAccidentLayer(std::vector<AccidentRecord> records, std::size_t limit = 200)
      : records_(std::move(records)), limit_(limit) {}

  std::size_t limit() const override { return limit_; }
  std::vector<GeoPoint> locate(const BoundingBox& window) const override;
  std::vector<AccidentRecord> identify(const BoundingBox& window) const override;

 private:
  std::vector<AccidentRecord> records_;
  std::size_t limit_;
};

struct Extraction {
  Subdivision plan;
  std::vector<AccidentRecord> records;
  std::size_t duplicates_removed = 0;
};

/// Plans subdivisions so that each holds at most layer.limit() elements, then
/// queries every cell through a window widened by `overlap_deg` so boundary
/// points are never missed. The overlap duplicates are removed by id.
Extraction extract_accidents(const AccidentLayer& layer, const BoundingBox& region,
                             double overlap_deg = 1e-6);

}  // namespace bikerisk::ingest
