#include "bikerisk/riskmap/contours.hpp"

#include "bikerisk/error.hpp"

#include <array>
#include <unordered_map>
#include <utility>

namespace bikerisk::riskmap {

std::size_t ContourSet::count(double level) const {
  std::size_t n = 0;
  for (const auto& l : lines) n += l.level == level ? 1 : 0;
  return n;
}

std::size_t ContourSet::closed_count(double level) const {
  std::size_t n = 0;
  for (const auto& l : lines) n += (l.level == level && l.closed) ? 1 : 0;
  return n;
}

namespace {

// Lattice edges: horizontal from (r, c) to (r, c + 1), vertical from (r, c) to (r + 1, c).
struct EdgeKey {
  static std::uint64_t horizontal(int r, int c, int cols) {
    return (static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(cols) + c) * 2;
  }
  static std::uint64_t vertical(int r, int c, int cols) {
    return (static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(cols) + c) * 2 + 1;
  }
};

struct Segment {
  std::uint64_t from;
  std::uint64_t to;
};

class LevelTracer {
 public:
  LevelTracer(const density::RiskGrid& grid, double level) : grid_(grid), level_(level) {}

  std::vector<ContourLine> trace() {
    collect_segments();
    return join();
  }

 private:
  bool above(int r, int c) const { return grid_.at(r, c) >= level_; }

  GeoPoint crossing(std::uint64_t key) const {
    const int cols = grid_.cols();
    const bool vertical = (key & 1u) != 0;
    const auto cell = key / 2;
    const int r = static_cast<int>(cell / static_cast<std::uint64_t>(cols));
    const int c = static_cast<int>(cell % static_cast<std::uint64_t>(cols));
    const int r2 = vertical ? r + 1 : r;
    const int c2 = vertical ? c : c + 1;
    const double va = grid_.at(r, c);
    const double vb = grid_.at(r2, c2);
    const double t = vb == va ? 0.5 : (level_ - va) / (vb - va);
    const auto lat = grid_.grid().lattice();
    return {lat.lat(r) + t * (lat.lat(r2) - lat.lat(r)), lat.lon(c) + t * (lat.lon(c2) - lat.lon(c))};
  }

  void collect_segments() {
    const int rows = grid_.rows();
    const int cols = grid_.cols();
    for (int r = 0; r + 1 < rows; ++r) {
      for (int c = 0; c + 1 < cols; ++c) {
        const int index = (above(r, c) ? 1 : 0) | (above(r, c + 1) ? 2 : 0) |
                          (above(r + 1, c + 1) ? 4 : 0) | (above(r + 1, c) ? 8 : 0);
        if (index == 0 || index == 15) continue;
        const auto bottom = EdgeKey::horizontal(r, c, cols);
        const auto top = EdgeKey::horizontal(r + 1, c, cols);
        const auto left = EdgeKey::vertical(r, c, cols);
        const auto right = EdgeKey::vertical(r, c + 1, cols);
        const double center =
            0.25 * (grid_.at(r, c) + grid_.at(r, c + 1) + grid_.at(r + 1, c + 1) + grid_.at(r + 1, c));
        const bool center_above = center >= level_;
        switch (index) {
          case 1: case 14: add(left, bottom); break;
          case 2: case 13: add(bottom, right); break;
          case 3: case 12: add(left, right); break;
          case 4: case 11: add(right, top); break;
          case 6: case 9: add(bottom, top); break;
          case 7: case 8: add(left, top); break;
          case 5:
            if (center_above) {
              add(bottom, right);
              add(top, left);
            } else {
              add(left, bottom);
              add(right, top);
            }
            break;
          case 10:
            if (center_above) {
              add(left, bottom);
              add(right, top);
            } else {
              add(bottom, right);
              add(top, left);
            }
            break;
          default:
            break;
        }
      }
    }
  }

  void add(std::uint64_t a, std::uint64_t b) {
    const auto idx = segments_.size();
    segments_.push_back({a, b});
    incident_[a].push_back(idx);
    incident_[b].push_back(idx);
  }

  std::vector<ContourLine> join() {
    std::vector<ContourLine> lines;
    std::vector<char> used(segments_.size(), 0);

    auto walk = [&](std::size_t first, std::uint64_t start_key) {
      std::vector<std::uint64_t> keys{start_key};
      std::size_t seg = first;
      std::uint64_t at = start_key;
      for (;;) {
        used[seg] = 1;
        const auto next_key = segments_[seg].from == at ? segments_[seg].to : segments_[seg].from;
        keys.push_back(next_key);
        at = next_key;
        std::size_t next_seg = segments_.size();
        for (auto s : incident_[at]) {
          if (!used[s]) {
            next_seg = s;
            break;
          }
        }
        if (next_seg == segments_.size()) break;
        seg = next_seg;
      }
      ContourLine line;
      line.level = level_;
      line.closed = keys.size() > 2 && keys.front() == keys.back();
      line.points.reserve(keys.size());
      for (auto k : keys) line.points.push_back(crossing(k));
      lines.push_back(std::move(line));
    };

    // Open lines start at a crossing used by a single segment (grid border).
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      if (used[s]) continue;
      for (auto end : {segments_[s].from, segments_[s].to}) {
        if (!used[s] && incident_[end].size() == 1) walk(s, end);
      }
    }
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      if (!used[s]) walk(s, segments_[s].from);
    }
    return lines;
  }

  const density::RiskGrid& grid_;
  double level_;
  std::vector<Segment> segments_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> incident_;
};

}  // namespace

ContourSet extract_contours(const density::RiskGrid& grid, std::span<const double> levels) {
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i - 1] < levels[i])) {
      throw ValidationError("contour levels must be strictly increasing");
    }
  }
  ContourSet out;
  out.levels.assign(levels.begin(), levels.end());
  for (double level : levels) {
    auto lines = LevelTracer(grid, level).trace();
    out.lines.insert(out.lines.end(), std::make_move_iterator(lines.begin()),
                     std::make_move_iterator(lines.end()));
  }
  return out;
}

nlohmann::json contours_to_geojson(const ContourSet& contours) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto& line : contours.lines) {
    nlohmann::json coords = nlohmann::json::array();
    for (const auto& p : line.points) coords.push_back({p.lon, p.lat});
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
                        {"properties", {{"level", line.level}, {"closed", line.closed}}}});
  }
  return {{"type", "FeatureCollection"},
          {"levels", contours.levels},
          {"style", {{"ramp", {"#5e3c99", "#b2abd2", "#fdb863", "#e66101"}},
                     {"semantics", "orange hue denotes higher risk"}}},
          {"features", std::move(features)}};
}

}  // namespace bikerisk::riskmap
