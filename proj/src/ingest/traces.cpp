#include "bikerisk/ingest/traces.hpp"

#include "bikerisk/error.hpp"
#include "bikerisk/format.hpp"
#include "bikerisk/io.hpp"

#include <expat.h>

#include <algorithm>
#include <memory>

namespace bikerisk::ingest {

TransportMode parse_mode(std::string_view label) {
  const auto key = to_lower(trim(label));
  if (key.empty()) return TransportMode::Unlabeled;
  if (key == "bike" || key == "bicycle" || key == "cycling" || key == "biking" ||
      key == "cycle") {
    return TransportMode::Bike;
  }
  return TransportMode::Other;
}

namespace {

std::string_view local_name(const XML_Char* name) {
  std::string_view n(name);
  const auto colon = n.rfind(':');
  return colon == std::string_view::npos ? n : n.substr(colon + 1);
}

struct Track {
  std::string name;
  std::string type;
  std::vector<GeoPoint> points;
};

struct GpxState {
  std::vector<std::string> stack;
  std::vector<Track> tracks;
  std::string text;
  std::size_t bad_points = 0;
};

const char* attribute(const XML_Char** attrs, std::string_view key) {
  for (std::size_t i = 0; attrs[i] != nullptr; i += 2) {
    if (local_name(attrs[i]) == key) return attrs[i + 1];
  }
  return nullptr;
}

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto& st = *static_cast<GpxState*>(user);
  const auto n = local_name(name);
  st.text.clear();
  if (n == "trk") {
    st.tracks.emplace_back();
  } else if (n == "trkpt" && !st.tracks.empty()) {
    const char* lat = attribute(attrs, "lat");
    const char* lon = attribute(attrs, "lon");
    try {
      if (lat == nullptr || lon == nullptr) throw ValidationError("missing lat/lon");
      GeoPoint p{parse_double(lat, "lat"), parse_double(lon, "lon")};
      if (!is_valid(p)) throw ValidationError("out of range");
      st.tracks.back().points.push_back(p);
    } catch (const Error&) {
      ++st.bad_points;
    }
  }
  st.stack.emplace_back(n);
}

void XMLCALL on_end(void* user, const XML_Char* name) {
  auto& st = *static_cast<GpxState*>(user);
  const auto n = local_name(name);
  const bool parent_is_trk = st.stack.size() >= 2 && st.stack[st.stack.size() - 2] == "trk";
  if (parent_is_trk && !st.tracks.empty()) {
    if (n == "name") st.tracks.back().name = trim(st.text);
    if (n == "type") st.tracks.back().type = trim(st.text);
  }
  st.text.clear();
  if (!st.stack.empty()) st.stack.pop_back();
}

void XMLCALL on_text(void* user, const XML_Char* s, int len) {
  auto& st = *static_cast<GpxState*>(user);
  st.text.append(s, static_cast<std::size_t>(len));
}

struct ParserDeleter {
  void operator()(XML_Parser p) const { XML_ParserFree(p); }
};

GpxState parse_gpx(const TraceSource& source) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, ParserDeleter> parser(
      XML_ParserCreate(nullptr));
  if (!parser) throw Error("cannot allocate XML parser");
  GpxState st;
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  if (XML_Parse(parser.get(), source.content.data(), static_cast<int>(source.content.size()),
                XML_TRUE) == XML_STATUS_ERROR) {
    throw DataError(source.name + ": " + XML_ErrorString(XML_GetErrorCode(parser.get())) +
                    " at line " + std::to_string(XML_GetCurrentLineNumber(parser.get())));
  }
  return st;
}

}  // namespace

TraceLoad load_traces(std::span<const TraceSource> sources,
                      const std::optional<BoundingBox>& window) {
  TraceLoad out;
  for (const auto& source : sources) {
    GpxState st;
    try {
      st = parse_gpx(source);
    } catch (const DataError& e) {
      ++out.files_skipped;
      out.warnings.push_back(std::string("skipped unparseable trace file ") + e.what());
      continue;
    }
    if (st.bad_points > 0) {
      out.warnings.push_back(source.name + ": ignored " + std::to_string(st.bad_points) +
                             " track points with invalid coordinates");
    }
    for (std::size_t t = 0; t < st.tracks.size(); ++t) {
      auto& track = st.tracks[t];
      ++out.traces_seen;
      const auto mode = parse_mode(track.type);
      if (mode == TransportMode::Other) {
        out.removed_non_bike += track.points.size();
        continue;
      }
      const std::string id =
          track.name.empty() ? source.name + "#" + std::to_string(t) : track.name;
      for (const auto& p : track.points) {
        if (window && !window->contains(p)) {
          ++out.outside_window;
          continue;
        }
        out.samples.push_back({p, id, mode});
      }
    }
  }
  if (out.samples.empty()) {
    throw DataError("no usable trace samples: traffic density cannot be estimated");
  }
  return out;
}

std::vector<TraceSource> read_trace_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("trace directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && to_lower(entry.path().extension().string()) == ".gpx") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<TraceSource> out;
  for (const auto& f : files) out.push_back({f.filename().string(), read_file(f)});
  return out;
}

std::vector<GeoPoint> locations(std::span<const TraceSample> samples) {
  std::vector<GeoPoint> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.location);
  return out;
}

}  // namespace bikerisk::ingest
