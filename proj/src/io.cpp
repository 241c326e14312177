#include "crystal/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crystal/error.hpp"

namespace crystal::io {

namespace {

Json point(Vec2 p) { return Json::array({p.x, p.y}); }

Vec2 point_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorCode::Parse, "expected a point [x, y], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>()};
}

Json ring_json(const Ring& ring) {
  Json out = Json::array();
  for (Vec2 p : ring) out.push_back(point(p));
  return out;
}

Ring ring_from(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, "expected a list of points");
  Ring ring;
  for (const Json& p : j) ring.push_back(point_from(p));
  return ring;
}

std::vector<int> labels_from(const Json& j, std::size_t n) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, "labels must be a list");
  std::vector<int> out;
  for (const Json& v : j) {
    if (!v.is_number_integer()) throw Error(ErrorCode::Parse, "labels must be +1 or -1");
    out.push_back(v.get<int>());
  }
  if (out.size() != n)
    throw Error(ErrorCode::UnlabeledSegment,
                std::to_string(n) + " segments but " + std::to_string(out.size()) + " labels");
  return out;
}

const Json& member(const Json& j, const char* key, std::string_view what) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::Parse, std::string(what) + ": missing \"" + key + "\"");
  return *it;
}

}  // namespace

std::string number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void require_keys(const Json& obj, std::initializer_list<std::string_view> allowed, std::string_view what) {
  if (!obj.is_object()) throw Error(ErrorCode::Parse, std::string(what) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(ErrorCode::Parse, std::string(what) + ": unknown key \"" + key + "\"");
  }
}

Json to_json(const Anisotropy& an) {
  Json j;
  if (!an.name().empty()) j["name"] = an.name();
  j["wulff"] = ring_json(Ring(an.wulff_vertices().begin(), an.wulff_vertices().end()));
  return j;
}

Anisotropy anisotropy_from_json(const Json& j) {
  if (j.is_string()) return Anisotropy::builtin(j.get<std::string>());
  require_keys(j, {"wulff", "name"}, "anisotropy");
  std::string name;
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) throw Error(ErrorCode::Parse, "anisotropy name must be a string");
    name = it->get<std::string>();
  }
  return Anisotropy::crystalline(ring_from(member(j, "wulff", "anisotropy")), name);
}

Anisotropy load_anisotropy(std::string_view name_or_path) {
  if (name_or_path == "l1" || name_or_path == "hexagon" || name_or_path == "linf")
    return Anisotropy::builtin(name_or_path);
  const std::filesystem::path path(name_or_path);
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::InvalidArgument, "unknown anisotropy \"" + std::string(name_or_path) + "\"");
  return anisotropy_from_json(read_json(path));
}

Json to_json(const AdmissiblePolygon& p) {
  Json j;
  j["anchor"] = point(p.anchor());
  Json facets = Json::array();
  for (const Facet& f : p.facets()) facets.push_back({{"dir", f.dir}, {"len", f.length}});
  j["facets"] = std::move(facets);
  if (p.weak()) {
    j["weak"] = true;
    Json extra = Json::array();
    const DirectionFan& fan = p.fan();
    for (std::size_t k = 0; k < fan.size(); ++k)
      if (!fan.admissible[k]) extra.push_back(fan.angles[k]);
    j["extra_angles"] = std::move(extra);
  }
  return j;
}

AdmissiblePolygon polygon_from_json(const Json& j, std::shared_ptr<const Anisotropy> an) {
  require_keys(j, {"anchor", "facets", "vertices", "weak", "extra_angles"}, "polygon");
  bool weak = false;
  if (auto it = j.find("weak"); it != j.end()) {
    if (!it->is_boolean()) throw Error(ErrorCode::Parse, "polygon: \"weak\" must be a boolean");
    weak = it->get<bool>();
  }
  if (j.contains("vertices")) {
    if (j.contains("anchor") || j.contains("facets") || j.contains("extra_angles"))
      throw Error(ErrorCode::Parse, "polygon: give either vertices or anchor/facets");
    const Ring ring = ring_from(j["vertices"]);
    return AdmissiblePolygon::from_vertices(ring, std::move(an), weak);
  }
  const Vec2 anchor = point_from(member(j, "anchor", "polygon"));
  const Json& fj = member(j, "facets", "polygon");
  if (!fj.is_array()) throw Error(ErrorCode::Parse, "polygon: \"facets\" must be a list");
  std::vector<Facet> facets;
  for (const Json& f : fj) {
    require_keys(f, {"dir", "len"}, "facet");
    const Json& dir = member(f, "dir", "facet");
    const Json& len = member(f, "len", "facet");
    if (!dir.is_number_unsigned() || !len.is_number())
      throw Error(ErrorCode::Parse, "facet: \"dir\" must be a non-negative integer and \"len\" a number");
    facets.push_back({dir.get<std::size_t>(), len.get<double>()});
  }
  std::vector<double> extra;
  if (auto it = j.find("extra_angles"); it != j.end()) {
    if (!it->is_array()) throw Error(ErrorCode::Parse, "polygon: \"extra_angles\" must be a list");
    for (const Json& a : *it) extra.push_back(a.get<double>());
  }
  return AdmissiblePolygon::from_facets(std::move(an), anchor, std::move(facets), weak, std::move(extra));
}

Json to_json(const FacetSpec& f) {
  Json j;
  j["outer"] = ring_json(f.outer().points);
  Json holes = Json::array(), hole_labels = Json::array();
  for (const LabeledRing& h : f.holes()) {
    holes.push_back(ring_json(h.points));
    hole_labels.push_back(h.labels);
  }
  j["holes"] = std::move(holes);
  j["labels"] = {{"outer", f.outer().labels}, {"holes", std::move(hole_labels)}};
  return j;
}

FacetSpec facet_from_json(const Json& j) {
  require_keys(j, {"outer", "holes", "labels"}, "facet spec");
  LabeledRing outer{ring_from(member(j, "outer", "facet spec")), {}};
  std::vector<LabeledRing> holes;
  if (auto it = j.find("holes"); it != j.end()) {
    if (!it->is_array()) throw Error(ErrorCode::Parse, "facet spec: \"holes\" must be a list");
    for (const Json& h : *it) holes.push_back({ring_from(h), {}});
  }
  const Json& labels = member(j, "labels", "facet spec");
  require_keys(labels, {"outer", "holes"}, "facet labels");
  outer.labels = labels_from(member(labels, "outer", "facet labels"), outer.points.size());
  if (!holes.empty()) {
    const Json& hl = member(labels, "holes", "facet labels");
    if (!hl.is_array() || hl.size() != holes.size())
      throw Error(ErrorCode::UnlabeledSegment, "one label list per hole is required");
    for (std::size_t i = 0; i < holes.size(); ++i) holes[i].labels = labels_from(hl[i], holes[i].points.size());
  }
  return FacetSpec::make(std::move(outer), std::move(holes));
}

FacetSpec candidate_from_json(const Json& j, const FacetSpec& parent) {
  if (j.is_object() && j.contains("labels")) return facet_from_json(j);
  require_keys(j, {"outer", "holes"}, "candidate");
  std::vector<Ring> holes;
  if (auto it = j.find("holes"); it != j.end())
    for (const Json& h : *it) holes.push_back(ring_from(h));
  return inherit_labels(parent, ring_from(member(j, "outer", "candidate")), std::move(holes));
}

Json to_json(const std::vector<Ring>& rings) {
  Json list = Json::array();
  for (const Ring& r : rings) list.push_back(ring_json(r));
  return Json{{"rings", std::move(list)}};
}

std::vector<Ring> rings_from_json(const Json& j) {
  const Json* list = &j;
  if (j.is_object()) {
    require_keys(j, {"rings"}, "set");
    list = &member(j, "rings", "set");
  }
  if (!list->is_array()) throw Error(ErrorCode::Parse, "set: expected a list of rings");
  std::vector<Ring> rings;
  for (const Json& r : *list) rings.push_back(ring_from(r));
  return rings;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::string out = "t,area,perimeter,facets,lengths\n";
  for (const Snapshot& s : tr.samples) {
    out += number(s.time) + ',' + number(s.polygon.area()) + ',' + number(s.polygon.perimeter()) + ',' +
           std::to_string(s.polygon.size()) + ',';
    for (std::size_t j = 0; j < s.polygon.size(); ++j) {
      if (j) out += ';';
      out += number(s.polygon.facet(j).length);
    }
    out += '\n';
  }
  return out;
}

Json events_json(const Trajectory& tr) {
  Json events = Json::array();
  for (const FlowEvent& e : tr.events)
    events.push_back({{"time", e.time}, {"kind", to_string(e.kind)}, {"facets", e.facets}});
  Json j{{"status", to_string(tr.status)}, {"events", std::move(events)}};
  j["extinction_time"] = tr.extinction_time ? Json(*tr.extinction_time) : Json(nullptr);
  if (tr.degenerate_law) j["degenerate_law"] = true;
  return j;
}

std::string chambolle_csv(const ChambolleTrajectory& tr) {
  std::string out = "k,t,area,perimeter,iterations,converged\n";
  for (const ChambolleRecord& r : tr.records)
    out += std::to_string(r.k) + ',' + number(r.time) + ',' + number(r.area) + ',' + number(r.perimeter) + ',' +
           std::to_string(r.iterations) + ',' + (r.converged ? "1" : "0") + '\n';
  return out;
}

std::string svg_overlay(const std::vector<SvgFrame>& frames, double stroke) {
  Vec2 lo{INFINITY, INFINITY}, hi{-INFINITY, -INFINITY};
  for (const SvgFrame& f : frames)
    for (const Ring& r : f.rings)
      for (Vec2 p : r) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
      }
  if (!(lo.x <= hi.x)) lo = hi = {0.0, 0.0};
  const double size = 512.0, margin = 16.0;
  const double extent = std::max({hi.x - lo.x, hi.y - lo.y, 1e-12});
  const double scale = (size - 2.0 * margin) / extent;
  auto px = [&](Vec2 p) {
    return number(std::round((margin + (p.x - lo.x) * scale) * 100.0) / 100.0) + ',' +
           number(std::round((size - margin - (p.y - lo.y) * scale) * 100.0) / 100.0);
  };
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"512\" height=\"512\" viewBox=\"0 0 512 512\">\n";
  out += "<rect width=\"512\" height=\"512\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < frames.size(); ++k) {
    // Grey level runs from black (first frame) to light grey (last).
    const int shade = frames.size() > 1 ? static_cast<int>(std::lround(180.0 * k / (frames.size() - 1))) : 0;
    const std::string colour = "rgb(" + std::to_string(shade) + ',' + std::to_string(shade) + ',' +
                               std::to_string(shade) + ')';
    out += "<g fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"" + number(stroke) + "\"><title>t=" +
           number(frames[k].time) + "</title>\n";
    for (const Ring& r : frames[k].rings) {
      if (r.empty()) continue;
      out += "<path d=\"M" + px(r[0]);
      for (std::size_t i = 1; i < r.size(); ++i) out += " L" + px(r[i]);
      out += " Z\"/>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace crystal::io
