#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crystal/anisotropy.hpp"
#include "crystal/chambolle.hpp"
#include "crystal/facet_calculus.hpp"
#include "crystal/polygon_flow.hpp"

namespace crystal::io {

using Json = nlohmann::json;

// Shortest decimal text that parses back to the same double.
std::string number(double x);

Json read_json(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// Rejects any key of `obj` outside `allowed`; `what` names the object in the message.
void require_keys(const Json& obj, std::initializer_list<std::string_view> allowed, std::string_view what);

// {"wulff": [[x,y],...], "name": "..."} or a built-in name.
Json to_json(const Anisotropy& an);
Anisotropy anisotropy_from_json(const Json& j);
// Built-in name, or path to a JSON descriptor.
Anisotropy load_anisotropy(std::string_view name_or_path);

// {"anchor": [x,y], "facets": [{"dir": k, "len": L}, ...]}, plus "weak" and
// "extra_angles" for weakly admissible polygons. Parsing also accepts
// {"vertices": [[x,y],...]} with an optional "weak".
Json to_json(const AdmissiblePolygon& p);
AdmissiblePolygon polygon_from_json(const Json& j, std::shared_ptr<const Anisotropy> an);

// {"outer": [[x,y],...], "holes": [[[x,y],...],...],
//  "labels": {"outer": [+1,...], "holes": [[...],...]}}
Json to_json(const FacetSpec& f);
FacetSpec facet_from_json(const Json& j);
// As above, but a missing "labels" block inherits labels from `parent`.
FacetSpec candidate_from_json(const Json& j, const FacetSpec& parent);

// {"rings": [[[x,y],...],...]} or a bare list of rings.
Json to_json(const std::vector<Ring>& rings);
std::vector<Ring> rings_from_json(const Json& j);

// One row per sample: t, area, perimeter, facet count, then facet lengths joined by ';'.
std::string trajectory_csv(const Trajectory& tr);
// Terminal status, extinction time and the event log.
Json events_json(const Trajectory& tr);
// k, t, area, perimeter, iterations, converged.
std::string chambolle_csv(const ChambolleTrajectory& tr);

struct SvgFrame {
  double time = 0.0;
  std::vector<Ring> rings;
};
// Overlaid outlines, earliest darkest, y axis pointing up.
std::string svg_overlay(const std::vector<SvgFrame>& frames, double stroke = 1.5);

}  // namespace crystal::io
