#pragma once

#include <json.hpp>
#include <string>

#include "loopgerbe/gerbe.hpp"
#include "loopgerbe/line_bundle.hpp"
#include "loopgerbe/spectral.hpp"

namespace loopgerbe {

using Json = nlohmann::json;

/// Reads and parses a JSON file; parse errors carry line and column.
Json load_json_file(const std::string& path);
/// Parses text; `origin` names the source in error messages.
Json parse_json_text(const std::string& text, const std::string& origin);
/// 1-based line and column of a byte offset.
std::pair<int, int> line_column(const std::string& text, std::size_t offset);

Json to_json(const TrigPoly& p);
TrigPoly trig_poly_from_json(const Json& j, int dim = 0);

Json to_json(const Box& b);
Box box_from_json(const Json& j);

Json to_json(const LiftedForm& f);
LiftedForm lifted_form_from_json(const Json& j);

/// Only polynomial maps serialize; compositions throw StructuralError.
Json to_json(const SmoothMap& m);
SmoothMap smooth_map_from_json(const Json& j);
LoopMap loop_from_json(const Json& j);
CylinderMap cylinder_from_json(const Json& j);

Json to_json(const Cover& c);
Cover cover_from_json(const Json& j);

Json to_json(const CechCochain& c);
CechCochain cochain_from_json(const Json& j, const Cover& cover);

Json to_json(const LineBundleData& l);
LineBundleData line_bundle_from_json(const Json& j);

/// Chart 2-forms built from a partition of unity are written as "solve":
/// the reader recomputes them with solve_F.
Json to_json(const GerbeData& g);
GerbeData gerbe_from_json(const Json& j);

Json to_json(const SpectralFamily& f);
SpectralFamily family_from_json(const Json& j);

Json to_json(const SpectralCut& c);
SpectralCut cuts_from_json(const Json& j, const SpectralFamily& fam, const Cover& cover);

} // namespace loopgerbe
