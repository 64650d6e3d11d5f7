#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcext/body.hpp"
#include "qcext/counterexamples.hpp"
#include "qcext/extension.hpp"
#include "qcext/levelset.hpp"

namespace qcext {

using Json = nlohmann::json;

Json vec_json(Vec2 p);
Vec2 vec_from_json(const Json& j);
Json halfplane_json(const HalfPlane& h);
HalfPlane halfplane_from_json(const Json& j);

// Canonical body JSON: polychain when built from vertices, analytic base plus "clip" list, or half-planes.
Json body_to_json(const Body2& b);
Body2 body_from_json(const Json& j);
// Named bodies: disk, square, parabola, hypograph, cosh, triangle, half-disk, strip.
Body2 preset_body(const std::string& name);
std::vector<std::string> preset_names();

Json extended_body_json(const ExtendedBody& e);

struct ParsedFunction {
  std::string kind;
  std::optional<LevelFamily> family;  // set when the function is given by nested sublevel bodies
  QCFunction eval;
};
// Kinds: levels, staircase, constant, usc, tilde_f (rebuilt from the body), composed.
ParsedFunction function_from_json(const Json& j);

Json cone_json(const Cone2& c);
Json certificate_json(const NoLipCertificate& c);
Json certificate_json(const NoUCCertificate& c);
Json certificate_json(const ForcingCertificate& c);
Json usc_json(const UscRecord& r, const UscForcingCheck& check);
Json classification_json(const Classification& c);

// Full-precision number text for CSV cells.
std::string fmt17(double v);

struct CsvTable {
  std::vector<std::string> comments;  // written as "# ..." lines before the header
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
std::string csv_text(const CsvTable& t);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

CsvTable no_lip_table(const NoLipCertificate& c);
CsvTable no_uc_points_table(const NoUCCertificate& c);
CsvTable no_uc_gap_table(const NoUCCertificate& c);
CsvTable forcing_table(const ForcingCertificate& c);

// 64-bit FNV-1a of a string.
std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

}  // namespace qcext
