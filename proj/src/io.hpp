#pragma once

#include "common.hpp"
#include "field_system.hpp"
#include "graph_min.hpp"
#include "metric_core.hpp"
#include "polyhedral.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace catmin {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Parsed instance file. Exactly one payload is present.
struct Instance {
  int version = kFormatVersion;
  std::string target = "euclidean";
  int dimension = 0;
  std::optional<MappedDisc> disc;
  std::optional<GraphInTarget> graph;
  std::optional<HeightFieldPatch> patch;
  std::optional<PolyhedralDisc> polyhedral;
  std::vector<int> F;
  Tolerances tol;
};

// Every schema and invariant problem, sorted. Field paths use dots and [i].
std::vector<std::string> validate_instance(const Json& j);

// Throws Error(InvalidInput) with the first diagnostic.
Instance parse_instance(const Json& j);
Json to_json(const Instance& inst);

// Reads and parses JSON text; syntax errors carry line and column.
Json parse_json_text(const std::string& text);
Json load_json_file(const std::string& path);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Stable text form: sorted keys, shortest round-trip doubles, trailing newline.
std::string dump(const Json& j);

// Doubles with +-inf encoded as the strings "inf" / "-inf".
Json number(double x);
double as_number(const Json& j);

Json to_json(const Vec& v);
Json to_json(const Vec2& v);
Json to_json(const Vec3& v);
Json to_json(const PseudometricMatrix& p);
Json to_json(const MappedDisc& m);
Json to_json(const GraphInTarget& g);
Json to_json(const HeightFieldPatch& p);
Json to_json(const PolyhedralDisc& w);
Json to_json(const Tolerances& t);

MappedDisc disc_from_json(const Json& j);
GraphInTarget graph_from_json(const Json& j);
HeightFieldPatch patch_from_json(const Json& j);
PolyhedralDisc polyhedral_from_json(const Json& j);

}  // namespace catmin
