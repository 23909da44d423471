#pragma once

#include "dendrodyn/dynamics.hpp"
#include "dendrodyn/entropy.hpp"
#include "dendrodyn/hyperspace.hpp"
#include "dendrodyn/odometer.hpp"
#include "dendrodyn/star.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dendro {

// Insertion-ordered so that output is byte-identical across runs.
using Json = nlohmann::ordered_json;

// Parses a file or string; syntax errors become ParseError with line:column.
Json load_json_file(const std::filesystem::path& path);
Json parse_json(const std::string& text, const std::string& origin = "<string>");

// `{vertices: [name], edges: [{u, v, len: "p/q"}]}`.
Json tree_to_json(const MetricTree& tree);
TreeHandle tree_from_json(const Json& j);

// `{vertex: name}` or `{edge: id, offset: "p/q"}`.
Json point_to_json(const TreePoint& p);
TreePoint point_from_json(const TreeHandle& host, const Json& j);

// `{tree: <inline tree or file path>, vertex_images: {name: point}}`.
// A relative tree path is resolved against base_dir.
Json map_to_json(const PLSelfMap& f);
PLSelfMap map_from_json(const Json& j, const std::filesystem::path& base_dir = {});

// `{finite_set: [point]}` or `{subtree: [point]}`.
Json element_to_json(const HyperElement& e);
HyperElement element_from_json(const TreeHandle& host, const Json& j);

// `{base: [j_i], point: [x_i]}`.
Json odometer_to_json(const OdometerBase& base, const OdoPoint& x);
std::pair<OdometerBase, OdoPoint> odometer_from_json(const Json& j);

Json star_point_to_json(const StarPoint& p);
Json star_subtree_to_json(const StarSubtree& t);

// Reports.
Json to_json(const MonotonicityVerdict& v);
Json to_json(const OmegaSet& w);
Json to_json(const RecurrenceReport& r);
Json to_json(const PeriodicSet& s);
Json to_json(const TailStats& s);
Json to_json(const PairReport& r);
Json to_json(const HyperOmega& w);
Json to_json(const CompanionCertificate& c);
Json to_json(const OdometerCertificate& c);
Json to_json(const OmegaChaosCertificate& c);
Json to_json(const EntropyCertificate& c);

// Rows n, eps, count, rate.
void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows);
Json to_json(const std::vector<CurveRow>& rows);

// Minimal CSV writer; fields containing commas or quotes are quoted.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace dendro
