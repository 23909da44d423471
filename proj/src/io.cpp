#include "dendrodyn/io.hpp"

#include "dendrodyn/errors.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace dendro {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw ParseError("field `" + field + "`: " + what);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) field_error(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) field_error(where.empty() ? key : where + "." + key, "missing");
    return *it;
}

std::string text_of(const Json& j, const std::string& where) {
    if (!j.is_string()) field_error(where, "expected a string");
    return j.get<std::string>();
}

Rational rational_of(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(mpz_class(j.dump()));
    try {
        return parse_rational(text_of(j, where));
    } catch (const ParseError& e) {
        field_error(where, e.what());
    }
}

std::size_t index_of(const Json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        field_error(where, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::string kind_name(RecurrenceClass c) { return to_string(c); }

Json point_list(const std::vector<TreePoint>& points) {
    Json out = Json::array();
    for (const auto& p : points) out.push_back(point_to_json(p));
    return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // Byte offset to line and column.
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON");
    }
}

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string() + ": cannot open");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_json(buffer.str(), path.string());
}

Json tree_to_json(const MetricTree& tree) {
    Json j;
    j["vertices"] = Json::array();
    for (std::size_t v = 0; v < tree.vertex_count(); ++v) j["vertices"].push_back(tree.vertex_name(v));
    j["edges"] = Json::array();
    for (const auto& e : tree.edges())
        j["edges"].push_back(
            {{"u", tree.vertex_name(e.u)}, {"v", tree.vertex_name(e.v)}, {"len", format_rational(e.length)}});
    return j;
}

TreeHandle tree_from_json(const Json& j) {
    const Json& vertices = member(j, "vertices", "");
    if (!vertices.is_array()) field_error("vertices", "expected an array");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        names.push_back(text_of(vertices[i], "vertices[" + std::to_string(i) + "]"));
    const Json& edges = member(j, "edges", "");
    if (!edges.is_array()) field_error("edges", "expected an array");
    std::vector<EdgeSpec> specs;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string where = "edges[" + std::to_string(i) + "]";
        specs.push_back({text_of(member(edges[i], "u", where), where + ".u"),
                         text_of(member(edges[i], "v", where), where + ".v"),
                         rational_of(member(edges[i], "len", where), where + ".len")});
    }
    try {
        return MetricTree::build(std::move(names), std::move(specs));
    } catch (const InvalidArgumentError& e) {
        throw ParseError(std::string("tree: ") + e.what());
    }
}

Json point_to_json(const TreePoint& p) {
    if (p.is_vertex()) return Json{{"vertex", p.tree().vertex_name(p.vertex_id())}};
    return Json{{"edge", p.edge_id()}, {"offset", format_rational(p.offset())}};
}

TreePoint point_from_json(const TreeHandle& host, const Json& j) {
    if (!j.is_object()) field_error("point", "expected an object");
    if (j.contains("vertex")) {
        auto v = host->find_vertex(text_of(j["vertex"], "vertex"));
        if (!v) field_error("vertex", "unknown vertex " + j["vertex"].dump());
        return TreePoint::at_vertex(host, *v);
    }
    std::size_t e = index_of(member(j, "edge", "point"), "edge");
    if (e >= host->edge_count()) field_error("edge", "edge index out of range");
    Rational t = rational_of(member(j, "offset", "point"), "offset");
    if (t < 0 || t > host->edge(e).length) field_error("offset", "offset outside the edge");
    return TreePoint::on_edge(host, e, t);
}

Json map_to_json(const PLSelfMap& f) {
    Json j;
    j["tree"] = tree_to_json(*f.host());
    j["vertex_images"] = Json::object();
    for (std::size_t v = 0; v < f.host()->vertex_count(); ++v)
        j["vertex_images"][f.host()->vertex_name(v)] = point_to_json(f.vertex_image(v));
    return j;
}

PLSelfMap map_from_json(const Json& j, const std::filesystem::path& base_dir) {
    const Json& tree_field = member(j, "tree", "");
    TreeHandle host;
    if (tree_field.is_string()) {
        std::filesystem::path p = tree_field.get<std::string>();
        host = tree_from_json(load_json_file(p.is_absolute() ? p : base_dir / p));
    } else {
        host = tree_from_json(tree_field);
    }
    const Json& images = member(j, "vertex_images", "");
    if (!images.is_object()) field_error("vertex_images", "expected an object");
    std::vector<TreePoint> out;
    for (std::size_t v = 0; v < host->vertex_count(); ++v) {
        const std::string& name = host->vertex_name(v);
        auto it = images.find(name);
        if (it == images.end()) field_error("vertex_images." + name, "missing");
        try {
            out.push_back(point_from_json(host, *it));
        } catch (const ParseError& e) {
            throw ParseError("vertex_images." + name + ": " + e.what());
        }
    }
    for (const auto& [name, value] : images.items())
        if (!host->find_vertex(name)) field_error("vertex_images." + name, "unknown vertex");
    return PLSelfMap(host, std::move(out));
}

Json element_to_json(const HyperElement& e) {
    const char* key = std::holds_alternative<FiniteSet>(e) ? "finite_set" : "subtree";
    return Json{{key, point_list(generators(e))}};
}

HyperElement element_from_json(const TreeHandle& host, const Json& j) {
    const bool finite = j.is_object() && j.contains("finite_set");
    const char* key = finite ? "finite_set" : "subtree";
    const Json& list = member(j, key, "element");
    if (!list.is_array() || list.empty()) field_error(key, "expected a nonempty array");
    std::vector<TreePoint> pts;
    for (const auto& p : list) pts.push_back(point_from_json(host, p));
    if (finite) return FiniteSet::of(std::move(pts));
    return SubTree::hull(pts);
}

Json odometer_to_json(const OdometerBase& base, const OdoPoint& x) {
    return Json{{"base", base.bounds()}, {"point", x}};
}

std::pair<OdometerBase, OdoPoint> odometer_from_json(const Json& j) {
    const Json& b = member(j, "base", "");
    const Json& p = member(j, "point", "");
    if (!b.is_array() || !p.is_array()) field_error("base", "expected arrays for base and point");
    std::vector<unsigned> bounds;
    for (std::size_t i = 0; i < b.size(); ++i)
        bounds.push_back(static_cast<unsigned>(index_of(b[i], "base[" + std::to_string(i) + "]")));
    OdoPoint x;
    for (std::size_t i = 0; i < p.size(); ++i)
        x.push_back(static_cast<unsigned>(index_of(p[i], "point[" + std::to_string(i) + "]")));
    try {
        OdometerBase base(bounds);
        validate(base, x);
        return {base, x};
    } catch (const InvalidArgumentError& e) {
        throw ParseError(std::string("odometer: ") + e.what());
    }
}

Json star_point_to_json(const StarPoint& p) {
    return Json{{"ray", p.ray()}, {"radius", format_rational(p.radius())}};
}

Json star_subtree_to_json(const StarSubtree& t) {
    Json reach = Json::array();
    for (const auto& [ray, r] : t.rays()) reach.push_back({{"ray", ray}, {"reach", format_rational(r)}});
    return reach;
}

Json to_json(const MonotonicityVerdict& v) {
    Json j{{"kind", "monotonicity"}, {"monotone", v.monotone}};
    if (v.witness) {
        Json comps = Json::array();
        for (const auto& c : v.witness->components) {
            Json segs = Json::array();
            for (const auto& s : c.segments)
                segs.push_back({{"edge", s.edge}, {"lo", format_rational(s.lo)}, {"hi", format_rational(s.hi)}});
            comps.push_back({{"points", point_list(c.points)}, {"segments", segs}});
        }
        j["witness"] = {{"y", point_to_json(v.witness->y)}, {"components", comps}};
    }
    return j;
}

Json to_json(const OmegaSet& w) {
    return Json{{"kind", to_string(w.kind)},
                {"attracted", w.attracted},
                {"eps", format_rational(w.eps)},
                {"horizon", w.horizon},
                {"points", point_list(w.points)}};
}

Json to_json(const RecurrenceReport& r) {
    return Json{{"class", kind_name(r.cls)},
                {"period", r.period},
                {"step", r.step},
                {"eps", format_rational(r.eps)},
                {"horizon", r.horizon}};
}

Json to_json(const PeriodicSet& s) {
    Json pts = Json::array();
    for (const auto& p : s.points) pts.push_back({{"point", point_to_json(p.point)}, {"period", p.period}});
    Json segs = Json::array();
    for (const auto& g : s.segments)
        segs.push_back({{"edge", g.piece.edge},
                        {"lo", format_rational(g.piece.lo)},
                        {"hi", format_rational(g.piece.hi)},
                        {"period", g.period}});
    return Json{{"max_period", s.max_period}, {"points", pts}, {"segments", segs}};
}

Json to_json(const TailStats& s) {
    return Json{{"begin", s.begin},
                {"end", s.end},
                {"inf", format_rational(s.inf)},
                {"sup", format_rational(s.sup)},
                {"radius", format_rational(s.radius)}};
}

Json to_json(const PairReport& r) { return Json{{"verdict", to_string(r.verdict)}, {"tail", to_json(r.stats)}}; }

Json to_json(const HyperOmega& w) {
    Json members = Json::array();
    for (const auto& m : w.members) members.push_back(element_to_json(m));
    return Json{{"kind", to_string(w.kind)},
                {"attracted", w.attracted},
                {"minimal", w.minimal},
                {"eps", format_rational(w.eps)},
                {"horizon", w.horizon},
                {"members", members}};
}

Json to_json(const CompanionCertificate& c) {
    Json j{{"kind", "companion"},
           {"ok", c.ok()},
           {"companion", element_to_json(c.companion)},
           {"tail_sup", format_rational(c.tail_sup)},
           {"asymptotic", c.asymptotic},
           {"recurrence", kind_name(c.recurrence)},
           {"rr_step", c.rr_step}};
    j["periodic_distance"] = c.periodic_distance ? Json(format_rational(*c.periodic_distance)) : Json(nullptr);
    j["failures"] = c.failures;
    return j;
}

Json to_json(const OdometerCertificate& c) {
    return Json{{"kind", "odometer_rr"},
                {"ok", c.ok()},
                {"point", c.point},
                {"depth", c.depth},
                {"period", c.period},
                {"returns", c.returns},
                {"max_distance", format_rational(c.max_distance)},
                {"bound", format_rational(c.bound)},
                {"single_cycle", c.single_cycle},
                {"prime_bounds", c.prime_bounds},
                {"failures", c.failures}};
}

Json to_json(const OmegaChaosCertificate& c) {
    auto approaches = [](const std::vector<RootApproach>& list) {
        Json out = Json::array();
        for (const auto& r : list)
            out.push_back({{"n", r.n},
                           {"steps", r.steps},
                           {"upper", format_rational(r.upper)},
                           {"bound", format_rational(r.bound)},
                           {"holds", r.holds}});
        return out;
    };
    auto iterate = [](const WitnessIterate& w) {
        return Json{{"n", w.n},
                    {"steps", w.steps},
                    {"upper", format_rational(w.upper)},
                    {"target_bound", format_rational(w.target_bound)}};
    };
    Json witnesses = Json::array();
    for (const auto& a : c.alphas) {
        Json its = Json::array();
        for (const auto& w : a.witnesses) its.push_back(iterate(w));
        witnesses.push_back({{"alpha", format_rational(a.alpha)},
                             {"band", a.band},
                             {"ok", a.ok()},
                             {"best", a.best ? iterate(*a.best) : Json(nullptr)},
                             {"iterates", its},
                             {"separation", format_rational(a.separation)},
                             {"periodicity_gap", format_rational(a.periodicity_gap)},
                             {"failures", a.failures}});
    }
    return Json{{"kind", "omega_chaos"},
                {"ok", c.ok()},
                {"lambda", format_rational(c.lambda)},
                {"lambda_prime", format_rational(c.lambda_prime)},
                {"rays", c.rays},
                {"horizon", c.horizon},
                {"slack", format_rational(c.slack)},
                {"root_lambda", approaches(c.root_lambda)},
                {"root_lambda_prime", approaches(c.root_lambda_prime)},
                {"witnesses", witnesses},
                {"failures", c.failures}};
}

Json to_json(const EntropyCertificate& c) {
    return Json{{"kind", "entropy"},
                {"ok", c.ok()},
                {"k", c.k},
                {"n", c.n},
                {"count", c.count},
                {"pairs_checked", c.pairs_checked},
                {"exhaustive", c.exhaustive},
                {"min_separation", format_rational(c.min_separation)},
                {"window_separation", format_rational(c.window_separation)},
                {"log_growth", c.log_growth},
                {"failures", c.failures}};
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") == std::string::npos) {
            out << f;
            continue;
        }
        out << '"';
        for (char c : f) out << (c == '"' ? "\"\"" : std::string(1, c));
        out << '"';
    }
    out << '\n';
}

namespace {

std::string fixed(double v) {
    std::ostringstream s;
    s << std::setprecision(12) << v;
    return s.str();
}

}  // namespace

void write_curve_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
    write_csv_row(out, {"n", "eps", "count", "rate"});
    for (const auto& r : rows)
        write_csv_row(out, {std::to_string(r.n), format_rational(r.eps), std::to_string(r.count), fixed(r.rate)});
}

Json to_json(const std::vector<CurveRow>& rows) {
    Json table = Json::array();
    for (const auto& r : rows)
        table.push_back({{"n", r.n}, {"eps", format_rational(r.eps)}, {"count", r.count}, {"rate", r.rate}});
    return Json{{"kind", "entropy_curve"}, {"rows", table}};
}

}  // namespace dendro
