// dendrodyn: batch front end over the library. Every command writes one
// report (JSON by default) and exits 0 iff all requested certificates pass,
// 1 when one fails and 2 on bad input.

#include "dendrodyn/corpus.hpp"
#include "dendrodyn/errors.hpp"
#include "dendrodyn/io.hpp"
#include "dendrodyn/parallel.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace dendro;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string tree;
    std::string map;
    std::string eps = "1/1000000";
    std::size_t horizon = 10000;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
};

Rational positive(const std::string& text, const char* what) {
    Rational r = parse_rational(text);
    if (r <= 0) throw InvalidArgumentError(std::string(what) + " must be positive");
    return r;
}

std::vector<Rational> rational_list(const std::string& text, const char* what) {
    std::vector<Rational> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(positive(item, what));
    if (out.empty()) throw InvalidArgumentError(std::string(what) + " is empty");
    return out;
}

std::vector<unsigned> unsigned_list(const std::string& text) {
    std::vector<unsigned> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        unsigned long v = std::stoul(item, &used);
        if (used != item.size()) throw InvalidArgumentError("not an integer: " + item);
        out.push_back(static_cast<unsigned>(v));
    }
    return out;
}

PLSelfMap load_map(const std::string& path) {
    if (path.empty()) throw InvalidArgumentError("--map is required");
    return map_from_json(load_json_file(path), fs::path(path).parent_path());
}

TreeHandle load_tree(const std::string& path) {
    if (path.empty()) throw InvalidArgumentError("--tree is required");
    return tree_from_json(load_json_file(path));
}

std::vector<TreePoint> parse_points(const TreeHandle& host, const std::vector<std::string>& texts) {
    std::vector<TreePoint> out;
    for (const auto& t : texts) out.push_back(point_from_json(host, parse_json(t, "--point")));
    return out;
}

std::string label(const TreePoint& p) { return p.is_vertex() ? p.tree().vertex_name(p.vertex_id()) : p.describe(); }

Json config_of(const Common& c) {
    return Json{{"eps", c.eps}, {"horizon", c.horizon}, {"seed", c.seed}};
}

// Header from the first row's keys; nested values are written as JSON.
void write_rows_csv(std::ostream& out, const Json& rows) {
    if (rows.empty()) return;
    std::vector<std::string> header;
    for (const auto& [k, v] : rows.front().items()) header.push_back(k);
    write_csv_row(out, header);
    for (const auto& row : rows) {
        std::vector<std::string> fields;
        for (const auto& k : header) {
            const Json& v = row.at(k);
            fields.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
        write_csv_row(out, fields);
    }
}

void emit(const Common& c, const Json& report) {
    std::ofstream file;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) throw InvalidArgumentError("cannot write " + c.out);
    }
    std::ostream& out = c.out.empty() ? std::cout : file;
    if (c.format == "json") {
        out << report.dump(2) << '\n';
    } else if (c.format == "text") {
        out << report.at("summary").get<std::string>() << '\n';
    } else {
        if (!report.contains("rows")) throw InvalidArgumentError("csv output is not available for this command");
        write_rows_csv(out, report["rows"]);
    }
}

Json envelope(const std::string& command, const Common& c, bool ok, const std::string& summary) {
    return Json{{"command", command}, {"ok", ok}, {"summary", summary}, {"config", config_of(c)}};
}

// geom

struct GeomArgs {
    std::vector<std::string> points;
};

Json run_geom(const Common& c, const GeomArgs& a) {
    TreeHandle t = load_tree(c.tree);
    std::vector<TreePoint> pts = parse_points(t, a.points);
    if (pts.empty())
        for (std::size_t v = 0; v < t->vertex_count(); ++v) pts.push_back(TreePoint::at_vertex(t, v));
    Json rows = Json::array();
    Rational diameter = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Arc path = arc(pts[i], pts[j]);
            Json segs = Json::array();
            for (const auto& s : path.segments)
                segs.push_back({{"edge", s.edge}, {"from", format_rational(s.from)}, {"to", format_rational(s.to)}});
            diameter = max_of(diameter, path.length);
            rows.push_back({{"a", i}, {"b", j}, {"distance", format_rational(path.length)}, {"arc", segs}});
        }
    SubTree hull = SubTree::hull(pts);
    Json report = envelope("geom", c, true,
                           std::to_string(pts.size()) + " points, diameter " + format_rational(diameter) +
                               ", hull length " + format_rational(hull.total_length()));
    Json plist = Json::array();
    for (const auto& p : pts) plist.push_back(point_to_json(p));
    report["points"] = plist;
    report["rows"] = rows;
    Json ends = Json::array();
    for (const auto& p : hull.endpoints()) ends.push_back(point_to_json(p));
    report["hull"] = {{"endpoints", ends}, {"length", format_rational(hull.total_length())}};
    return report;
}

// map check

struct MapCheckArgs {
    bool require_monotone = false;
};

Json run_map_check(const Common& c, const MapCheckArgs& a) {
    PLSelfMap f = load_map(c.map);
    MonotonicityVerdict v = is_monotone(f);
    std::string summary = v.monotone ? "monotone" : "non-monotone, witness y=" + label(v.witness->y);
    Json report = envelope("map check", c, v.monotone || !a.require_monotone, summary);
    report["verdict"] = to_json(v);
    report["homeomorphism"] = is_homeomorphism(f.cells());
    return report;
}

// omega

struct SampleArgs {
    std::vector<std::string> points;
    std::size_t samples = 20;
    int denominator = 8;
};

std::vector<TreePoint> samples_for(const TreeHandle& host, const Common& c, const SampleArgs& a) {
    std::vector<TreePoint> pts = parse_points(host, a.points);
    if (pts.empty()) {
        Rng rng(c.seed);
        for (std::size_t i = 0; i < a.samples; ++i) pts.push_back(random_point(rng, host, a.denominator));
    }
    return pts;
}

Json run_omega(const Common& c, const SampleArgs& a) {
    const Rational eps = positive(c.eps, "--eps");
    PLSelfMap f = load_map(c.map);
    std::vector<TreePoint> pts = samples_for(f.host(), c, a);
    std::vector<Json> rows(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        OrbitRecord o = orbit(f, pts[i], c.horizon);
        OmegaSet w = omega_limit(o, eps);
        RecurrenceReport r = classify_recurrence(o, eps);
        rows[i] = {{"sample", point_to_json(pts[i])},
                   {"omega_kind", to_string(w.kind)},
                   {"omega_size", w.points.size()},
                   {"recurrence", to_string(r.cls)},
                   {"omega", to_json(w)},
                   {"report", to_json(r)}};
    });
    bool ok = true;
    Json structure = nullptr;
    const bool monotone = is_monotone(f).monotone;
    if (monotone) {
        StructureReport s = check_recurrence_structure(MonotoneMap::certify(f), pts, eps, c.horizon);
        Json violations = Json::array();
        for (std::size_t i = 0; i < s.samples.size(); ++i)
            for (const auto& msg : s.samples[i].violations) violations.push_back({{"sample", i}, {"violation", msg}});
        structure = {{"periodic", to_json(s.periodic)}, {"violations", violations}};
        ok = s.violation_count == 0;
    }
    std::size_t resolved = 0;
    for (const auto& r : rows)
        if (r["omega_kind"] != "unresolved") ++resolved;
    Json report = envelope("omega", c, ok,
                           std::to_string(pts.size()) + " samples, " + std::to_string(resolved) + " resolved" +
                               (monotone ? ok ? ", structure certified" : ", structure violated" : ""));
    report["monotone"] = monotone;
    report["rows"] = rows;
    report["structure"] = structure;
    return report;
}

// hyper

struct HyperArgs {
    std::string kind = "both";
    std::size_t size = 3;
    std::size_t samples = 20;
    std::size_t pairs = 50;
};

HyperElement random_element(Rng& rng, const TreeHandle& host, bool finite, std::size_t size) {
    std::vector<TreePoint> pts;
    std::size_t n = 1 + rng.below(size);
    for (std::size_t i = 0; i < n; ++i) pts.push_back(random_point(rng, host, 8));
    if (finite) return FiniteSet::of(pts);
    // A subtree of T_n has at most n endpoints.
    return SubTree::hull(pts);
}

Json run_hyper(const Common& c, const HyperArgs& a) {
    const Rational eps = positive(c.eps, "--eps");
    if (a.kind != "finite" && a.kind != "subtree" && a.kind != "both")
        throw InvalidArgumentError("--kind must be finite, subtree or both");
    if (a.size < 1) throw InvalidArgumentError("--size must be at least 1");
    MonotoneMap f = MonotoneMap::certify(load_map(c.map));
    PeriodicSet periodic = periodic_points(f, 64);
    std::vector<bool> kinds;
    if (a.kind != "subtree") kinds.push_back(true);
    if (a.kind != "finite") kinds.push_back(false);

    Rng rng(c.seed);
    std::vector<HyperElement> elements;
    std::vector<std::pair<HyperElement, HyperElement>> pairs;
    for (bool finite : kinds) {
        for (std::size_t i = 0; i < a.samples; ++i) elements.push_back(random_element(rng, f.host(), finite, a.size));
        for (std::size_t i = 0; i < a.pairs; ++i) {
            HyperElement x = random_element(rng, f.host(), finite, a.size);
            pairs.emplace_back(x, random_element(rng, f.host(), finite, a.size));
        }
    }

    std::vector<Json> rows(elements.size());
    std::vector<bool> passed(elements.size());
    parallel_for(elements.size(), [&](std::size_t i) {
        HyperOmega w = hyper_omega(f, elements[i], eps, c.horizon);
        CompanionCertificate cc = asymptotic_companion(f, elements[i], eps, c.horizon, &periodic);
        passed[i] = cc.ok();
        rows[i] = {{"element", element_to_json(elements[i])},
                   {"omega_kind", to_string(w.kind)},
                   {"omega_size", w.members.size()},
                   {"companion_ok", cc.ok()},
                   {"omega", to_json(w)},
                   {"companion", to_json(cc)}};
    });

    std::vector<Json> scan(pairs.size());
    std::vector<bool> li_yorke(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        HyperOrbit x = hyper_orbit(f, pairs[i].first, c.horizon);
        HyperOrbit y = hyper_orbit(f, pairs[i].second, c.horizon);
        TailStats s = hyper_tail_stats(x, y, eps);
        li_yorke[i] = s.inf_below(eps) && !s.sup_below(eps);
        scan[i] = {{"a", element_to_json(pairs[i].first)},
                   {"b", element_to_json(pairs[i].second)},
                   {"proximal", s.inf_below(eps)},
                   {"asymptotic", s.sup_below(eps)},
                   {"tail", to_json(s)}};
    });

    const auto failed = std::count(passed.begin(), passed.end(), false);
    const auto exceptions = std::count(li_yorke.begin(), li_yorke.end(), true);
    Json report = envelope("hyper", c, failed == 0 && exceptions == 0,
                           std::to_string(elements.size() - failed) + "/" + std::to_string(elements.size()) +
                               " companions certified, " + std::to_string(exceptions) + " Li-Yorke exceptions in " +
                               std::to_string(pairs.size()) + " pairs");
    report["config"]["kind"] = a.kind;
    report["config"]["size"] = a.size;
    report["rows"] = rows;
    report["li_yorke_scan"] = scan;
    return report;
}

// odometer

struct OdometerArgs {
    std::string base = "2,2,2,2";
    std::size_t depth = 0;
    std::vector<std::string> points;
    std::size_t samples = 0;
};

Json run_odometer(const Common& c, const OdometerArgs& a) {
    OdometerBase base(unsigned_list(a.base));
    const std::size_t depth = a.depth == 0 ? base.depth() : a.depth;
    if (depth > base.depth()) throw InvalidArgumentError("--depth exceeds the base length");
    std::vector<OdoPoint> pts;
    for (const auto& p : a.points) {
        OdoPoint x = unsigned_list(p);
        validate(base, x);
        pts.push_back(x);
    }
    if (pts.empty()) {
        if (a.samples == 0) {
            pts.push_back(OdoPoint(base.depth(), 0));
        } else {
            Rng rng(c.seed);
            for (std::size_t i = 0; i < a.samples; ++i) {
                OdoPoint x;
                for (unsigned b : base.bounds()) x.push_back(static_cast<unsigned>(rng.below(b)));
                pts.push_back(x);
            }
        }
    }
    std::vector<Json> rows(pts.size() * (depth + 1));
    std::vector<bool> passed(rows.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        OdometerCertificate cert = regular_recurrence_certificate(base, pts[i / (depth + 1)], i % (depth + 1));
        passed[i] = cert.ok();
        rows[i] = to_json(cert);
    });
    const bool ok = std::all_of(passed.begin(), passed.end(), [](bool b) { return b; });
    Json report = envelope("odometer", c, ok,
                           "full-cycle length " + std::to_string(base.cycle_length()) + ", RR certificate " +
                               (ok ? "at every M <= " : "failed for some M <= ") + std::to_string(depth));
    report["base"] = base.bounds();
    report["cycle_length"] = base.cycle_length();
    report["rows"] = rows;
    return report;
}

// star chaos / star entropy

struct ChaosArgs {
    std::string lambda = "1/2";
    std::string lambda_prime = "1";
    std::vector<std::string> alphas;
    std::size_t count = 10;
    unsigned rays = 20;
    std::uint64_t horizon = 4096;
};

Json run_star_chaos(const Common& c, const ChaosArgs& a) {
    const Rational lambda = positive(a.lambda, "--lambda");
    const Rational lambda_prime = positive(a.lambda_prime, "--lambda-prime");
    std::vector<Rational> alphas;
    for (const auto& t : a.alphas) alphas.push_back(positive(t, "--alpha"));
    if (alphas.empty()) alphas = sample_alphas(lambda, lambda_prime, a.count, c.seed);
    OmegaChaosOptions options;
    options.rays = a.rays;
    options.horizon = a.horizon;
    OmegaChaosCertificate cert = omega_chaos_certificate(lambda, lambda_prime, alphas, options);
    std::size_t good = 0;
    Json rows = Json::array();
    for (const auto& r : cert.alphas) {
        good += r.ok();
        rows.push_back({{"alpha", format_rational(r.alpha)},
                        {"band", r.band},
                        {"ok", r.ok()},
                        {"witnesses", r.witnesses.size()},
                        {"separation", format_rational(r.separation)},
                        {"periodicity_gap", format_rational(r.periodicity_gap)}});
    }
    Json report = envelope("star chaos", c, cert.ok(),
                           std::to_string(good) + "/" + std::to_string(cert.alphas.size()) + " alphas certified");
    report["certificate"] = to_json(cert);
    report["rows"] = rows;
    return report;
}

struct StarEntropyArgs {
    unsigned k = 2;
    unsigned n = 3;
    std::uint64_t budget = 100000;
};

Json run_star_entropy(const Common& c, const StarEntropyArgs& a) {
    EntropyCertificate cert = entropy_certificate(a.k, a.n, a.budget);
    Json report = envelope("star entropy", c, cert.ok(),
                           "count " + std::to_string(cert.count) + ", min separation " +
                               format_rational(cert.min_separation));
    report["certificate"] = to_json(cert);
    return report;
}

// entropy

struct EntropyArgs {
    std::string system = "tree";
    std::size_t pool = 200;
    std::size_t n_max = 10;
    std::string eps_list;
};

Json run_entropy(const Common& c, const EntropyArgs& a) {
    std::vector<Rational> eps_values = rational_list(a.eps_list.empty() ? c.eps : a.eps_list, "--eps");
    std::vector<CurveRow> rows;
    if (a.system == "tree") {
        PLSelfMap f = load_map(c.map);
        Rng rng(c.seed);
        std::vector<TreePoint> pool;
        for (std::size_t i = 0; i < a.pool; ++i) pool.push_back(random_point(rng, f.host(), 16));
        rows = entropy_curve(pool, [&](const TreePoint& p) { return f(p); },
                             [](const TreePoint& p, const TreePoint& q) { return distance(p, q); }, a.n_max,
                             eps_values);
    } else if (a.system == "star") {
        rows = entropy_curve(star_pool(c.seed, a.pool), [](const StarPoint& p) { return g_apply(p); },
                             [](const StarPoint& p, const StarPoint& q) { return star_distance(p, q); }, a.n_max,
                             eps_values);
    } else {
        throw InvalidArgumentError("--system must be tree or star");
    }
    double top = 0;
    for (const auto& r : rows) top = std::max(top, r.rate);
    std::ostringstream s;
    s << rows.size() << " rows, max rate " << top;
    Json report = envelope("entropy", c, true, s.str());
    report["config"]["system"] = a.system;
    report["config"]["pool"] = a.pool;
    report["rows"] = to_json(rows)["rows"];
    return report;
}

// corpus

// True when the periodic segments cover every edge completely.
bool periodic_cover(const PeriodicSet& p, const MetricTree& tree) {
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
        std::vector<std::pair<Rational, Rational>> pieces;
        for (const auto& s : p.segments)
            if (s.piece.edge == e) pieces.emplace_back(s.piece.lo, s.piece.hi);
        std::sort(pieces.begin(), pieces.end());
        Rational reached = 0;
        for (const auto& [lo, hi] : pieces) {
            if (lo > reached) return false;
            reached = max_of(reached, hi);
        }
        if (reached < tree.edge(e).length) return false;
    }
    return true;
}


struct CorpusArgs {
    std::size_t count = 5;
    std::size_t vertices = 10;
    std::size_t samples = 20;
    std::string save;
};

Json run_corpus(const Common& c, const CorpusArgs& a) {
    const Rational eps = positive(c.eps, "--eps");
    TreeOptions tree_options;
    tree_options.vertices = a.vertices;
    std::vector<CorpusEntry> corpus = monotone_corpus(c.seed, a.count, tree_options);
    if (!a.save.empty()) fs::create_directories(a.save);

    std::vector<Json> rows(corpus.size());
    std::vector<std::size_t> violations(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t m) {
        const MonotoneMap& f = corpus[m].map;
        Rng rng(corpus[m].seed ^ 0x9e3779b97f4a7c15ULL);
        std::vector<TreePoint> pts;
        for (std::size_t i = 0; i < a.samples; ++i) pts.push_back(random_point(rng, f.host(), 8));
        Json issues = Json::array();

        StructureReport s = check_recurrence_structure(f, pts, eps, c.horizon);
        for (std::size_t i = 0; i < s.samples.size(); ++i)
            for (const auto& msg : s.samples[i].violations) issues.push_back("sample " + std::to_string(i) + ": " + msg);

        if (!is_monotone(iterate(f.map(), 2)).monotone) issues.push_back("f o f is not monotone");

        // Asymptotic rigidity on consecutive sample pairs.
        std::vector<RecurrenceReport> rec;
        for (const auto& x : pts) rec.push_back(classify_recurrence(f, x, eps, c.horizon));
        auto recurrent = [](const RecurrenceReport& r) { return r.cls != RecurrenceClass::NonrecurrentEvidence; };
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (pts[i] == pts[i + 1]) continue;
            const bool rigid_pair = (rec[i].regularly_recurrent() && recurrent(rec[i + 1])) ||
                                    (rec[i + 1].regularly_recurrent() && recurrent(rec[i]));
            if (rigid_pair && pair_type(f, pts[i], pts[i + 1], eps, c.horizon).verdict == PairVerdict::Asymptotic)
                issues.push_back("asymptotic pair of distinct recurrent points at samples " + std::to_string(i));
        }

        // Periodic segments covering the whole tree force a bijection.
        const bool bijective = is_homeomorphism(f.map().cells());
        if (periodic_cover(s.periodic, *f.host()) && !bijective)
            issues.push_back("periodic points are dense but f is not bijective");

        violations[m] = issues.size();
        rows[m] = {{"seed", corpus[m].seed},
                   {"vertices", f.host()->vertex_count()},
                   {"samples", pts.size()},
                   {"periodic_points", s.periodic.points.size()},
                   {"periodic_segments", s.periodic.segments.size()},
                   {"homeomorphism", bijective},
                   {"violations", issues.size()},
                   {"issues", issues}};
        if (!a.save.empty()) {
            std::ofstream out(fs::path(a.save) / ("map_" + std::to_string(m) + ".json"));
            out << map_to_json(f.map()).dump(2) << '\n';
        }
    });
    std::size_t total = 0;
    for (auto v : violations) total += v;
    Json report = envelope("corpus", c, total == 0,
                           std::to_string(corpus.size()) + " maps, " + std::to_string(total) + " violations");
    report["rows"] = rows;
    return report;
}

void add_common(CLI::App* app, Common& c, bool needs_tree, bool needs_map) {
    if (needs_tree) app->add_option("--tree", c.tree, "tree JSON file");
    if (needs_map) app->add_option("--map", c.map, "map JSON file");
    app->add_option("--eps", c.eps, "tolerance p/q")->capture_default_str();
    app->add_option("--horizon", c.horizon, "orbit horizon")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--seed", c.seed, "random seed")->capture_default_str();
    app->add_option("--out", c.out, "output file (default stdout)");
    app->add_option("--format", c.format, "json, csv or text")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv", "text"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact dynamics of monotone maps on metric trees"};
    app.require_subcommand(1);
    Common common;

    GeomArgs geom;
    auto* geom_cmd = app.add_subcommand("geom", "distances, arcs and hull of points on a tree");
    add_common(geom_cmd, common, true, false);
    geom_cmd->add_option("--point", geom.points, "point as JSON, repeatable (default: all vertices)");

    MapCheckArgs check;
    auto* map_cmd = app.add_subcommand("map", "map operations");
    map_cmd->require_subcommand(1);
    auto* check_cmd = map_cmd->add_subcommand("check", "monotonicity verdict with witness");
    add_common(check_cmd, common, false, true);
    check_cmd->add_flag("--require-monotone", check.require_monotone, "exit 1 on a non-monotone map");

    SampleArgs omega;
    auto* omega_cmd = app.add_subcommand("omega", "omega-limit sets and recurrence per sample");
    add_common(omega_cmd, common, false, true);
    omega_cmd->add_option("--point", omega.points, "sample point as JSON, repeatable");
    omega_cmd->add_option("--samples", omega.samples, "random samples when no --point")->capture_default_str();

    HyperArgs hyper;
    auto* hyper_cmd = app.add_subcommand("hyper", "induced-map orbits, companions and Li-Yorke scan");
    add_common(hyper_cmd, common, false, true);
    hyper_cmd->add_option("--kind", hyper.kind, "finite, subtree or both")->capture_default_str();
    hyper_cmd->add_option("--size", hyper.size, "n of F_n / T_n")->capture_default_str();
    hyper_cmd->add_option("--samples", hyper.samples, "elements per kind")->capture_default_str();
    hyper_cmd->add_option("--pairs", hyper.pairs, "Li-Yorke pairs per kind")->capture_default_str();

    OdometerArgs odo;
    auto* odo_cmd = app.add_subcommand("odometer", "regular recurrence certificates");
    add_common(odo_cmd, common, false, false);
    odo_cmd->add_option("--base", odo.base, "digit bounds, comma separated")->capture_default_str();
    odo_cmd->add_option("--depth", odo.depth, "largest M (default: base length)");
    odo_cmd->add_option("--point", odo.points, "digits, comma separated, repeatable");
    odo_cmd->add_option("--samples", odo.samples, "random points when no --point (default: the zero point)");

    auto* star_cmd = app.add_subcommand("star", "the star dendrite example");
    star_cmd->require_subcommand(1);
    ChaosArgs chaos;
    auto* chaos_cmd = star_cmd->add_subcommand("chaos", "omega-chaos certificate");
    add_common(chaos_cmd, common, false, false);
    chaos_cmd->add_option("--lambda", chaos.lambda)->capture_default_str();
    chaos_cmd->add_option("--lambda-prime", chaos.lambda_prime)->capture_default_str();
    chaos_cmd->add_option("--alpha", chaos.alphas, "alpha p/q, repeatable");
    chaos_cmd->add_option("--alphas", chaos.count, "sampled alphas when no --alpha")->capture_default_str();
    chaos_cmd->add_option("--rays", chaos.rays, "truncation rays")->capture_default_str();
    chaos_cmd->add_option("--chaos-horizon", chaos.horizon, "non-periodicity horizon")->capture_default_str();
    StarEntropyArgs star_entropy;
    auto* sent_cmd = star_cmd->add_subcommand("entropy", "separated-family certificate");
    add_common(sent_cmd, common, false, false);
    sent_cmd->add_option("--k", star_entropy.k)->capture_default_str()->check(CLI::PositiveNumber);
    sent_cmd->add_option("--n", star_entropy.n)->capture_default_str()->check(CLI::PositiveNumber);
    sent_cmd->add_option("--budget", star_entropy.budget, "pair budget")->capture_default_str();

    EntropyArgs entropy;
    auto* ent_cmd = app.add_subcommand("entropy", "greedy separated-set growth curves");
    add_common(ent_cmd, common, false, true);
    ent_cmd->add_option("--system", entropy.system, "tree (needs --map) or star")->capture_default_str();
    ent_cmd->add_option("--pool", entropy.pool, "pool size")->capture_default_str();
    ent_cmd->add_option("--n-max", entropy.n_max, "largest n")->capture_default_str();
    ent_cmd->add_option("--eps-list", entropy.eps_list, "comma separated eps values (default: --eps)");

    CorpusArgs corpus;
    auto* corpus_cmd = app.add_subcommand("corpus", "random monotone maps and the invariant suite");
    add_common(corpus_cmd, common, false, false);
    corpus_cmd->add_option("--count", corpus.count)->capture_default_str();
    corpus_cmd->add_option("--vertices", corpus.vertices)->capture_default_str();
    corpus_cmd->add_option("--samples", corpus.samples)->capture_default_str();
    corpus_cmd->add_option("--save", corpus.save, "directory for the generated map files");

    CLI11_PARSE(app, argc, argv);

    try {
        Json report;
        if (*geom_cmd) report = run_geom(common, geom);
        else if (*check_cmd) report = run_map_check(common, check);
        else if (*omega_cmd) report = run_omega(common, omega);
        else if (*hyper_cmd) report = run_hyper(common, hyper);
        else if (*odo_cmd) report = run_odometer(common, odo);
        else if (*chaos_cmd) report = run_star_chaos(common, chaos);
        else if (*sent_cmd) report = run_star_entropy(common, star_entropy);
        else if (*ent_cmd) report = run_entropy(common, entropy);
        else if (*corpus_cmd) report = run_corpus(common, corpus);
        emit(common, report);
        if (!report["ok"].get<bool>()) {
            if (!common.out.empty() || common.format != "json") std::cerr << report["summary"].get<std::string>() << '\n';
            return 1;
        }
        return 0;
    } catch (const NotMonotoneError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DendroError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
