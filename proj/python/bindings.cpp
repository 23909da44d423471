// Thin JSON-in / JSON-out bindings; the Python package converts to and from
// native objects.

#include "dendrodyn/io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace dendro;

namespace {

Json parse(const std::string& text) { return parse_json(text, "<python>"); }

std::string dump(const Json& j) { return j.dump(); }

PLSelfMap map_of(const std::string& text) { return map_from_json(parse(text)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact dynamics of monotone maps on metric trees";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvalidArgumentError>(m, "InvalidArgumentError", PyExc_ValueError);
    py::register_exception<HostMismatchError>(m, "HostMismatchError", PyExc_ValueError);
    py::register_exception<NotMonotoneError>(m, "NotMonotoneError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);

    m.def("normalize_tree", [](const std::string& tree) { return dump(tree_to_json(*tree_from_json(parse(tree)))); });

    m.def("distance", [](const std::string& tree, const std::string& p, const std::string& q) {
        TreeHandle t = tree_from_json(parse(tree));
        return format_rational(distance(point_from_json(t, parse(p)), point_from_json(t, parse(q))));
    });

    m.def("hull", [](const std::string& tree, const std::string& points) {
        TreeHandle t = tree_from_json(parse(tree));
        std::vector<TreePoint> pts;
        for (const auto& p : parse(points)) pts.push_back(point_from_json(t, p));
        return dump(element_to_json(SubTree::hull(pts)));
    });

    m.def("hausdorff", [](const std::string& tree, const std::string& a, const std::string& b) {
        TreeHandle t = tree_from_json(parse(tree));
        return format_rational(hausdorff(element_from_json(t, parse(a)), element_from_json(t, parse(b))));
    });

    m.def("evaluate", [](const std::string& map, const std::string& p) {
        PLSelfMap f = map_of(map);
        return dump(point_to_json(f(point_from_json(f.host(), parse(p)))));
    });

    m.def("is_monotone", [](const std::string& map) { return dump(to_json(is_monotone(map_of(map)))); });

    m.def(
        "omega_limit",
        [](const std::string& map, const std::string& p, const std::string& eps, std::size_t horizon) {
            PLSelfMap f = map_of(map);
            return dump(to_json(omega_limit(f, point_from_json(f.host(), parse(p)), parse_rational(eps), horizon)));
        },
        py::arg("map"), py::arg("point"), py::arg("eps"), py::arg("horizon"));

    m.def(
        "classify_recurrence",
        [](const std::string& map, const std::string& p, const std::string& eps, std::size_t horizon) {
            PLSelfMap f = map_of(map);
            return dump(
                to_json(classify_recurrence(f, point_from_json(f.host(), parse(p)), parse_rational(eps), horizon)));
        },
        py::arg("map"), py::arg("point"), py::arg("eps"), py::arg("horizon"));

    m.def(
        "periodic_points",
        [](const std::string& map, std::size_t max_period) {
            return dump(to_json(periodic_points(map_of(map), max_period)));
        },
        py::arg("map"), py::arg("max_period"));

    m.def(
        "asymptotic_companion",
        [](const std::string& map, const std::string& element, const std::string& eps, std::size_t horizon) {
            MonotoneMap f = MonotoneMap::certify(map_of(map));
            return dump(
                to_json(asymptotic_companion(f, element_from_json(f.host(), parse(element)), parse_rational(eps), horizon)));
        },
        py::arg("map"), py::arg("element"), py::arg("eps"), py::arg("horizon"));

    m.def(
        "odometer_certificate",
        [](const std::vector<unsigned>& base, const std::vector<unsigned>& point, std::size_t depth) {
            OdometerBase b(base);
            validate(b, point);
            return dump(to_json(regular_recurrence_certificate(b, point, depth)));
        },
        py::arg("base"), py::arg("point"), py::arg("depth"));

    m.def(
        "star_entropy_certificate",
        [](unsigned k, unsigned n, std::uint64_t budget) { return dump(to_json(entropy_certificate(k, n, budget))); },
        py::arg("k"), py::arg("n"), py::arg("pair_budget"));

    m.def(
        "omega_chaos_certificate",
        [](const std::string& lambda, const std::string& lambda_prime, const std::vector<std::string>& alphas,
           unsigned rays, std::uint64_t horizon) {
            std::vector<Rational> as;
            for (const auto& a : alphas) as.push_back(parse_rational(a));
            OmegaChaosOptions options;
            options.rays = rays;
            options.horizon = horizon;
            return dump(to_json(
                omega_chaos_certificate(parse_rational(lambda), parse_rational(lambda_prime), as, options)));
        },
        py::arg("lambda_"), py::arg("lambda_prime"), py::arg("alphas"), py::arg("rays"), py::arg("horizon"));

    m.def(
        "star_entropy_curve",
        [](std::uint64_t seed, std::size_t pool, std::size_t n_max, const std::vector<std::string>& eps) {
            std::vector<Rational> values;
            for (const auto& e : eps) values.push_back(parse_rational(e));
            auto rows = entropy_curve(star_pool(seed, pool), [](const StarPoint& p) { return g_apply(p); },
                                      [](const StarPoint& p, const StarPoint& q) { return star_distance(p, q); },
                                      n_max, values);
            return dump(to_json(rows));
        },
        py::arg("seed"), py::arg("pool"), py::arg("n_max"), py::arg("eps"));
}
