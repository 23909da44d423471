#pragma once

#include "dendrodyn/geometry.hpp"
#include "dendrodyn/pl_map.hpp"

#include <random>
#include <string>
#include <vector>

namespace dendro::testing {

inline Rational R(const char* text) { return parse_rational(text); }

// Centre c with unit edges to leaves a, b, d. Edge ids: 0 = (c,a), 1 = (c,b), 2 = (c,d).
inline TreeHandle y_tree() {
    return MetricTree::build({"c", "a", "b", "d"},
                             {{"c", "a", Rational(1)}, {"c", "b", Rational(1)}, {"c", "d", Rational(1)}});
}

// [0, 1] as a single edge from "0" to "1".
inline TreeHandle unit_interval() {
    std::vector<Rational> lengths{Rational(1)};
    return MetricTree::path(lengths);
}

inline TreePoint vertex(const TreeHandle& t, const char* name) {
    return TreePoint::at_vertex(t, t->vertex_index(name));
}

inline TreePoint at(const TreeHandle& t, std::size_t edge, const char* offset) {
    return TreePoint::on_edge(t, edge, R(offset));
}

// Point at coordinate s of an interval tree built by unit_interval().
inline TreePoint on_interval(const TreeHandle& t, const Rational& s) { return TreePoint::on_edge(t, 0, s); }

// Affine interval self-map sending 0 to a and 1 to b.
inline PLSelfMap interval_map(const TreeHandle& t, const char* a, const char* b) {
    return PLSelfMap(t, {on_interval(t, R(a)), on_interval(t, R(b))});
}

// Random tree with integer edge lengths in [1, max_len] (test-side generator,
// independent of the library corpus).
inline TreeHandle random_tree(std::mt19937_64& rng, std::size_t n, int max_len = 3) {
    std::vector<std::string> names;
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t parent = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        int len = std::uniform_int_distribution<int>(1, max_len)(rng);
        edges.push_back(EdgeSpec{names[parent], names[i], Rational(len)});
    }
    return MetricTree::build(names, edges);
}

// Random point with offsets on a 1/denominator grid.
inline TreePoint random_point(std::mt19937_64& rng, const TreeHandle& t, int denominator = 8) {
    std::size_t e = std::uniform_int_distribution<std::size_t>(0, t->edge_count() - 1)(rng);
    const Rational& len = t->edge(e).length;
    mpz_class steps = len.get_num() * denominator / len.get_den();
    long k = std::uniform_int_distribution<long>(0, steps.get_si())(rng);
    Rational offset = frac(k, denominator);
    return TreePoint::on_edge(t, e, offset > len ? len : offset);
}

}  // namespace dendro::testing
