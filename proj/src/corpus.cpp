#include "dendrodyn/corpus.hpp"

#include "dendrodyn/errors.hpp"

#include <algorithm>
#include <queue>
#include <string>

namespace dendro {

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::size_t Rng::below(std::size_t n) {
    if (n == 0) throw InvalidArgumentError("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

long Rng::between(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::size_t>(hi - lo + 1))); }

bool Rng::chance(unsigned numerator, unsigned denominator) { return below(denominator) < numerator; }

TreeHandle random_tree(Rng& rng, const TreeOptions& options) {
    if (options.vertices < 1) throw InvalidArgumentError("random tree needs at least one vertex");
    std::vector<std::string> names;
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < options.vertices; ++i) names.push_back("v" + std::to_string(i));
    for (std::size_t i = 1; i < options.vertices; ++i) {
        std::size_t parent = options.path ? i - 1 : rng.below(i);
        edges.push_back(EdgeSpec{names[parent], names[i], Rational(rng.between(1, options.max_edge_length))});
    }
    return MetricTree::build(std::move(names), std::move(edges));
}

TreePoint random_point(Rng& rng, const TreeHandle& tree, int denominator) {
    if (tree->edge_count() == 0 || rng.chance(1, 4)) return TreePoint::at_vertex(tree, rng.below(tree->vertex_count()));
    std::size_t e = rng.below(tree->edge_count());
    const Rational& len = tree->edge(e).length;
    mpz_class steps = len.get_num() * denominator / len.get_den();
    long k = rng.between(0, steps.get_si());
    Rational offset = frac(k, denominator);
    return TreePoint::on_edge(tree, e, offset > len ? len : offset);
}

namespace {

// Continue a non-backtracking walk from `from` leaving in direction `dir`.
TreePoint walk(Rng& rng, const TreePoint& from, Direction dir, const MapOptions& options) {
    const TreeHandle& host = from.host();
    const MetricTree& tree = *host;
    std::size_t edge = dir.edge;
    bool forward = dir.forward;
    const unsigned steps = static_cast<unsigned>(rng.between(1, options.max_walk_edges));
    for (unsigned s = 0;; ++s) {
        const Edge& e = tree.edge(edge);
        const Rational start = from.is_vertex() || s > 0 ? (forward ? Rational(0) : e.length) : from.offset();
        // Possibly stop strictly inside this edge.
        if (rng.chance(1, 3)) {
            const int den = options.offset_denominator;
            std::vector<Rational> stops;
            mpz_class n = e.length.get_num() * den / e.length.get_den();
            for (long k = 1; k < n.get_si(); ++k) {
                Rational o = frac(k, den);
                if (forward ? o > start : o < start) stops.push_back(o);
            }
            if (!stops.empty()) return TreePoint::on_edge(host, edge, stops[rng.below(stops.size())]);
        }
        const std::size_t reached = forward ? e.v : e.u;
        std::vector<std::size_t> onward;
        for (std::size_t next : tree.incident_edges(reached))
            if (next != edge) onward.push_back(next);
        if (s + 1 >= steps || onward.empty()) return TreePoint::at_vertex(host, reached);
        edge = onward[rng.below(onward.size())];
        forward = tree.edge(edge).u == reached;
    }
}

std::vector<Direction> directions_at(const TreePoint& p) {
    if (!p.is_vertex()) return {Direction{p.edge_id(), true}, Direction{p.edge_id(), false}};
    std::vector<Direction> out;
    for (std::size_t e : p.tree().incident_edges(p.vertex_id()))
        out.push_back(Direction{e, p.tree().edge(e).u == p.vertex_id()});
    return out;
}

PLSelfMap candidate(Rng& rng, const TreeHandle& host, const MapOptions& options, unsigned collapse_percent) {
    const MetricTree& tree = *host;
    const std::size_t n = tree.vertex_count();
    std::vector<std::optional<TreePoint>> image(n);
    const std::size_t root = rng.below(n);
    image[root] = random_point(rng, host, options.offset_denominator);
    std::queue<std::size_t> queue;
    queue.push(root);
    std::vector<bool> seen(n, false);
    seen[root] = true;
    while (!queue.empty()) {
        const std::size_t p = queue.front();
        queue.pop();
        for (std::size_t e : tree.incident_edges(p)) {
            const std::size_t w = tree.other_end(e, p);
            if (seen[w]) continue;
            seen[w] = true;
            queue.push(w);
            const TreePoint& base = *image[p];
            std::vector<Direction> used;
            for (std::size_t e2 : tree.incident_edges(p)) {
                const auto& other = image[tree.other_end(e2, p)];
                if (other && *other != base) used.push_back(direction(base, *other));
            }
            std::vector<Direction> free;
            for (const auto& d : directions_at(base))
                if (std::find(used.begin(), used.end(), d) == used.end()) free.push_back(d);
            if (free.empty() || rng.chance(collapse_percent, 100)) {
                image[w] = base;
            } else {
                image[w] = walk(rng, base, free[rng.below(free.size())], options);
            }
        }
    }
    std::vector<TreePoint> images;
    images.reserve(n);
    for (auto& p : image) images.push_back(std::move(*p));
    return PLSelfMap(host, std::move(images));
}

}  // namespace

MonotoneMap random_monotone_map(Rng& rng, const TreeHandle& tree, const MapOptions& options) {
    for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
        // Raise the collapse rate slowly so dense trees still yield maps.
        unsigned collapse = std::min<unsigned>(95, options.collapse_percent + static_cast<unsigned>(attempt / 20));
        PLSelfMap f = candidate(rng, tree, options, collapse);
        if (is_monotone(f).monotone) return MonotoneMap::certify(std::move(f));
    }
    throw ResourceError("no monotone map found within " + std::to_string(options.max_attempts) + " attempts");
}

std::vector<CorpusEntry> monotone_corpus(std::uint64_t seed, std::size_t count, const TreeOptions& tree_options,
                                         const MapOptions& map_options) {
    std::vector<CorpusEntry> corpus;
    corpus.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(seed + i);
        TreeHandle tree = random_tree(rng, tree_options);
        corpus.push_back(CorpusEntry{seed + i, random_monotone_map(rng, tree, map_options)});
    }
    return corpus;
}

}  // namespace dendro
