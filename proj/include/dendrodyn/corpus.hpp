#pragma once

#include "dendrodyn/pl_map.hpp"

#include <cstdint>
#include <vector>

namespace dendro {

// splitmix64; used instead of <random> engines + distributions so corpora are
// identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    // Uniform in [0, n), n > 0.
    std::size_t below(std::size_t n);
    // Uniform in [lo, hi].
    long between(long lo, long hi);
    bool chance(unsigned numerator, unsigned denominator);

private:
    std::uint64_t state_;
};

struct TreeOptions {
    std::size_t vertices = 10;
    int max_edge_length = 3;
    bool path = false;  // path graph instead of a random recursive tree
};

TreeHandle random_tree(Rng& rng, const TreeOptions& options = {});

// Vertex or a point on the 1/denominator grid of a random edge.
TreePoint random_point(Rng& rng, const TreeHandle& tree, int denominator = 4);

struct MapOptions {
    int offset_denominator = 2;    // grid for non-vertex vertex images
    unsigned collapse_percent = 30;
    unsigned max_walk_edges = 3;
    std::size_t max_attempts = 2000;
};

// Random monotone map: vertices are visited breadth-first from a random root,
// each one sent either onto its parent's image or along a fresh direction
// from it; candidates are rejection-sampled with is_monotone.
MonotoneMap random_monotone_map(Rng& rng, const TreeHandle& tree, const MapOptions& options = {});

struct CorpusEntry {
    std::uint64_t seed = 0;
    MonotoneMap map;
};

// `count` maps on fresh random trees; entry i is generated from seed + i.
std::vector<CorpusEntry> monotone_corpus(std::uint64_t seed, std::size_t count, const TreeOptions& tree_options = {},
                                         const MapOptions& map_options = {});

}  // namespace dendro
