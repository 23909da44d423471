#pragma once

#include "dendrodyn/rational.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dendro {

class MetricTree;
using TreeHandle = std::shared_ptr<const MetricTree>;

struct EdgeSpec {
    std::string u;
    std::string v;
    Rational length;
};

// Edge offsets are measured from `u` towards `v`.
struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    Rational length;
};

// A finite tree with positive rational edge lengths and the geodesic metric.
// Instances are immutable and always handled through a TreeHandle so that
// points can refer back to their host.
class MetricTree {
public:
    // Throws InvalidArgumentError unless the edges form a spanning tree with
    // strictly positive lengths over distinct vertex names.
    static TreeHandle build(std::vector<std::string> vertices, std::vector<EdgeSpec> edges);

    // Path graph with vertices "0", "1", ..., "n" and the given edge lengths.
    static TreeHandle path(std::span<const Rational> lengths);

    std::size_t vertex_count() const { return names_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::string& vertex_name(std::size_t v) const { return names_.at(v); }
    std::optional<std::size_t> find_vertex(std::string_view name) const;
    std::size_t vertex_index(std::string_view name) const;

    const Edge& edge(std::size_t e) const { return edges_.at(e); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::size_t>& incident_edges(std::size_t v) const { return incident_.at(v); }
    std::size_t degree(std::size_t v) const { return incident_.at(v).size(); }
    std::size_t other_end(std::size_t e, std::size_t v) const;

    Rational vertex_distance(std::size_t a, std::size_t b) const;

    // Vertices visited walking from a to b, both included.
    std::vector<std::size_t> vertex_path(std::size_t a, std::size_t b) const;

    // Edge leaving `from` on the way to `to` (from != to).
    std::size_t first_edge_towards(std::size_t from, std::size_t to) const;

    std::size_t edge_between(std::size_t a, std::size_t b) const;

    Rational total_length() const;

private:
    MetricTree() = default;
    void index();
    std::size_t lca(std::size_t a, std::size_t b) const;

    std::vector<std::string> names_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> incident_;
    // Rooted at vertex 0.
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> parent_edge_;
    std::vector<std::size_t> level_;
    std::vector<Rational> depth_;
    std::vector<Rational> distance_cache_;  // dense V*V table for small trees
};

// A location on a tree: either a vertex or a point strictly inside an edge.
// Offsets equal to 0 or the edge length are normalised to the vertex form, so
// structural equality is point equality.
class TreePoint {
public:
    static TreePoint at_vertex(TreeHandle host, std::size_t v);
    static TreePoint on_edge(TreeHandle host, std::size_t e, Rational offset);

    const TreeHandle& host() const { return host_; }
    const MetricTree& tree() const { return *host_; }

    bool is_vertex() const { return vertex_ != npos; }
    std::size_t vertex_id() const { return vertex_; }
    std::size_t edge_id() const { return edge_; }
    const Rational& offset() const { return offset_; }

    friend bool operator==(const TreePoint& a, const TreePoint& b);
    friend bool operator!=(const TreePoint& a, const TreePoint& b) { return !(a == b); }
    // Vertices first (by id), then edge points by (edge id, offset).
    friend bool operator<(const TreePoint& a, const TreePoint& b);

    std::string describe() const;

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    TreeHandle host_;
    std::size_t vertex_ = npos;
    std::size_t edge_ = npos;
    Rational offset_;
};

void require_same_host(const TreePoint& a, const TreePoint& b);
void require_host(const TreePoint& p, const TreeHandle& host);

}  // namespace dendro
