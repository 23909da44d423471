#include "dendrodyn/metric_tree.hpp"

#include "dendrodyn/errors.hpp"

#include <algorithm>
#include <queue>
#include <unordered_map>

namespace dendro {

namespace {
constexpr std::size_t kDenseCacheLimit = 256;
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
}  // namespace

TreeHandle MetricTree::build(std::vector<std::string> vertices, std::vector<EdgeSpec> edges) {
    if (vertices.empty()) throw InvalidArgumentError("tree needs at least one vertex");
    if (edges.size() + 1 != vertices.size())
        throw InvalidArgumentError("tree must have exactly vertex_count - 1 edges (got " +
                                   std::to_string(edges.size()) + " edges for " +
                                   std::to_string(vertices.size()) + " vertices)");
    std::unordered_map<std::string, std::size_t> ids;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (!ids.emplace(vertices[i], i).second)
            throw InvalidArgumentError("duplicate vertex name '" + vertices[i] + "'");

    std::shared_ptr<MetricTree> tree(new MetricTree());
    tree->names_ = std::move(vertices);
    tree->incident_.resize(tree->names_.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        auto& spec = edges[e];
        auto u = ids.find(spec.u);
        auto v = ids.find(spec.v);
        if (u == ids.end() || v == ids.end())
            throw InvalidArgumentError("edge " + std::to_string(e) + " references an unknown vertex");
        if (u->second == v->second) throw InvalidArgumentError("edge " + std::to_string(e) + " is a loop");
        if (spec.length <= 0)
            throw InvalidArgumentError("edge " + std::to_string(e) + " has non-positive length");
        tree->edges_.push_back(Edge{u->second, v->second, spec.length});
        tree->incident_[u->second].push_back(e);
        tree->incident_[v->second].push_back(e);
    }
    tree->index();
    return tree;
}

TreeHandle MetricTree::path(std::span<const Rational> lengths) {
    std::vector<std::string> names;
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i <= lengths.size(); ++i) names.push_back(std::to_string(i));
    for (std::size_t i = 0; i < lengths.size(); ++i)
        edges.push_back(EdgeSpec{names[i], names[i + 1], lengths[i]});
    return build(std::move(names), std::move(edges));
}

void MetricTree::index() {
    const std::size_t n = names_.size();
    parent_.assign(n, kNone);
    parent_edge_.assign(n, kNone);
    level_.assign(n, 0);
    depth_.assign(n, Rational(0));
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> queue;
    queue.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop();
        for (std::size_t e : incident_[v]) {
            std::size_t w = other_end(e, v);
            if (seen[w]) continue;
            seen[w] = true;
            ++reached;
            parent_[w] = v;
            parent_edge_[w] = e;
            level_[w] = level_[v] + 1;
            depth_[w] = depth_[v] + edges_[e].length;
            queue.push(w);
        }
    }
    if (reached != n) throw InvalidArgumentError("tree is not connected");

    if (n <= kDenseCacheLimit) {
        distance_cache_.resize(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                std::size_t c = lca(a, b);
                Rational d = depth_[a] + depth_[b] - 2 * depth_[c];
                distance_cache_[a * n + b] = d;
                distance_cache_[b * n + a] = d;
            }
    }
}

std::optional<std::size_t> MetricTree::find_vertex(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

std::size_t MetricTree::vertex_index(std::string_view name) const {
    if (auto v = find_vertex(name)) return *v;
    throw InvalidArgumentError("unknown vertex '" + std::string(name) + "'");
}

std::size_t MetricTree::other_end(std::size_t e, std::size_t v) const {
    const Edge& edge = edges_.at(e);
    return edge.u == v ? edge.v : edge.u;
}

std::size_t MetricTree::lca(std::size_t a, std::size_t b) const {
    while (level_[a] > level_[b]) a = parent_[a];
    while (level_[b] > level_[a]) b = parent_[b];
    while (a != b) {
        a = parent_[a];
        b = parent_[b];
    }
    return a;
}

Rational MetricTree::vertex_distance(std::size_t a, std::size_t b) const {
    if (!distance_cache_.empty()) return distance_cache_[a * names_.size() + b];
    std::size_t c = lca(a, b);
    return depth_[a] + depth_[b] - 2 * depth_[c];
}

std::vector<std::size_t> MetricTree::vertex_path(std::size_t a, std::size_t b) const {
    std::size_t c = lca(a, b);
    std::vector<std::size_t> up;
    for (std::size_t x = a; x != c; x = parent_[x]) up.push_back(x);
    up.push_back(c);
    std::vector<std::size_t> down;
    for (std::size_t x = b; x != c; x = parent_[x]) down.push_back(x);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

std::size_t MetricTree::first_edge_towards(std::size_t from, std::size_t to) const {
    // `to` below `from` when `from` is an ancestor; otherwise leave via the parent.
    std::size_t x = to;
    while (level_[x] > level_[from] + 1) x = parent_[x];
    if (level_[x] == level_[from] + 1 && parent_[x] == from) return parent_edge_[x];
    return parent_edge_[from];
}

std::size_t MetricTree::edge_between(std::size_t a, std::size_t b) const {
    for (std::size_t e : incident_.at(a))
        if (other_end(e, a) == b) return e;
    throw InvalidArgumentError("vertices are not adjacent");
}

Rational MetricTree::total_length() const {
    Rational total = 0;
    for (const auto& e : edges_) total += e.length;
    return total;
}

TreePoint TreePoint::at_vertex(TreeHandle host, std::size_t v) {
    if (!host || v >= host->vertex_count()) throw InvalidArgumentError("vertex id out of range");
    TreePoint p;
    p.host_ = std::move(host);
    p.vertex_ = v;
    p.offset_ = 0;
    return p;
}

TreePoint TreePoint::on_edge(TreeHandle host, std::size_t e, Rational offset) {
    if (!host || e >= host->edge_count()) throw InvalidArgumentError("edge id out of range");
    const Edge& edge = host->edge(e);
    if (offset < 0 || offset > edge.length)
        throw InvalidArgumentError("offset " + format_rational(offset) + " outside edge " + std::to_string(e));
    if (offset == 0) return at_vertex(std::move(host), edge.u);
    if (offset == edge.length) return at_vertex(std::move(host), edge.v);
    TreePoint p;
    p.host_ = std::move(host);
    p.edge_ = e;
    p.offset_ = std::move(offset);
    return p;
}

bool operator==(const TreePoint& a, const TreePoint& b) {
    return a.host_ == b.host_ && a.vertex_ == b.vertex_ && a.edge_ == b.edge_ && a.offset_ == b.offset_;
}

bool operator<(const TreePoint& a, const TreePoint& b) {
    if (a.host_ != b.host_) return std::less<>{}(a.host_.get(), b.host_.get());
    if (a.is_vertex() != b.is_vertex()) return a.is_vertex();
    if (a.is_vertex()) return a.vertex_ < b.vertex_;
    if (a.edge_ != b.edge_) return a.edge_ < b.edge_;
    return a.offset_ < b.offset_;
}

std::string TreePoint::describe() const {
    if (is_vertex()) return "vertex " + host_->vertex_name(vertex_);
    return "edge " + std::to_string(edge_) + " @ " + format_rational(offset_);
}

void require_same_host(const TreePoint& a, const TreePoint& b) {
    if (a.host() != b.host()) throw HostMismatchError();
}

void require_host(const TreePoint& p, const TreeHandle& host) {
    if (p.host() != host) throw HostMismatchError();
}

}  // namespace dendro
