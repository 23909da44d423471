#include "dendrodyn/geometry.hpp"

#include "dendrodyn/errors.hpp"

#include <algorithm>
#include <map>

namespace dendro {

namespace {

struct Anchor {
    std::size_t vertex;
    Rational cost;
};

// Ways to leave a point towards the vertex set, with the length spent.
std::vector<Anchor> anchors(const TreePoint& p) {
    if (p.is_vertex()) return {Anchor{p.vertex_id(), Rational(0)}};
    const Edge& e = p.tree().edge(p.edge_id());
    return {Anchor{e.u, p.offset()}, Anchor{e.v, e.length - p.offset()}};
}

bool same_edge_interior(const TreePoint& p, const TreePoint& q) {
    return !p.is_vertex() && !q.is_vertex() && p.edge_id() == q.edge_id();
}

Rational end_offset(const Edge& e, std::size_t vertex) { return vertex == e.u ? Rational(0) : e.length; }

}  // namespace

Rational distance(const TreePoint& p, const TreePoint& q) {
    require_same_host(p, q);
    const MetricTree& tree = p.tree();
    if (p.is_vertex() && q.is_vertex()) return tree.vertex_distance(p.vertex_id(), q.vertex_id());
    if (same_edge_interior(p, q)) return abs_diff(p.offset(), q.offset());
    Rational best;
    bool first = true;
    for (const auto& a : anchors(p))
        for (const auto& b : anchors(q)) {
            Rational d = a.cost + tree.vertex_distance(a.vertex, b.vertex) + b.cost;
            if (first || d < best) {
                best = d;
                first = false;
            }
        }
    return best;
}

Arc arc(const TreePoint& p, const TreePoint& q) {
    require_same_host(p, q);
    Arc result{p, q, {}, Rational(0)};
    if (p == q) return result;
    const MetricTree& tree = p.tree();
    if (same_edge_interior(p, q)) {
        result.segments.push_back(ArcSegment{p.edge_id(), p.offset(), q.offset()});
        result.length = abs_diff(p.offset(), q.offset());
        return result;
    }
    const auto from = anchors(p);
    const auto to = anchors(q);
    std::size_t best_a = 0;
    std::size_t best_b = 0;
    Rational best;
    bool first = true;
    for (std::size_t i = 0; i < from.size(); ++i)
        for (std::size_t j = 0; j < to.size(); ++j) {
            Rational d = from[i].cost + tree.vertex_distance(from[i].vertex, to[j].vertex) + to[j].cost;
            if (first || d < best) {
                best = d;
                best_a = i;
                best_b = j;
                first = false;
            }
        }
    const std::size_t a = from[best_a].vertex;
    const std::size_t b = to[best_b].vertex;
    if (!p.is_vertex()) {
        const Edge& e = tree.edge(p.edge_id());
        result.segments.push_back(ArcSegment{p.edge_id(), p.offset(), end_offset(e, a)});
    }
    const auto path = tree.vertex_path(a, b);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        std::size_t e = tree.edge_between(path[i], path[i + 1]);
        const Edge& edge = tree.edge(e);
        result.segments.push_back(ArcSegment{e, end_offset(edge, path[i]), end_offset(edge, path[i + 1])});
    }
    if (!q.is_vertex()) {
        const Edge& e = tree.edge(q.edge_id());
        result.segments.push_back(ArcSegment{q.edge_id(), end_offset(e, b), q.offset()});
    }
    result.length = best;
    return result;
}

TreePoint point_along(const Arc& a, const Rational& s) {
    if (s <= 0) return a.start;
    Rational remaining = s;
    for (const auto& seg : a.segments) {
        Rational len = seg.length();
        if (remaining <= len) {
            Rational offset = seg.to > seg.from ? Rational(seg.from + remaining) : Rational(seg.from - remaining);
            return TreePoint::on_edge(a.start.host(), seg.edge, offset);
        }
        remaining -= len;
    }
    return a.end;
}

TreePoint point_along(const TreePoint& p, const TreePoint& q, const Rational& s) {
    return point_along(arc(p, q), s);
}

bool on_arc(const TreePoint& x, const TreePoint& p, const TreePoint& q) {
    return distance(p, x) + distance(x, q) == distance(p, q);
}

TreePoint median(const TreePoint& a, const TreePoint& b, const TreePoint& c) {
    Rational s = (distance(a, b) + distance(a, c) - distance(b, c)) / 2;
    return point_along(a, b, s);
}

Direction direction(const TreePoint& x, const TreePoint& y) {
    require_same_host(x, y);
    if (x == y) throw InvalidArgumentError("direction needs distinct points");
    const MetricTree& tree = x.tree();
    if (!x.is_vertex()) {
        const Edge& e = tree.edge(x.edge_id());
        if (!y.is_vertex() && y.edge_id() == x.edge_id()) return Direction{x.edge_id(), y.offset() > x.offset()};
        Rational via_u = x.offset() + distance(TreePoint::at_vertex(x.host(), e.u), y);
        Rational via_v = e.length - x.offset() + distance(TreePoint::at_vertex(x.host(), e.v), y);
        return Direction{x.edge_id(), via_v < via_u};
    }
    const std::size_t v = x.vertex_id();
    std::size_t target;
    if (y.is_vertex()) {
        target = y.vertex_id();
    } else {
        const Edge& e = tree.edge(y.edge_id());
        if (e.u == v || e.v == v) return Direction{y.edge_id(), e.u == v};
        target = e.u;
    }
    std::size_t edge = tree.first_edge_towards(v, target);
    return Direction{edge, tree.edge(edge).u == v};
}

SubTree SubTree::hull(std::span<const TreePoint> points) {
    if (points.empty()) throw InvalidArgumentError("convex hull of an empty point list");
    std::vector<TreePoint> unique(points.begin(), points.end());
    for (const auto& p : unique) require_same_host(p, unique.front());
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    if (unique.size() <= 2) return SubTree(std::move(unique));

    // x generates the hull iff every other point lies in one direction from x.
    std::vector<TreePoint> ends;
    for (std::size_t i = 0; i < unique.size(); ++i) {
        bool leaf = true;
        std::optional<Direction> seen;
        for (std::size_t j = 0; j < unique.size() && leaf; ++j) {
            if (i == j) continue;
            Direction d = direction(unique[i], unique[j]);
            if (!seen) seen = d;
            else if (!(*seen == d)) leaf = false;
        }
        if (leaf) ends.push_back(unique[i]);
    }
    return SubTree(std::move(ends));
}

SubTree SubTree::point(const TreePoint& p) { return SubTree(std::vector<TreePoint>{p}); }

bool SubTree::contains(const TreePoint& p) const {
    require_same_host(p, endpoints_.front());
    if (degenerate()) return p == endpoints_.front();
    for (std::size_t i = 1; i < endpoints_.size(); ++i)
        if (on_arc(p, endpoints_.front(), endpoints_[i])) return true;
    return false;
}

std::vector<EdgePiece> SubTree::pieces() const {
    std::map<std::size_t, EdgePiece> by_edge;
    for (std::size_t i = 1; i < endpoints_.size(); ++i) {
        for (const auto& seg : arc(endpoints_.front(), endpoints_[i]).segments) {
            const Rational& lo = min_of(seg.from, seg.to);
            const Rational& hi = max_of(seg.from, seg.to);
            auto [it, inserted] = by_edge.try_emplace(seg.edge, EdgePiece{seg.edge, lo, hi});
            if (!inserted) {
                if (lo < it->second.lo) it->second.lo = lo;
                if (hi > it->second.hi) it->second.hi = hi;
            }
        }
    }
    std::vector<EdgePiece> out;
    out.reserve(by_edge.size());
    for (auto& [edge, piece] : by_edge) out.push_back(std::move(piece));
    return out;
}

Rational SubTree::total_length() const {
    Rational total = 0;
    for (const auto& piece : pieces()) total += piece.hi - piece.lo;
    return total;
}

SubTree convex_hull(std::span<const TreePoint> points) { return SubTree::hull(points); }

TreePoint first_point(const SubTree& y, const TreePoint& p) {
    const auto& ends = y.endpoints();
    require_same_host(p, ends.front());
    if (y.degenerate()) return ends.front();
    // Y is the union of the arcs [e0, ei]; the gate on each is a median.
    TreePoint best = median(p, ends.front(), ends[1]);
    Rational best_d = distance(p, best);
    for (std::size_t i = 2; i < ends.size() && best_d > 0; ++i) {
        TreePoint m = median(p, ends.front(), ends[i]);
        Rational d = distance(p, m);
        if (d < best_d) {
            best_d = d;
            best = m;
        }
    }
    return best;
}

Rational distance(const TreePoint& p, const SubTree& y) { return distance(p, first_point(y, p)); }

unsigned point_order(const TreePoint& p) {
    if (!p.is_vertex()) return 2;
    return static_cast<unsigned>(p.tree().degree(p.vertex_id()));
}

unsigned point_order(const SubTree& t, const TreePoint& p) {
    if (!t.contains(p)) throw InvalidArgumentError("point is not in the subtree");
    std::vector<Direction> dirs;
    for (const auto& e : t.endpoints()) {
        if (e == p) continue;
        Direction d = direction(p, e);
        if (std::find(dirs.begin(), dirs.end(), d) == dirs.end()) dirs.push_back(d);
    }
    return static_cast<unsigned>(dirs.size());
}

PointKind classify_order(unsigned order) {
    if (order <= 1) return PointKind::End;
    if (order == 2) return PointKind::Cut;
    return PointKind::Branch;
}

Rational modulus_delta(const MetricTree&, const Rational& eps) {
    if (eps <= 0) throw InvalidArgumentError("modulus needs eps > 0");
    return eps / 2;
}

}  // namespace dendro
