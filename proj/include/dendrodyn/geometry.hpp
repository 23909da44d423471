#pragma once

#include "dendrodyn/metric_tree.hpp"

#include <span>
#include <vector>

namespace dendro {

Rational distance(const TreePoint& p, const TreePoint& q);

// Sub-interval of a single edge traversed from `from` to `to` (edge offsets).
struct ArcSegment {
    std::size_t edge = 0;
    Rational from;
    Rational to;

    Rational length() const { return abs_diff(from, to); }
};

// The unique arc [start, end]; empty segment list when start == end.
struct Arc {
    TreePoint start;
    TreePoint end;
    std::vector<ArcSegment> segments;
    Rational length;

    bool degenerate() const { return segments.empty(); }
};

Arc arc(const TreePoint& p, const TreePoint& q);

// Point of the arc at arc-length `s` from its start; s is clamped to [0, length].
TreePoint point_along(const Arc& a, const Rational& s);
TreePoint point_along(const TreePoint& p, const TreePoint& q, const Rational& s);

bool on_arc(const TreePoint& x, const TreePoint& p, const TreePoint& q);

// The gate of c on [a, b]; in a tree this is the median of the three points.
TreePoint median(const TreePoint& a, const TreePoint& b, const TreePoint& c);

// Identifies a germ of arcs leaving a point: the edge used and whether the
// offset increases along it.
struct Direction {
    std::size_t edge = 0;
    bool forward = true;
    friend bool operator==(const Direction&, const Direction&) = default;
};

// Direction of the arc from x towards y (x != y).
Direction direction(const TreePoint& x, const TreePoint& y);

// Closed sub-interval [lo, hi] of one edge covered by a subtree.
struct EdgePiece {
    std::size_t edge = 0;
    Rational lo;
    Rational hi;
};

// A subtree given by the irredundant generators of its convex hull, stored in
// canonical (TreePoint) order. A single generator is a degenerate subtree.
class SubTree {
public:
    // Convex hull of the points; throws InvalidArgumentError when empty.
    static SubTree hull(std::span<const TreePoint> points);
    static SubTree point(const TreePoint& p);

    const TreeHandle& host() const { return endpoints_.front().host(); }
    const std::vector<TreePoint>& endpoints() const { return endpoints_; }
    bool degenerate() const { return endpoints_.size() == 1; }

    bool contains(const TreePoint& p) const;
    std::vector<EdgePiece> pieces() const;
    Rational total_length() const;

    friend bool operator==(const SubTree& a, const SubTree& b) { return a.endpoints_ == b.endpoints_; }
    friend bool operator<(const SubTree& a, const SubTree& b) { return a.endpoints_ < b.endpoints_; }

private:
    explicit SubTree(std::vector<TreePoint> endpoints) : endpoints_(std::move(endpoints)) {}
    std::vector<TreePoint> endpoints_;
};

SubTree convex_hull(std::span<const TreePoint> points);

// Nearest-point retraction onto Y (the first point of Y met by any arc from p).
TreePoint first_point(const SubTree& y, const TreePoint& p);

Rational distance(const TreePoint& p, const SubTree& y);

// Number of components of X \ {p}: vertex degree at vertices, 2 inside edges.
unsigned point_order(const TreePoint& p);

// Same count taken inside the subtree; 0 for a degenerate subtree.
unsigned point_order(const SubTree& t, const TreePoint& p);

enum class PointKind { End, Cut, Branch };
PointKind classify_order(unsigned order);

// Modulus for "d(x, y) <= delta implies diam [x, y] < eps". In the geodesic
// metric the diameter of an arc is its length, so eps / 2 works.
Rational modulus_delta(const MetricTree& tree, const Rational& eps);

}  // namespace dendro
