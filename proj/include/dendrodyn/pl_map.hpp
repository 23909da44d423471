#pragma once

#include "dendrodyn/geometry.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace dendro {

// One linear piece: domain [lo, hi] of `edge` maps affinely into
// `image_edge`, sending lo to image_lo and hi to image_hi.
struct Cell {
    std::size_t edge = 0;
    Rational lo;
    Rational hi;
    std::size_t image_edge = 0;
    Rational image_lo;
    Rational image_hi;

    bool collapsed() const { return image_lo == image_hi; }
    Rational image_offset(const Rational& t) const;
};

class CellMap;

// Piecewise-linear self-map of a metric tree. Each edge [u, v] is sent onto
// the arc [f(u), f(v)] at constant speed (to a point when f(u) = f(v)).
class PLSelfMap {
public:
    PLSelfMap(TreeHandle host, std::vector<TreePoint> vertex_images);

    const TreeHandle& host() const { return host_; }
    const std::vector<TreePoint>& vertex_images() const { return images_; }
    const TreePoint& vertex_image(std::size_t v) const { return images_.at(v); }
    const Arc& edge_image(std::size_t e) const { return edge_images_.at(e); }

    TreePoint evaluate(const TreePoint& p) const;
    TreePoint operator()(const TreePoint& p) const { return evaluate(p); }

    // Subdivision on which the map is linear from each cell into one edge.
    const CellMap& cells() const { return *cells_; }

private:
    TreeHandle host_;
    std::vector<TreePoint> images_;
    std::vector<Arc> edge_images_;
    std::shared_ptr<const CellMap> cells_;
};

// General piecewise-linear self-map given by cells that partition every edge.
// Closed under composition, which PLSelfMap is not.
class CellMap {
public:
    static CellMap from(const PLSelfMap& f);
    static CellMap identity(const TreeHandle& host);

    const TreeHandle& host() const { return host_; }
    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    const TreePoint& vertex_image(std::size_t v) const { return vertex_images_.at(v); }

    TreePoint evaluate(const TreePoint& p) const;
    TreePoint image_of(const Cell& c, const Rational& t) const;

    // Cells of one edge, ordered by lo.
    std::pair<std::size_t, std::size_t> cell_range(std::size_t edge) const {
        return {edge_begin_.at(edge), edge_begin_.at(edge + 1)};
    }

private:
    friend CellMap compose(const CellMap& outer, const CellMap& inner, std::size_t budget);
    CellMap(TreeHandle host, std::vector<Cell> cells, std::vector<TreePoint> vertex_images);

    TreeHandle host_;
    std::vector<Cell> cells_;
    std::vector<std::size_t> edge_begin_;
    std::vector<TreePoint> vertex_images_;
};

// outer after inner. Throws ResourceError if the result exceeds `budget` cells.
CellMap compose(const CellMap& outer, const CellMap& inner, std::size_t budget = 1u << 20);

// f composed with itself m >= 1 times.
CellMap iterate(const PLSelfMap& f, unsigned m, std::size_t budget = 1u << 20);

struct PreimageComponent {
    std::vector<TreePoint> points;
    std::vector<EdgePiece> segments;
};

// f^{-1}(y) split into connected components.
struct Preimage {
    TreePoint y;
    std::vector<PreimageComponent> components;

    bool empty() const { return components.empty(); }
    bool connected() const { return components.size() <= 1; }
};

Preimage preimage(const CellMap& f, const TreePoint& y);

// Points y at which f^{-1}(y) must be inspected: every vertex, every image
// breakpoint and one point inside each gap between consecutive breakpoints.
std::vector<TreePoint> preimage_test_points(const CellMap& f);

struct MonotonicityVerdict {
    bool monotone = true;
    std::optional<Preimage> witness;
};

MonotonicityVerdict is_monotone(const CellMap& f);
MonotonicityVerdict is_monotone(const PLSelfMap& f);

// Injective and onto: no collapsed cell and exactly one preimage at every test point.
bool is_homeomorphism(const CellMap& f);

// A PL map known to be monotone. Operations whose correctness depends on
// monotonicity take this type instead of PLSelfMap.
class MonotoneMap {
public:
    // Throws NotMonotoneError naming the witness point.
    static MonotoneMap certify(PLSelfMap f);

    const PLSelfMap& map() const { return f_; }
    const TreeHandle& host() const { return f_.host(); }
    TreePoint evaluate(const TreePoint& p) const { return f_.evaluate(p); }
    TreePoint operator()(const TreePoint& p) const { return f_.evaluate(p); }
    operator const PLSelfMap&() const { return f_; }

private:
    explicit MonotoneMap(PLSelfMap f) : f_(std::move(f)) {}
    PLSelfMap f_;
};

}  // namespace dendro
