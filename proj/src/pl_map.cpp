#include "dendrodyn/pl_map.hpp"

#include "dendrodyn/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace dendro {

namespace {

Rational end_offset(const Edge& e, std::size_t vertex) { return vertex == e.u ? Rational(0) : e.length; }

// (edge, offset) naming a point, vertices attached to their first incident edge.
std::pair<std::size_t, Rational> edge_coordinates(const TreePoint& p) {
    if (!p.is_vertex()) return {p.edge_id(), p.offset()};
    const MetricTree& tree = p.tree();
    const std::size_t e = tree.incident_edges(p.vertex_id()).front();
    return {e, end_offset(tree.edge(e), p.vertex_id())};
}

// Offset of y on edge e, if y lies on the closed edge.
std::optional<Rational> offset_on_edge(const TreePoint& y, std::size_t e) {
    if (!y.is_vertex()) {
        if (y.edge_id() == e) return y.offset();
        return std::nullopt;
    }
    const Edge& edge = y.tree().edge(e);
    if (y.vertex_id() == edge.u) return Rational(0);
    if (y.vertex_id() == edge.v) return edge.length;
    return std::nullopt;
}

Cell collapsed_cell(std::size_t edge, Rational lo, Rational hi, const TreePoint& image) {
    auto [image_edge, offset] = edge_coordinates(image);
    return Cell{edge, std::move(lo), std::move(hi), image_edge, offset, offset};
}

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

Rational Cell::image_offset(const Rational& t) const {
    if (hi == lo || image_lo == image_hi) return image_lo;
    return image_lo + (t - lo) * (image_hi - image_lo) / (hi - lo);
}

PLSelfMap::PLSelfMap(TreeHandle host, std::vector<TreePoint> vertex_images)
    : host_(std::move(host)), images_(std::move(vertex_images)) {
    if (!host_) throw InvalidArgumentError("map needs a host tree");
    if (images_.size() != host_->vertex_count())
        throw InvalidArgumentError("map needs one image per vertex");
    for (const auto& p : images_) require_host(p, host_);
    edge_images_.reserve(host_->edge_count());
    for (const auto& e : host_->edges()) edge_images_.push_back(arc(images_[e.u], images_[e.v]));
    cells_ = std::make_shared<const CellMap>(CellMap::from(*this));
}

TreePoint PLSelfMap::evaluate(const TreePoint& p) const {
    require_host(p, host_);
    if (p.is_vertex()) return images_[p.vertex_id()];
    const Arc& image = edge_images_[p.edge_id()];
    if (image.degenerate()) return image.start;
    return point_along(image, p.offset() * image.length / host_->edge(p.edge_id()).length);
}

CellMap::CellMap(TreeHandle host, std::vector<Cell> cells, std::vector<TreePoint> vertex_images)
    : host_(std::move(host)), cells_(std::move(cells)), vertex_images_(std::move(vertex_images)) {
    std::sort(cells_.begin(), cells_.end(), [](const Cell& a, const Cell& b) {
        if (a.edge != b.edge) return a.edge < b.edge;
        return a.lo < b.lo;
    });
    edge_begin_.assign(host_->edge_count() + 1, cells_.size());
    for (std::size_t i = cells_.size(); i-- > 0;) edge_begin_[cells_[i].edge] = i;
    for (std::size_t e = host_->edge_count(); e-- > 0;)
        if (edge_begin_[e] > edge_begin_[e + 1]) edge_begin_[e] = edge_begin_[e + 1];
}

CellMap CellMap::from(const PLSelfMap& f) {
    const MetricTree& tree = *f.host();
    std::vector<Cell> cells;
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
        const Edge& edge = tree.edge(e);
        const Arc& image = f.edge_image(e);
        if (image.degenerate()) {
            cells.push_back(collapsed_cell(e, 0, edge.length, image.start));
            continue;
        }
        Rational walked = 0;
        for (const auto& seg : image.segments) {
            Rational t0 = walked * edge.length / image.length;
            walked += seg.length();
            Rational t1 = walked * edge.length / image.length;
            cells.push_back(Cell{e, t0, t1, seg.edge, seg.from, seg.to});
        }
    }
    return CellMap(f.host(), std::move(cells), f.vertex_images());
}

CellMap CellMap::identity(const TreeHandle& host) {
    std::vector<Cell> cells;
    std::vector<TreePoint> images;
    for (std::size_t e = 0; e < host->edge_count(); ++e)
        cells.push_back(Cell{e, 0, host->edge(e).length, e, 0, host->edge(e).length});
    for (std::size_t v = 0; v < host->vertex_count(); ++v) images.push_back(TreePoint::at_vertex(host, v));
    return CellMap(host, std::move(cells), std::move(images));
}

TreePoint CellMap::image_of(const Cell& c, const Rational& t) const {
    return TreePoint::on_edge(host_, c.image_edge, c.image_offset(t));
}

TreePoint CellMap::evaluate(const TreePoint& p) const {
    require_host(p, host_);
    if (p.is_vertex()) return vertex_images_[p.vertex_id()];
    auto [begin, end] = cell_range(p.edge_id());
    auto it = std::upper_bound(cells_.begin() + static_cast<std::ptrdiff_t>(begin),
                               cells_.begin() + static_cast<std::ptrdiff_t>(end), p.offset(),
                               [](const Rational& t, const Cell& c) { return t < c.lo; });
    --it;
    return image_of(*it, p.offset());
}

CellMap compose(const CellMap& outer, const CellMap& inner, std::size_t budget) {
    if (outer.host() != inner.host()) throw HostMismatchError();
    const TreeHandle& host = inner.host();
    std::vector<Cell> out;
    auto push = [&](Cell c) {
        if (!out.empty()) {
            Cell& prev = out.back();
            if (prev.edge == c.edge && prev.hi == c.lo) {
                bool merge = false;
                if (prev.collapsed() && c.collapsed()) {
                    merge = prev.image_edge == c.image_edge && prev.image_lo == c.image_lo;
                } else if (!prev.collapsed() && !c.collapsed() && prev.image_edge == c.image_edge &&
                           prev.image_hi == c.image_lo) {
                    merge = (prev.image_hi - prev.image_lo) / (prev.hi - prev.lo) ==
                            (c.image_hi - c.image_lo) / (c.hi - c.lo);
                }
                if (merge) {
                    prev.hi = c.hi;
                    prev.image_hi = c.image_hi;
                    return;
                }
            }
        }
        out.push_back(std::move(c));
        if (out.size() > budget)
            throw ResourceError("cell budget of " + std::to_string(budget) + " exceeded while composing");
    };

    for (const Cell& c : inner.cells()) {
        if (c.collapsed()) {
            TreePoint z = outer.evaluate(inner.image_of(c, c.lo));
            push(collapsed_cell(c.edge, c.lo, c.hi, z));
            continue;
        }
        const Rational& a = c.image_lo;
        const Rational& b = c.image_hi;
        const bool increasing = b > a;
        auto pull_back = [&](const Rational& x) -> Rational { return c.lo + (x - a) / (b - a) * (c.hi - c.lo); };
        auto [begin, end] = outer.cell_range(c.image_edge);
        std::vector<Cell> pieces;
        for (std::size_t i = begin; i < end; ++i) {
            const Cell& oc = outer.cells()[i];
            const Rational& lo = increasing ? a : b;
            const Rational& hi = increasing ? b : a;
            Rational x0 = max_of(oc.lo, lo);
            Rational x1 = min_of(oc.hi, hi);
            if (x0 >= x1) continue;
            Rational t0 = pull_back(x0);
            Rational t1 = pull_back(x1);
            Rational i0 = oc.image_offset(x0);
            Rational i1 = oc.image_offset(x1);
            if (t0 > t1) {
                std::swap(t0, t1);
                std::swap(i0, i1);
            }
            if (i0 == i1)
                pieces.push_back(collapsed_cell(c.edge, t0, t1, TreePoint::on_edge(host, oc.image_edge, i0)));
            else
                pieces.push_back(Cell{c.edge, t0, t1, oc.image_edge, i0, i1});
        }
        if (!increasing) std::reverse(pieces.begin(), pieces.end());
        for (auto& piece : pieces) push(std::move(piece));
    }
    std::vector<TreePoint> images;
    images.reserve(host->vertex_count());
    for (std::size_t v = 0; v < host->vertex_count(); ++v) images.push_back(outer.evaluate(inner.vertex_image(v)));
    return CellMap(host, std::move(out), std::move(images));
}

CellMap iterate(const PLSelfMap& f, unsigned m, std::size_t budget) {
    if (m == 0) return CellMap::identity(f.host());
    CellMap result = f.cells();
    for (unsigned i = 1; i < m; ++i) result = compose(f.cells(), result, budget);
    return result;
}

Preimage preimage(const CellMap& f, const TreePoint& y) {
    require_host(y, f.host());
    const TreeHandle& host = f.host();
    std::vector<TreePoint> points;
    std::vector<EdgePiece> segments;
    for (const Cell& c : f.cells()) {
        auto o = offset_on_edge(y, c.image_edge);
        if (!o) continue;
        const Rational& lo = min_of(c.image_lo, c.image_hi);
        const Rational& hi = max_of(c.image_lo, c.image_hi);
        if (*o < lo || *o > hi) continue;
        if (c.collapsed()) {
            segments.push_back(EdgePiece{c.edge, c.lo, c.hi});
        } else {
            Rational t = c.lo + (*o - c.image_lo) / (c.image_hi - c.image_lo) * (c.hi - c.lo);
            points.push_back(TreePoint::on_edge(host, c.edge, t));
        }
    }
    if (host->edge_count() == 0 && f.vertex_image(0) == y) points.push_back(TreePoint::at_vertex(host, 0));

    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    // Items are isolated points and collapsed segments; they touch iff they share a point.
    const std::size_t n_items = points.size() + segments.size();
    UnionFind uf(n_items);
    std::map<TreePoint, std::size_t> owner;
    auto attach = [&](const TreePoint& key, std::size_t item) {
        auto [it, inserted] = owner.emplace(key, item);
        if (!inserted) uf.unite(it->second, item);
    };
    for (std::size_t i = 0; i < points.size(); ++i) attach(points[i], i);
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto& seg = segments[s];
        attach(TreePoint::on_edge(host, seg.edge, seg.lo), points.size() + s);
        attach(TreePoint::on_edge(host, seg.edge, seg.hi), points.size() + s);
    }

    std::map<std::size_t, PreimageComponent> grouped;
    for (std::size_t i = 0; i < points.size(); ++i) grouped[uf.find(i)].points.push_back(points[i]);
    for (std::size_t s = 0; s < segments.size(); ++s)
        grouped[uf.find(points.size() + s)].segments.push_back(segments[s]);

    Preimage result{y, {}};
    for (auto& [root, component] : grouped) {
        auto& segs = component.segments;
        std::sort(segs.begin(), segs.end(), [](const EdgePiece& a, const EdgePiece& b) {
            return a.edge != b.edge ? a.edge < b.edge : a.lo < b.lo;
        });
        std::vector<EdgePiece> merged;
        for (auto& seg : segs) {
            if (!merged.empty() && merged.back().edge == seg.edge && merged.back().hi == seg.lo)
                merged.back().hi = seg.hi;
            else
                merged.push_back(seg);
        }
        segs = std::move(merged);
        // Isolated points swallowed by a segment carry no information.
        std::erase_if(component.points, [&](const TreePoint& p) {
            return std::any_of(segs.begin(), segs.end(), [&](const EdgePiece& seg) {
                auto o = offset_on_edge(p, seg.edge);
                return o && *o >= seg.lo && *o <= seg.hi;
            });
        });
        result.components.push_back(std::move(component));
    }
    return result;
}

std::vector<TreePoint> preimage_test_points(const CellMap& f) {
    const TreeHandle& host = f.host();
    const MetricTree& tree = *host;
    std::vector<std::size_t> order(tree.vertex_count());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return tree.degree(a) > tree.degree(b); });
    std::vector<TreePoint> out;
    for (std::size_t v : order) out.push_back(TreePoint::at_vertex(host, v));

    std::vector<std::vector<Rational>> breaks(tree.edge_count());
    for (std::size_t e = 0; e < tree.edge_count(); ++e) breaks[e] = {Rational(0), tree.edge(e).length};
    for (const Cell& c : f.cells()) {
        breaks[c.image_edge].push_back(c.image_lo);
        breaks[c.image_edge].push_back(c.image_hi);
    }
    for (std::size_t e = 0; e < tree.edge_count(); ++e) {
        auto& b = breaks[e];
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            if (i > 0) out.push_back(TreePoint::on_edge(host, e, b[i]));
            out.push_back(TreePoint::on_edge(host, e, (b[i] + b[i + 1]) / 2));
        }
    }
    return out;
}

MonotonicityVerdict is_monotone(const CellMap& f) {
    for (const auto& y : preimage_test_points(f)) {
        Preimage pre = preimage(f, y);
        if (!pre.connected()) return MonotonicityVerdict{false, std::move(pre)};
    }
    return MonotonicityVerdict{true, std::nullopt};
}

MonotonicityVerdict is_monotone(const PLSelfMap& f) { return is_monotone(f.cells()); }

bool is_homeomorphism(const CellMap& f) {
    for (const Cell& c : f.cells())
        if (c.collapsed()) return false;
    for (const auto& y : preimage_test_points(f)) {
        Preimage pre = preimage(f, y);
        if (pre.components.size() != 1) return false;
        const auto& comp = pre.components.front();
        if (comp.points.size() != 1 || !comp.segments.empty()) return false;
    }
    return true;
}

MonotoneMap MonotoneMap::certify(PLSelfMap f) {
    auto verdict = is_monotone(f);
    if (!verdict.monotone)
        throw NotMonotoneError("map is not monotone: preimage of " + verdict.witness->y.describe() + " has " +
                               std::to_string(verdict.witness->components.size()) + " components");
    return MonotoneMap(std::move(f));
}

}  // namespace dendro
