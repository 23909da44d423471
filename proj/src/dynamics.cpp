#include "dendrodyn/dynamics.hpp"

#include "dendrodyn/errors.hpp"
#include "dendrodyn/parallel.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace dendro {

OrbitRecord::OrbitRecord(std::vector<TreePoint> points, std::optional<Cycle> cycle, std::size_t horizon,
                         std::optional<Attractor> attractor)
    : points_(std::move(points)), cycle_(cycle), horizon_(horizon), attractor_(std::move(attractor)) {
    if (points_.empty()) throw InvalidArgumentError("orbit needs a base point");
}

TreePoint OrbitRecord::at(std::size_t n) const {
    if (n < points_.size()) return points_[n];
    if (cycle_) return points_[cycle_->preperiod + (n - cycle_->preperiod) % cycle_->period];
    if (!attractor_) throw std::out_of_range("orbit index beyond horizon");
    const Attractor& a = *attractor_;
    const std::size_t k = (n - a.start) / a.period;
    const std::size_t j = (n - a.start) % a.period;
    return point_along(a.limit[j], points_[a.start + j], power(a.ratio, k) * a.spread[j]);
}

std::optional<std::size_t> OrbitRecord::settled_from() const {
    if (cycle_) return cycle_->preperiod;
    if (attractor_) return attractor_->start;
    return std::nullopt;
}

std::size_t OrbitRecord::limit_period() const {
    if (cycle_) return cycle_->period;
    if (attractor_) return attractor_->period;
    throw std::logic_error("orbit has no limiting periodic orbit");
}

TreePoint OrbitRecord::limit_point(std::size_t n) const {
    if (cycle_) return at(std::max(n, cycle_->preperiod));
    if (!attractor_ || n < attractor_->start) throw std::logic_error("orbit not settled at this index");
    return attractor_->limit[(n - attractor_->start) % attractor_->period];
}

Rational OrbitRecord::displacement_bound(std::size_t n) const {
    if (cycle_) return 0;
    if (!attractor_ || n < attractor_->start) throw std::logic_error("orbit not settled at this index");
    const Attractor& a = *attractor_;
    Rational widest = 0;
    for (const auto& s : a.spread) widest = max_of(widest, s);
    return power(a.ratio, (n - a.start) / a.period) * widest;
}

namespace {

std::optional<Rational> offset_on(const TreePoint& p, std::size_t e) {
    if (!p.is_vertex()) {
        if (p.edge_id() == e) return p.offset();
        return std::nullopt;
    }
    const Edge& edge = p.tree().edge(e);
    if (p.vertex_id() == edge.u) return Rational(0);
    if (p.vertex_id() == edge.v) return edge.length;
    return std::nullopt;
}

// True when [a, b] is a nondegenerate piece of one edge inside a single cell of f.
bool inside_one_cell(const CellMap& cells, const TreePoint& a, const TreePoint& b) {
    Arc ab = arc(a, b);
    if (ab.segments.size() != 1) return false;
    const ArcSegment& seg = ab.segments.front();
    const Rational& lo = min_of(seg.from, seg.to);
    const Rational& hi = max_of(seg.from, seg.to);
    auto [first, last] = cells.cell_range(seg.edge);
    for (std::size_t i = first; i < last; ++i) {
        const Cell& c = cells.cells()[i];
        if (c.lo <= lo && hi <= c.hi) return true;
    }
    return false;
}

// Looks for three iterates x_m, x_{m+p}, x_{m+2p} (m + 2p = last) in
// geometric progression on one edge, then proves convergence to the limit
// z = f^p(z) of that progression.
std::optional<Attractor> find_attractor(const PLSelfMap& f, const std::vector<TreePoint>& pts,
                                        std::size_t max_period) {
    const std::size_t last = pts.size() - 1;
    const TreeHandle& host = f.host();
    for (std::size_t p = 1; p <= max_period && 2 * p <= last; ++p) {
        const std::size_t m = last - 2 * p;
        const TreePoint& a = pts[m];
        const TreePoint& b = pts[m + p];
        const TreePoint& c = pts[m + 2 * p];
        std::optional<std::size_t> edge;
        for (const TreePoint* q : {&a, &b, &c})
            if (!q->is_vertex()) edge = q->edge_id();
        if (!edge) continue;
        auto ta = offset_on(a, *edge), tb = offset_on(b, *edge), tc = offset_on(c, *edge);
        if (!ta || !tb || !tc || *ta == *tb) continue;
        const Rational r = (*tc - *tb) / (*tb - *ta);
        if (!(r > 0 && r < 1)) continue;
        const Rational tz = *ta + (*tb - *ta) / (1 - r);
        if (tz < 0 || tz > host->edge(*edge).length) continue;

        std::vector<TreePoint> zs{TreePoint::on_edge(host, *edge, tz)};
        for (std::size_t j = 0; j < p; ++j) zs.push_back(f.evaluate(zs.back()));
        if (zs[p] != zs[0]) continue;

        const std::size_t start = m + p;
        bool ok = true;
        for (std::size_t j = 0; j < p && ok; ++j)
            ok = pts[start + j] != zs[j] && inside_one_cell(f.cells(), zs[j], pts[start + j]);
        if (!ok || !on_arc(pts[start + p], zs[0], pts[start]) || pts[start + p] == pts[start]) continue;

        Attractor att;
        att.start = start;
        att.period = p;
        att.ratio = distance(zs[0], pts[start + p]) / distance(zs[0], pts[start]);
        zs.pop_back();
        att.limit = std::move(zs);
        for (std::size_t j = 0; j < p; ++j) att.spread.push_back(distance(att.limit[j], pts[start + j]));
        return att;
    }
    return std::nullopt;
}

}  // namespace

OrbitRecord orbit(const PLSelfMap& f, const TreePoint& x, std::size_t horizon, const OrbitOptions& options) {
    if (horizon < 1) throw InvalidArgumentError("orbit horizon must be >= 1");
    require_host(x, f.host());
    std::vector<TreePoint> points{x};
    std::map<TreePoint, std::size_t> seen{{x, 0}};
    std::size_t next_check = 16;
    for (std::size_t n = 1; n <= horizon; ++n) {
        TreePoint y = f.evaluate(points.back());
        auto [it, inserted] = seen.emplace(y, n);
        if (!inserted) return OrbitRecord(std::move(points), Cycle{it->second, n - it->second}, horizon);
        points.push_back(std::move(y));
        if (options.accelerate && n == next_check) {
            if (auto att = find_attractor(f, points, options.max_period))
                return OrbitRecord(std::move(points), std::nullopt, horizon, std::move(att));
            next_check = next_check < 256 ? 2 * next_check : next_check + 256;
        }
    }
    return OrbitRecord(std::move(points), std::nullopt, horizon);
}

std::string to_string(OmegaKind kind) {
    switch (kind) {
        case OmegaKind::ExactPeriodicOrbit: return "exact_periodic_orbit";
        case OmegaKind::ToleranceApproximation: return "tolerance_approximation";
        case OmegaKind::Unresolved: return "unresolved";
    }
    return "unknown";
}

OmegaSet omega_limit(const OrbitRecord& orb, const Rational& eps, const OmegaOptions& options) {
    if (eps <= 0) throw InvalidArgumentError("omega_limit needs eps > 0");
    OmegaSet result;
    result.eps = eps;
    result.horizon = orb.horizon();
    const auto& pts = orb.points();
    if (const auto& cycle = orb.cycle()) {
        result.kind = OmegaKind::ExactPeriodicOrbit;
        result.points.assign(pts.begin() + static_cast<std::ptrdiff_t>(cycle->preperiod), pts.end());
        return result;
    }
    if (const auto& att = orb.attractor()) {
        // The progression may have been found at a multiple of the period.
        std::size_t q = 1;
        while (q < att->period && att->limit[q] != att->limit[0]) ++q;
        result.kind = OmegaKind::ExactPeriodicOrbit;
        result.attracted = true;
        result.points.assign(att->limit.begin(), att->limit.begin() + static_cast<std::ptrdiff_t>(q));
        return result;
    }
    const std::size_t last = pts.size() - 1;
    const std::size_t start = last / 2;
    const std::size_t max_p = std::min(options.max_period, last - start);
    for (std::size_t p = 1; p <= max_p; ++p) {
        bool periodic = true;
        // Check the far end first: it fails fastest for a wrong p.
        for (std::size_t n = last - p + 1; n-- > start && periodic;)
            if (!(distance(pts[n], pts[n + p]) < eps)) periodic = false;
        if (periodic) {
            result.kind = OmegaKind::ToleranceApproximation;
            result.points.assign(pts.end() - static_cast<std::ptrdiff_t>(p), pts.end());
            return result;
        }
    }
    result.kind = OmegaKind::Unresolved;
    for (std::size_t n = start; n <= last; ++n) {
        bool near = std::any_of(result.points.begin(), result.points.end(),
                                [&](const TreePoint& c) { return distance(c, pts[n]) < eps; });
        if (!near) {
            result.points.push_back(pts[n]);
            if (result.points.size() >= options.max_clusters) break;
        }
    }
    return result;
}

OmegaSet omega_limit(const PLSelfMap& f, const TreePoint& x, const Rational& eps, std::size_t horizon,
                     const OmegaOptions& options) {
    return omega_limit(orbit(f, x, horizon), eps, options);
}

std::optional<TreePoint> PeriodicSet::nearest(const TreePoint& p) const {
    std::optional<TreePoint> best;
    Rational best_d;
    auto consider = [&](const TreePoint& q) {
        Rational d = distance(p, q);
        if (!best || d < best_d) {
            best = q;
            best_d = d;
        }
    };
    for (const auto& pp : points) consider(pp.point);
    for (const auto& seg : segments) {
        const TreeHandle& host = p.host();
        std::vector<TreePoint> ends{TreePoint::on_edge(host, seg.piece.edge, seg.piece.lo),
                                    TreePoint::on_edge(host, seg.piece.edge, seg.piece.hi)};
        consider(first_point(SubTree::hull(ends), p));
    }
    return best;
}

std::optional<Rational> PeriodicSet::distance_to(const TreePoint& p) const {
    if (auto q = nearest(p)) return distance(p, *q);
    return std::nullopt;
}

std::size_t minimal_period(const PLSelfMap& f, const TreePoint& x, std::size_t max_period) {
    TreePoint y = x;
    for (std::size_t d = 1; d <= max_period; ++d) {
        y = f.evaluate(y);
        if (y == x) return d;
    }
    return 0;
}

PeriodicSet periodic_points(const PLSelfMap& f, std::size_t max_period, std::size_t cell_budget) {
    if (max_period < 1) throw InvalidArgumentError("max_period must be >= 1");
    const TreeHandle& host = f.host();
    PeriodicSet result;
    result.max_period = max_period;
    std::set<TreePoint> found;
    std::set<std::tuple<std::size_t, Rational, Rational>> found_segments;

    if (host->edge_count() == 0) {
        result.points.push_back(PeriodicPoint{TreePoint::at_vertex(host, 0), 1});
        return result;
    }

    std::optional<CellMap> power;
    for (std::size_t m = 1; m <= max_period; ++m) {
        power = m == 1 ? f.cells() : compose(f.cells(), *power, cell_budget);
        for (const Cell& c : power->cells()) {
            std::vector<TreePoint> candidates{TreePoint::on_edge(host, c.edge, c.lo),
                                              TreePoint::on_edge(host, c.edge, c.hi)};
            if (c.image_edge == c.edge) {
                Rational slope = c.collapsed() ? Rational(0) : Rational((c.image_hi - c.image_lo) / (c.hi - c.lo));
                Rational shift = c.image_lo - slope * c.lo;
                if (slope != 1) {
                    Rational t = shift / (1 - slope);
                    if (t >= c.lo && t <= c.hi) candidates.push_back(TreePoint::on_edge(host, c.edge, t));
                } else if (shift == 0) {
                    if (found_segments.emplace(c.edge, c.lo, c.hi).second) {
                        // Isolated points of lower period can sit inside the
                        // segment (the centre of a reflection), so take the
                        // largest period over a few interior points.
                        PeriodicSegment seg{EdgePiece{c.edge, c.lo, c.hi}, TreePoint::on_edge(host, c.edge, c.lo), 0};
                        for (long k = 1; k < 7; ++k) {
                            TreePoint q = TreePoint::on_edge(host, c.edge, c.lo + (c.hi - c.lo) * frac(k, 7));
                            std::size_t d = minimal_period(f, q, m);
                            if (d > seg.period) {
                                seg.period = d;
                                seg.representative = q;
                            }
                        }
                        result.segments.push_back(std::move(seg));
                    }
                    continue;
                }
            }
            for (auto& x : candidates) {
                if (found.count(x) || power->evaluate(x) != x) continue;
                found.insert(x);
                result.points.push_back(PeriodicPoint{x, minimal_period(f, x, m)});
            }
        }
    }
    std::sort(result.points.begin(), result.points.end(),
              [](const PeriodicPoint& a, const PeriodicPoint& b) { return a.point < b.point; });
    return result;
}

std::string to_string(RecurrenceClass cls) {
    switch (cls) {
        case RecurrenceClass::Fixed: return "fixed";
        case RecurrenceClass::Periodic: return "periodic";
        case RecurrenceClass::RegularlyRecurrent: return "regularly_recurrent";
        case RecurrenceClass::Recurrent: return "recurrent";
        case RecurrenceClass::NonrecurrentEvidence: return "nonrecurrent_evidence";
    }
    return "unknown";
}

RecurrenceReport classify_recurrence(const OrbitRecord& orb, const Rational& eps, std::size_t max_step) {
    if (eps <= 0) throw InvalidArgumentError("classify_recurrence needs eps > 0");
    RecurrenceReport report;
    report.eps = eps;
    report.horizon = orb.horizon();
    const TreePoint& x = orb.base();
    if (const auto& cycle = orb.cycle(); cycle && cycle->preperiod == 0) {
        report.period = cycle->period;
        report.cls = cycle->period == 1 ? RecurrenceClass::Fixed : RecurrenceClass::Periodic;
        return report;
    }
    // Certified convergence to a periodic orbit not containing x: x is not
    // in its own omega-limit set, so it is not recurrent.
    if (orb.attractor()) return report;
    const std::size_t horizon = orb.horizon();
    for (std::size_t step = 1; step <= max_step && step <= horizon; ++step) {
        bool ok = true;
        for (std::size_t n = step; n <= horizon && ok; n += step)
            if (!(distance(x, orb.at(n)) < eps)) ok = false;
        if (ok) {
            report.cls = RecurrenceClass::RegularlyRecurrent;
            report.step = step;
            return report;
        }
    }
    for (std::size_t n = std::max<std::size_t>(1, horizon / 2); n <= horizon; ++n)
        if (distance(x, orb.at(n)) < eps) {
            report.cls = RecurrenceClass::Recurrent;
            return report;
        }
    report.cls = RecurrenceClass::NonrecurrentEvidence;
    return report;
}

RecurrenceReport classify_recurrence(const PLSelfMap& f, const TreePoint& x, const Rational& eps,
                                     std::size_t horizon, std::size_t max_step) {
    return classify_recurrence(orbit(f, x, horizon), eps, max_step);
}

namespace {

TailStats window_stats(const OrbitRecord& x, const OrbitRecord& y, std::size_t begin, std::size_t end,
                       bool exact) {
    TailStats stats;
    stats.begin = begin;
    stats.end = end;
    stats.radius = 0;
    auto sx = x.settled_from();
    auto sy = y.settled_from();
    if (sx && sy && std::max(*sx, *sy) <= begin) {
        // Both orbits follow periodic limits: one common period of the limit
        // distances, plus the certified displacement of either orbit.
        Rational radius = x.displacement_bound(begin) + y.displacement_bound(begin);
        if (radius == 0 || !exact) {
            const std::size_t period = std::lcm(x.limit_period(), y.limit_period());
            const std::size_t stop = std::min(end, begin + period - 1);
            for (std::size_t n = begin; n <= stop; ++n) {
                Rational d = distance(x.limit_point(n), y.limit_point(n));
                if (n == begin || d < stats.inf) stats.inf = d;
                if (n == begin || d > stats.sup) stats.sup = d;
            }
            stats.radius = std::move(radius);
            return stats;
        }
    }
    for (std::size_t n = begin; n <= end; ++n) {
        Rational d = distance(x.at(n), y.at(n));
        if (n == begin || d < stats.inf) stats.inf = d;
        if (n == begin || d > stats.sup) stats.sup = d;
    }
    return stats;
}

// Whether every comparison with eps is settled despite the radius.
bool decisive(const TailStats& s, const Rational& eps) {
    if (s.radius == 0) return true;
    auto clear = [&](const Rational& v) { return v + s.radius < eps || v - s.radius >= eps; };
    return clear(s.inf) && clear(s.sup);
}

}  // namespace

TailStats tail_distance_stats(const OrbitRecord& x, const OrbitRecord& y) {
    const std::size_t horizon = std::min(x.horizon(), y.horizon());
    return window_stats(x, y, horizon / 2, horizon, false);
}

std::string to_string(PairVerdict verdict) {
    switch (verdict) {
        case PairVerdict::Asymptotic: return "asymptotic";
        case PairVerdict::ProximalNotAsymptotic: return "proximal_not_asymptotic";
        case PairVerdict::DistalEvidence: return "distal_evidence";
        case PairVerdict::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

PairReport pair_type(const PLSelfMap& f, const TreePoint& x, const TreePoint& y, const Rational& eps,
                     std::size_t horizon, std::optional<Rational> gap) {
    if (eps <= 0) throw InvalidArgumentError("pair_type needs eps > 0");
    const Rational threshold = gap ? *gap : Rational(2 * eps);
    if (threshold <= eps) throw InvalidArgumentError("pair_type gap must exceed eps");
    OrbitRecord ox = orbit(f, x, horizon);
    OrbitRecord oy = orbit(f, y, horizon);
    const std::size_t h = std::min(ox.horizon(), oy.horizon());
    auto stats = [&](std::size_t b, std::size_t e) {
        TailStats s = window_stats(ox, oy, b, e, false);
        return decisive(s, eps) && decisive(s, threshold) ? s : window_stats(ox, oy, b, e, true);
    };
    PairReport report;
    report.stats = stats(h / 2, h);
    if (report.stats.sup_below(eps)) {
        report.verdict = PairVerdict::Asymptotic;
    } else if (report.stats.inf_at_least(eps)) {
        report.verdict = PairVerdict::DistalEvidence;
    } else {
        const std::size_t mid = (report.stats.begin + report.stats.end) / 2;
        TailStats early = stats(report.stats.begin, mid);
        TailStats late = stats(mid, report.stats.end);
        bool persistent = early.sup_above(threshold) && late.sup_above(threshold) && late.inf_below(eps);
        report.verdict = persistent ? PairVerdict::ProximalNotAsymptotic : PairVerdict::Inconclusive;
    }
    return report;
}

StructureReport check_recurrence_structure(const MonotoneMap& f, const std::vector<TreePoint>& samples,
                                           const Rational& eps, std::size_t horizon,
                                           const StructureOptions& options) {
    const PLSelfMap& map = f.map();
    StructureReport report;
    report.samples.resize(samples.size());
    OmegaOptions omega_options;
    omega_options.max_period = options.max_period;
    parallel_for(samples.size(), [&](std::size_t i) {
        SampleCheck& check = report.samples[i];
        check.sample = samples[i];
        check.omega = omega_limit(map, samples[i], eps, horizon, omega_options);
    });

    std::size_t needed = 1;
    for (const auto& s : report.samples)
        if (s.omega.resolved()) needed = std::max(needed, s.omega.points.size());
    report.periodic = periodic_points(map, needed, options.cell_budget);

    parallel_for(report.samples.size(), [&](std::size_t i) {
        SampleCheck& check = report.samples[i];
        if (!check.omega.resolved()) {
            check.violations.push_back("omega-limit unresolved at horizon " + std::to_string(horizon));
            return;
        }
        check.max_distance_to_periodic = 0;
        for (const auto& w : check.omega.points) {
            auto d = report.periodic.distance_to(w);
            if (!d || !(*d < eps)) {
                check.violations.push_back("omega point " + w.describe() + " is not within eps of a periodic point");
            } else if (*d > check.max_distance_to_periodic) {
                check.max_distance_to_periodic = *d;
            }
            RecurrenceReport rr = classify_recurrence(map, w, eps, horizon, options.rr_max_step);
            if (!rr.regularly_recurrent())
                check.violations.push_back("omega point " + w.describe() + " classified " + to_string(rr.cls));
            check.omega_recurrence.push_back(std::move(rr));
        }
    });
    for (const auto& s : report.samples) report.violation_count += s.violations.size();
    return report;
}

}  // namespace dendro
