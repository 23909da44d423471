#include "dendrodyn/hyperspace.hpp"

#include "dendrodyn/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace dendro {

FiniteSet FiniteSet::of(std::vector<TreePoint> points) {
    if (points.empty()) throw InvalidArgumentError("finite set must be nonempty");
    for (const auto& p : points) require_same_host(p, points.front());
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return FiniteSet(std::move(points));
}

const TreeHandle& host_of(const HyperElement& e) {
    return std::visit([](const auto& x) -> const TreeHandle& { return x.host(); }, e);
}

const std::vector<TreePoint>& generators(const HyperElement& e) {
    if (const auto* s = std::get_if<FiniteSet>(&e)) return s->points();
    return std::get<SubTree>(e).endpoints();
}

std::string describe(const HyperElement& e) {
    std::string out = std::holds_alternative<FiniteSet>(e) ? "{" : "[";
    const auto& g = generators(e);
    for (std::size_t i = 0; i < g.size(); ++i) out += (i ? ", " : "") + g[i].describe();
    return out + (std::holds_alternative<FiniteSet>(e) ? "}" : "]");
}

namespace {

Rational distance_to_set(const TreePoint& p, const std::vector<TreePoint>& set) {
    Rational best = distance(p, set.front());
    for (std::size_t i = 1; i < set.size(); ++i) best = min_of(best, distance(p, set[i]));
    return best;
}

// sup over the subtree of the distance to a finite set. On an edge piece each
// d(., a) is the lower envelope of lines of slope +1 and -1 (or a V inside the
// edge of a), so the maximum of the minimum sits at a piece end or where a
// rising line meets a falling one.
Rational subtree_to_set(const SubTree& t, const std::vector<TreePoint>& set) {
    Rational best = 0;
    for (const auto& end : t.endpoints()) best = max_of(best, distance_to_set(end, set));
    if (t.degenerate()) return best;
    const TreeHandle& host = t.host();
    for (const auto& piece : t.pieces()) {
        const Edge& edge = host->edge(piece.edge);
        const TreePoint u = TreePoint::at_vertex(host, edge.u);
        const TreePoint v = TreePoint::at_vertex(host, edge.v);
        std::vector<Rational> rising, falling;  // t + c and -t + d
        for (const auto& a : set) {
            if (!a.is_vertex() && a.edge_id() == piece.edge) {
                rising.push_back(-a.offset());
                falling.push_back(a.offset());
            } else {
                rising.push_back(distance(a, u));
                falling.push_back(distance(a, v) + edge.length);
            }
        }
        std::vector<Rational> candidates{piece.lo, piece.hi};
        for (const auto& c : rising)
            for (const auto& d : falling) {
                Rational s = (d - c) / 2;
                if (s > piece.lo && s < piece.hi) candidates.push_back(s);
            }
        for (const auto& s : candidates)
            best = max_of(best, distance_to_set(TreePoint::on_edge(host, piece.edge, s), set));
    }
    return best;
}

// sup over a of d(a, b).
Rational directed(const HyperElement& a, const HyperElement& b) {
    Rational best = 0;
    if (const auto* sa = std::get_if<FiniteSet>(&a)) {
        for (const auto& p : sa->points()) {
            Rational d = std::holds_alternative<FiniteSet>(b) ? distance_to_set(p, std::get<FiniteSet>(b).points())
                                                               : distance(p, std::get<SubTree>(b));
            best = max_of(best, d);
        }
        return best;
    }
    const SubTree& ta = std::get<SubTree>(a);
    if (const auto* sb = std::get_if<FiniteSet>(&b)) return subtree_to_set(ta, sb->points());
    for (const auto& end : ta.endpoints()) best = max_of(best, distance(end, std::get<SubTree>(b)));
    return best;
}

}  // namespace

Rational hausdorff(const HyperElement& a, const HyperElement& b) {
    require_same_host(generators(a).front(), generators(b).front());
    return max_of(directed(a, b), directed(b, a));
}

FiniteSet induced_Fn(const PLSelfMap& f, const FiniteSet& a) {
    std::vector<TreePoint> image;
    image.reserve(a.size());
    for (const auto& p : a.points()) image.push_back(f.evaluate(p));
    return FiniteSet::of(std::move(image));
}

SubTree induced_Tn(const MonotoneMap& f, const SubTree& t) {
    std::vector<TreePoint> image;
    image.reserve(t.endpoints().size());
    for (const auto& p : t.endpoints()) image.push_back(f.evaluate(p));
    return SubTree::hull(image);
}

HyperElement induced(const MonotoneMap& f, const HyperElement& e) {
    if (const auto* s = std::get_if<FiniteSet>(&e)) return induced_Fn(f.map(), *s);
    return induced_Tn(f, std::get<SubTree>(e));
}

namespace {

HyperElement rebuild(const HyperElement& like, std::vector<TreePoint> points) {
    if (std::holds_alternative<FiniteSet>(like)) return FiniteSet::of(std::move(points));
    return SubTree::hull(points);
}

}  // namespace

HyperOrbit::HyperOrbit(HyperElement base, std::vector<OrbitRecord> coordinates, std::size_t horizon)
    : base_(std::move(base)), coordinates_(std::move(coordinates)), horizon_(horizon) {
    if (coordinates_.empty()) throw InvalidArgumentError("hyper orbit needs generator orbits");
    std::size_t pre = 0, period = 1;
    for (const auto& c : coordinates_) {
        if (!c.cycle()) return;
        pre = std::max(pre, c.cycle()->preperiod);
        period = std::lcm(period, c.cycle()->period);
    }
    // Elements repeat with the lcm of the generator periods; the element
    // cycle itself can be shorter and start earlier.
    std::vector<HyperElement> window;
    window.reserve(period);
    for (std::size_t i = 0; i < period; ++i) window.push_back(at(pre + i));
    std::size_t q = 1;
    for (; q < period; ++q) {
        if (period % q) continue;
        bool ok = true;
        for (std::size_t i = 0; i + q < period && ok; ++i) ok = window[i] == window[i + q];
        if (ok) break;
    }
    while (pre > 0 && at(pre - 1) == at(pre - 1 + q)) --pre;
    cycle_ = Cycle{pre, q};
}

HyperElement HyperOrbit::at(std::size_t n) const {
    std::vector<TreePoint> pts;
    pts.reserve(coordinates_.size());
    for (const auto& c : coordinates_) pts.push_back(c.at(n));
    return rebuild(base_, std::move(pts));
}

std::optional<std::size_t> HyperOrbit::settled_from() const {
    std::size_t from = 0;
    for (const auto& c : coordinates_) {
        auto s = c.settled_from();
        if (!s) return std::nullopt;
        from = std::max(from, *s);
    }
    return from;
}

std::size_t HyperOrbit::limit_period() const {
    std::size_t period = 1;
    for (const auto& c : coordinates_) period = std::lcm(period, c.limit_period());
    return period;
}

HyperElement HyperOrbit::limit_element(std::size_t n) const {
    std::vector<TreePoint> pts;
    pts.reserve(coordinates_.size());
    for (const auto& c : coordinates_) pts.push_back(c.limit_point(n));
    return rebuild(base_, std::move(pts));
}

Rational HyperOrbit::displacement_bound(std::size_t n) const {
    Rational bound = 0;
    for (const auto& c : coordinates_) bound = max_of(bound, c.displacement_bound(n));
    return bound;
}

HyperOrbit hyper_orbit(const MonotoneMap& f, const HyperElement& e, std::size_t horizon) {
    if (horizon < 1) throw InvalidArgumentError("orbit horizon must be >= 1");
    require_host(generators(e).front(), f.host());
    std::vector<OrbitRecord> coords;
    for (const auto& g : generators(e)) coords.push_back(orbit(f.map(), g, horizon));
    return HyperOrbit(e, std::move(coords), horizon);
}

namespace {

TailStats hyper_window(const HyperOrbit& a, const HyperOrbit& b, std::size_t begin, std::size_t end, bool exact) {
    TailStats stats;
    stats.begin = begin;
    stats.end = end;
    stats.radius = 0;
    auto sa = a.settled_from();
    auto sb = b.settled_from();
    if (sa && sb && std::max(*sa, *sb) <= begin) {
        Rational radius = a.displacement_bound(begin) + b.displacement_bound(begin);
        if (radius == 0 || !exact) {
            const std::size_t period = std::lcm(a.limit_period(), b.limit_period());
            const std::size_t stop = std::min(end, begin + period - 1);
            for (std::size_t n = begin; n <= stop; ++n) {
                Rational d = hausdorff(a.limit_element(n), b.limit_element(n));
                if (n == begin || d < stats.inf) stats.inf = d;
                if (n == begin || d > stats.sup) stats.sup = d;
            }
            stats.radius = std::move(radius);
            return stats;
        }
    }
    for (std::size_t n = begin; n <= end; ++n) {
        Rational d = hausdorff(a.at(n), b.at(n));
        if (n == begin || d < stats.inf) stats.inf = d;
        if (n == begin || d > stats.sup) stats.sup = d;
    }
    return stats;
}

}  // namespace

TailStats hyper_tail_stats(const HyperOrbit& a, const HyperOrbit& b, std::optional<Rational> eps) {
    const std::size_t horizon = std::min(a.horizon(), b.horizon());
    TailStats stats = hyper_window(a, b, horizon / 2, horizon, false);
    if (eps && stats.radius != 0) {
        auto clear = [&](const Rational& v) { return v + stats.radius < *eps || v - stats.radius >= *eps; };
        if (!clear(stats.inf) || !clear(stats.sup)) stats = hyper_window(a, b, horizon / 2, horizon, true);
    }
    return stats;
}

HyperOmega hyper_omega(const HyperOrbit& orb, const MonotoneMap& f, const Rational& eps, std::size_t max_period) {
    if (eps <= 0) throw InvalidArgumentError("hyper_omega needs eps > 0");
    HyperOmega result;
    result.eps = eps;
    result.horizon = orb.horizon();
    if (const auto& cycle = orb.cycle()) {
        result.kind = OmegaKind::ExactPeriodicOrbit;
        for (std::size_t i = 0; i < cycle->period; ++i) result.members.push_back(orb.at(cycle->preperiod + i));
        result.minimal = true;
        return result;
    }
    if (auto settled = orb.settled_from()) {
        // The limit elements form an exact periodic orbit of the induced map.
        const std::size_t period = orb.limit_period();
        std::vector<HyperElement> limit;
        for (std::size_t i = 0; i < period; ++i) limit.push_back(orb.limit_element(*settled + i));
        std::size_t q = 1;
        while (q < period && (period % q || !std::equal(limit.begin() + static_cast<std::ptrdiff_t>(q), limit.end(),
                                                         limit.begin())))
            ++q;
        result.kind = OmegaKind::ExactPeriodicOrbit;
        result.attracted = true;
        result.minimal = true;
        result.members.assign(limit.begin(), limit.begin() + static_cast<std::ptrdiff_t>(q));
        return result;
    }
    const std::size_t last = orb.horizon();
    const std::size_t start = last / 2;
    std::vector<HyperElement> tail;
    for (std::size_t n = start; n <= last; ++n) tail.push_back(orb.at(n));
    const std::size_t max_p = std::min(max_period, tail.size() - 1);
    for (std::size_t p = 1; p <= max_p; ++p) {
        bool periodic = true;
        for (std::size_t i = 0; i + p < tail.size() && periodic; ++i)
            if (!(hausdorff(tail[i], tail[i + p]) < eps)) periodic = false;
        if (!periodic) continue;
        result.kind = OmegaKind::ToleranceApproximation;
        result.members.assign(tail.end() - static_cast<std::ptrdiff_t>(p), tail.end());
        // Each member's own forward orbit must pass near every member.
        result.minimal = true;
        for (const auto& m : result.members) {
            std::vector<HyperElement> forward{m};
            for (std::size_t k = 1; k < 2 * p; ++k) forward.push_back(induced(f, forward.back()));
            for (const auto& target : result.members) {
                bool visited = std::any_of(forward.begin(), forward.end(),
                                           [&](const HyperElement& x) { return hausdorff(x, target) < eps; });
                if (!visited) result.minimal = false;
            }
        }
        return result;
    }
    result.kind = OmegaKind::Unresolved;
    for (const auto& e : tail) {
        if (result.members.size() >= 256) break;
        bool near = std::any_of(result.members.begin(), result.members.end(),
                                [&](const HyperElement& c) { return hausdorff(c, e) < eps; });
        if (!near) result.members.push_back(e);
    }
    return result;
}

HyperOmega hyper_omega(const MonotoneMap& f, const HyperElement& e, const Rational& eps, std::size_t horizon,
                       std::size_t max_period) {
    return hyper_omega(hyper_orbit(f, e, horizon), f, eps, max_period);
}

RecurrenceReport classify_hyper_recurrence(const HyperOrbit& orb, const Rational& eps, std::size_t max_step) {
    if (eps <= 0) throw InvalidArgumentError("classify_hyper_recurrence needs eps > 0");
    RecurrenceReport report;
    report.eps = eps;
    report.horizon = orb.horizon();
    if (const auto& cycle = orb.cycle()) {
        if (cycle->preperiod == 0) {
            report.period = cycle->period;
            report.cls = cycle->period == 1 ? RecurrenceClass::Fixed : RecurrenceClass::Periodic;
        }
        return report;
    }
    // A settled orbit without an element cycle has an attracted generator. A
    // periodic element would make f^q permute its generators, so E is not in
    // its omega-limit set.
    if (orb.settled_from()) return report;
    const HyperElement& base = orb.base();
    const std::size_t horizon = orb.horizon();
    std::vector<HyperElement> elements;
    for (std::size_t n = 0; n <= horizon; ++n) elements.push_back(orb.at(n));
    for (std::size_t step = 1; step <= max_step && step <= horizon; ++step) {
        bool ok = true;
        for (std::size_t n = step; n <= horizon && ok; n += step)
            if (!(hausdorff(base, elements[n]) < eps)) ok = false;
        if (ok) {
            report.cls = RecurrenceClass::RegularlyRecurrent;
            report.step = step;
            return report;
        }
    }
    for (std::size_t n = std::max<std::size_t>(1, horizon / 2); n <= horizon; ++n)
        if (hausdorff(base, elements[n]) < eps) {
            report.cls = RecurrenceClass::Recurrent;
            return report;
        }
    return report;
}

CompanionCertificate asymptotic_companion(const MonotoneMap& f, const HyperElement& e, const Rational& eps,
                                          std::size_t horizon, const PeriodicSet* periodic) {
    if (eps <= 0) throw InvalidArgumentError("asymptotic_companion needs eps > 0");
    CompanionCertificate cert{e, Rational(0), false, RecurrenceClass::NonrecurrentEvidence, 0, std::nullopt, {}};
    std::map<std::size_t, PeriodicSet> solved;
    auto periodic_for = [&](std::size_t period) -> const PeriodicSet& {
        if (periodic && periodic->max_period >= period) return *periodic;
        auto it = solved.find(period);
        if (it == solved.end()) it = solved.emplace(period, periodic_points(f.map(), period)).first;
        return it->second;
    };

    std::vector<TreePoint> companions;
    for (const auto& x : generators(e)) {
        OrbitRecord ox = orbit(f.map(), x, horizon);
        if (auto settled = ox.settled_from()) {
            // The limit point in phase with x: f^n(y) = limit_point(n).
            const std::size_t period = ox.limit_period();
            companions.push_back(ox.limit_point((*settled + period - 1) / period * period));
            continue;
        }
        OmegaSet w = omega_limit(ox, eps);
        if (!w.resolved()) {
            cert.failures.push_back("omega-limit of " + x.describe() + " unresolved");
            companions.push_back(x);
            continue;
        }
        const PeriodicSet& set = periodic_for(w.points.size());
        std::vector<TreePoint> candidates;
        for (const auto& p : w.points)
            if (auto q = set.nearest(p)) candidates.push_back(*q);
        if (candidates.empty()) {
            cert.failures.push_back("no periodic point near omega-limit of " + x.describe());
            companions.push_back(x);
            continue;
        }
        std::optional<TreePoint> best;
        Rational best_sup;
        for (const auto& y : candidates) {
            TailStats s = tail_distance_stats(ox, orbit(f.map(), y, horizon));
            if (!best || s.sup + s.radius < best_sup) {
                best = y;
                best_sup = s.sup + s.radius;
            }
        }
        companions.push_back(*best);
    }
    cert.companion = rebuild(e, companions);

    HyperOrbit oe = hyper_orbit(f, e, horizon);
    HyperOrbit ob = hyper_orbit(f, cert.companion, horizon);
    TailStats tail = hyper_tail_stats(oe, ob, eps);
    cert.tail_sup = tail.sup + tail.radius;
    cert.asymptotic = cert.tail_sup < eps;
    if (!cert.asymptotic) cert.failures.push_back("tail sup " + format_rational(cert.tail_sup) + " not below eps");

    RecurrenceReport rr = classify_hyper_recurrence(ob, eps);
    cert.recurrence = rr.cls;
    cert.rr_step = rr.cls == RecurrenceClass::RegularlyRecurrent ? rr.step : rr.period;
    if (!rr.regularly_recurrent()) cert.failures.push_back("companion classified " + to_string(rr.cls));

    if (ob.cycle() && ob.cycle()->preperiod == 0) {
        cert.periodic_distance = Rational(0);
    } else {
        // Snap every generator onto the periodic set and test the result.
        const PeriodicSet& set = periodic_for(64);
        std::vector<TreePoint> snapped;
        for (const auto& p : generators(cert.companion))
            if (auto q = set.nearest(p)) snapped.push_back(*q);
        if (snapped.size() == generators(cert.companion).size()) {
            HyperElement near = rebuild(cert.companion, snapped);
            HyperOrbit on = hyper_orbit(f, near, horizon);
            if (on.cycle() && on.cycle()->preperiod == 0) cert.periodic_distance = hausdorff(near, cert.companion);
        }
    }
    if (!cert.periodic_distance || !(*cert.periodic_distance < eps))
        cert.failures.push_back("no periodic hyperpoint within eps of the companion");
    return cert;
}

}  // namespace dendro
