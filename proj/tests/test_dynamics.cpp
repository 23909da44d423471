#include "dendrodyn/corpus.hpp"
#include "dendrodyn/dynamics.hpp"
#include "dendrodyn/errors.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace dendro;
using namespace dendro::testing;

namespace {

const Rational kEps = pow10_inverse(6);

struct IntervalMaps {
    TreeHandle t = unit_interval();
    PLSelfMap identity = interval_map(t, "0", "1");
    PLSelfMap reflection = interval_map(t, "1", "0");
    PLSelfMap contraction = interval_map(t, "0", "1/2");
    TreePoint p(const char* s) const { return on_interval(t, R(s)); }
};

// Exact orbit period computed by plain iteration, independent of the
// library's cycle detection.
std::size_t brute_period(const PLSelfMap& f, const TreePoint& x, std::size_t limit) {
    TreePoint y = x;
    for (std::size_t n = 1; n <= limit; ++n) {
        y = f(y);
        if (y == x) return n;
    }
    return 0;
}

}  // namespace

TEST_CASE("orbit examples") {
    IntervalMaps m;
    auto fixed = orbit(m.reflection, m.p("1/2"), 100);
    REQUIRE(fixed.cycle());
    CHECK(fixed.cycle()->preperiod == 0);
    CHECK(fixed.cycle()->period == 1);

    auto two = orbit(m.reflection, m.p("3/10"), 100);
    REQUIRE(two.cycle());
    CHECK(two.cycle()->preperiod == 0);
    CHECK(two.cycle()->period == 2);
    CHECK(two.points() == std::vector<TreePoint>{m.p("3/10"), m.p("7/10")});
    CHECK(two.at(1001) == m.p("7/10"));

    auto down = orbit(m.contraction, m.p("1"), 200, OrbitOptions{false});
    CHECK_FALSE(down.cycle());
    CHECK_FALSE(down.attractor());
    REQUIRE(down.points().size() == 201);
    for (std::size_t n = 1; n < down.points().size(); ++n) {
        CHECK(down.points()[n] == m.contraction(down.points()[n - 1]));
        CHECK(distance(down.points()[n], m.p("0")) < distance(down.points()[n - 1], m.p("0")));
    }
    CHECK_THROWS_AS(down.at(500), std::out_of_range);

    // With acceleration the same orbit is recognised as converging to 0.
    auto fast = orbit(m.contraction, m.p("1"), 200);
    REQUIRE(fast.attractor());
    CHECK(fast.attractor()->limit == std::vector<TreePoint>{m.p("0")});
    CHECK(fast.attractor()->ratio == R("1/2"));
    CHECK(fast.points().size() < 201);
    for (std::size_t n = 0; n <= 200; ++n) CHECK(fast.at(n) == down.at(n));
    CHECK(fast.at(500) == on_interval(m.t, power(R("1/2"), 500)));

    // Pre-periodic: the first repeat fixes the smallest pre-period.
    auto y = y_tree();
    PLSelfMap fold_in(y, {vertex(y, "c"), vertex(y, "c"), vertex(y, "a"), vertex(y, "b")});
    auto pre = orbit(fold_in, vertex(y, "d"), 50);
    REQUIRE(pre.cycle());
    CHECK(pre.cycle()->preperiod == 3);
    CHECK(pre.cycle()->period == 1);
}

TEST_CASE("omega-limit examples") {
    IntervalMaps m;
    auto w = omega_limit(m.reflection, m.p("3/10"), kEps);
    CHECK(w.kind == OmegaKind::ExactPeriodicOrbit);
    CHECK(w.points == std::vector<TreePoint>{m.p("3/10"), m.p("7/10")});

    auto c = omega_limit(m.contraction, m.p("1"), kEps, 2000);
    CHECK(c.kind == OmegaKind::ExactPeriodicOrbit);
    CHECK(c.attracted);
    CHECK(c.points == std::vector<TreePoint>{m.p("0")});

    // Without acceleration the limit is only approximated.
    OmegaSet approx = omega_limit(orbit(m.contraction, m.p("1"), 2000, OrbitOptions{false}), kEps);
    CHECK(approx.kind == OmegaKind::ToleranceApproximation);
    REQUIRE(approx.points.size() == 1);
    CHECK(distance(approx.points[0], m.p("0")) < kEps);

    // A slowly contracting flip: plain iteration stays unresolved at a short
    // horizon, the progression of second iterates pins the fixed point 1/2.
    auto slow = interval_map(m.t, "1/1000", "999/1000");
    auto pinned = omega_limit(slow, m.p("0"), kEps, 40);
    CHECK(pinned.kind == OmegaKind::ExactPeriodicOrbit);
    CHECK(pinned.points == std::vector<TreePoint>{m.p("1/2")});
    auto u = omega_limit(orbit(slow, m.p("0"), 40, OrbitOptions{false}), kEps);
    CHECK(u.kind == OmegaKind::Unresolved);
    CHECK_FALSE(u.resolved());
    CHECK_THROWS_AS(omega_limit(slow, m.p("0"), Rational(0), 10), InvalidArgumentError);
}

TEST_CASE("periodic-point examples") {
    IntervalMaps m;
    auto id = periodic_points(m.identity, 3);
    CHECK(id.points.empty());
    REQUIRE(id.segments.size() == 1);
    CHECK(id.segments[0].period == 1);
    CHECK(id.segments[0].piece.hi - id.segments[0].piece.lo == 1);

    auto refl = periodic_points(m.reflection, 2);
    REQUIRE(refl.points.size() == 1);
    CHECK(refl.points[0].point == m.p("1/2"));
    CHECK(refl.points[0].period == 1);
    REQUIRE(refl.segments.size() == 1);
    CHECK(refl.segments[0].period == 2);
    for (const char* s : {"0", "1/7", "3/10", "2/3", "1"}) CHECK(minimal_period(m.reflection, m.p(s), 8) == 2);

    auto con = periodic_points(m.contraction, 6);
    REQUIRE(con.points.size() == 1);
    CHECK(con.points[0].point == m.p("0"));
    CHECK(con.points[0].period == 1);
    CHECK(con.segments.empty());

    CHECK_THROWS_AS(periodic_points(m.identity, 0), InvalidArgumentError);
    std::vector<Rational> halves{R("1/2"), R("1/2")};
    auto path = MetricTree::path(halves);
    PLSelfMap tent(path, {vertex(path, "0"), vertex(path, "2"), vertex(path, "0")});
    CHECK_THROWS_AS(periodic_points(tent, 12, 64), ResourceError);
}

TEST_CASE("periodic points on a rotating Y") {
    auto y = y_tree();
    PLSelfMap rot(y, {vertex(y, "c"), vertex(y, "b"), vertex(y, "d"), vertex(y, "a")});
    auto set = periodic_points(rot, 3);
    REQUIRE(set.points.size() == 1);
    CHECK(set.points[0].point == vertex(y, "c"));
    CHECK(set.segments.size() == 3);
    for (const auto& s : set.segments) CHECK(s.period == 3);
}

TEST_CASE("recurrence examples") {
    IntervalMaps m;
    auto fixed = classify_recurrence(m.reflection, m.p("1/2"), kEps, 100);
    CHECK(fixed.cls == RecurrenceClass::Fixed);
    auto per = classify_recurrence(m.reflection, m.p("3/10"), kEps, 100);
    CHECK(per.cls == RecurrenceClass::Periodic);
    CHECK(per.period == 2);
    auto away = classify_recurrence(m.contraction, m.p("1"), R("1/100"), 200);
    CHECK(away.cls == RecurrenceClass::NonrecurrentEvidence);
    CHECK_FALSE(away.regularly_recurrent());

    // Convergence to 0 is certified, so a point near 0 is still not recurrent.
    auto near = classify_recurrence(m.contraction, m.p("1/1000000000"), kEps, 200);
    CHECK(near.cls == RecurrenceClass::NonrecurrentEvidence);
    CHECK(classify_recurrence(m.contraction, m.p("0"), kEps, 200).cls == RecurrenceClass::Fixed);
}

TEST_CASE("pair-type examples") {
    IntervalMaps m;
    CHECK(pair_type(m.reflection, m.p("1/3"), m.p("1/3"), kEps, 100).verdict == PairVerdict::Asymptotic);
    auto both = pair_type(m.contraction, m.p("1"), m.p("1/3"), kEps, 200);
    CHECK(both.verdict == PairVerdict::Asymptotic);
    CHECK(both.stats.sup_below(kEps));
    auto distal = pair_type(m.reflection, m.p("3/10"), m.p("2/5"), R("1/100"), 100);
    CHECK(distal.verdict == PairVerdict::DistalEvidence);
    CHECK(distal.stats.inf == R("1/10"));
    CHECK(distal.stats.sup == R("1/10"));
    CHECK_THROWS_AS(pair_type(m.reflection, m.p("0"), m.p("1"), kEps, 10, kEps), InvalidArgumentError);
}

TEST_CASE("structure examples") {
    IntervalMaps m;
    std::vector<TreePoint> samples{m.p("0"), m.p("1/5"), m.p("1/2"), m.p("9/10")};
    auto refl = check_recurrence_structure(MonotoneMap::certify(m.reflection), samples, kEps, 200);
    CHECK(refl.violation_count == 0);
    for (const auto& s : refl.samples) {
        CHECK(s.omega.kind == OmegaKind::ExactPeriodicOrbit);
        CHECK(s.max_distance_to_periodic == 0);
    }
    auto con = check_recurrence_structure(MonotoneMap::certify(m.contraction), samples, kEps, 200);
    CHECK(con.violation_count == 0);
    REQUIRE(con.periodic.points.size() == 1);
    CHECK(con.periodic.points[0].point == m.p("0"));
    for (const auto& s : con.samples) {
        CHECK(s.omega.points == std::vector<TreePoint>{m.p("0")});
    }
}

TEST_CASE("random monotone maps: omega-limits are periodic orbits") {
    std::mt19937_64 rng(17);
    Rng corpus_rng(17);
    std::size_t exact = 0, approx = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto t = random_tree(rng, 3 + trial % 8);
        MonotoneMap f = random_monotone_map(corpus_rng, t);
        for (int i = 0; i < 6; ++i) {
            auto x = random_point(rng, t);
            auto w = omega_limit(f.map(), x, kEps, 2000);
            REQUIRE(w.resolved());
            auto per = periodic_points(f.map(), w.points.size());
            if (w.kind == OmegaKind::ExactPeriodicOrbit) {
                ++exact;
                for (const auto& y : w.points) {
                    CHECK(brute_period(f.map(), y, w.points.size()) == w.points.size());
                    auto d = per.distance_to(y);
                    REQUIRE(d);
                    CHECK(*d == 0);
                }
            } else {
                ++approx;
                for (const auto& y : w.points) {
                    auto d = per.distance_to(y);
                    REQUIRE(d);
                    CHECK(*d < kEps);
                }
            }
        }
    }
    CHECK(exact > 0);
    MESSAGE("exact " << exact << ", tolerance " << approx);
}

TEST_CASE("accelerated orbits agree with plain iteration") {
    std::size_t attracted = 0;
    for (const auto& entry : monotone_corpus(500, 40)) {
        const PLSelfMap& f = entry.map.map();
        Rng rng(entry.seed);
        for (int i = 0; i < 4; ++i) {
            auto x = random_point(rng, f.host());
            auto fast = orbit(f, x, 400);
            if (fast.attractor()) ++attracted;
            TreePoint y = x;
            for (std::size_t n = 0; n <= 400; ++n) {
                CHECK(fast.at(n) == y);
                y = f(y);
            }
            if (fast.attractor()) {
                // Past the certified start the displacement bound holds.
                for (std::size_t n = fast.attractor()->start; n <= 400; n += 7)
                    CHECK(distance(fast.at(n), fast.limit_point(n)) <= fast.displacement_bound(n));
            }
        }
    }
    CHECK(attracted > 0);
    MESSAGE("attracted orbits: " << attracted);
}

TEST_CASE("interval monotone omega-limits have one or two points") {
    std::mt19937_64 rng(23);
    Rng corpus_rng(23);
    TreeOptions path_options;
    for (int trial = 0; trial < 40; ++trial) {
        path_options.vertices = 2 + trial % 6;
        path_options.path = true;
        auto t = random_tree(corpus_rng, path_options);
        MonotoneMap f = random_monotone_map(corpus_rng, t);
        for (int i = 0; i < 5; ++i) {
            auto w = omega_limit(f.map(), random_point(rng, t), kEps, 2000);
            REQUIRE(w.resolved());
            CHECK(w.points.size() >= 1);
            CHECK(w.points.size() <= 2);
        }
    }
}

TEST_CASE("periodic solutions satisfy f^m(x) = x under plain iteration") {
    std::mt19937_64 rng(31);
    Rng corpus_rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = random_tree(rng, 3 + trial % 6);
        MonotoneMap f = random_monotone_map(corpus_rng, t);
        auto set = periodic_points(f.map(), 4);
        for (const auto& p : set.points) CHECK(brute_period(f.map(), p.point, 4) == p.period);
        for (const auto& s : set.segments) {
            CHECK(brute_period(f.map(), s.representative, 4) == s.period);
            for (int k = 1; k < 5; ++k) {
                TreePoint q = TreePoint::on_edge(t, s.piece.edge, s.piece.lo + (s.piece.hi - s.piece.lo) * k / 5);
                CHECK(brute_period(f.map(), q, 24) > 0);
            }
        }
    }
}

TEST_CASE("asymptotic rigidity for recurrent pairs") {
    std::mt19937_64 rng(41);
    Rng corpus_rng(41);
    std::size_t checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        auto t = random_tree(rng, 3 + trial % 8);
        MonotoneMap f = random_monotone_map(corpus_rng, t);
        auto set = periodic_points(f.map(), 3);
        std::vector<TreePoint> recurrent;
        for (const auto& p : set.points) recurrent.push_back(p.point);
        for (const auto& s : set.segments) recurrent.push_back(s.representative);
        for (std::size_t i = 0; i < recurrent.size(); ++i)
            for (std::size_t j = i + 1; j < recurrent.size(); ++j) {
                const auto& x = recurrent[i];
                const auto& y = recurrent[j];
                auto rx = classify_recurrence(f.map(), x, kEps, 400);
                auto ry = classify_recurrence(f.map(), y, kEps, 400);
                if (!rx.regularly_recurrent() || ry.cls == RecurrenceClass::NonrecurrentEvidence) continue;
                ++checked;
                CHECK(pair_type(f.map(), x, y, kEps, 400).verdict != PairVerdict::Asymptotic);
            }
    }
    CHECK(checked > 20);
}

TEST_CASE("endpoints of an image subtree are images of endpoints") {
    std::mt19937_64 rng(53);
    Rng corpus_rng(53);
    for (int trial = 0; trial < 40; ++trial) {
        auto t = random_tree(rng, 3 + trial % 8);
        MonotoneMap f = random_monotone_map(corpus_rng, t);
        for (int i = 0; i < 20; ++i) {
            std::vector<TreePoint> gens;
            for (int k = 0; k < 1 + i % 4; ++k) gens.push_back(random_point(rng, t));
            SubTree tree_T = convex_hull(gens);
            // f(T) computed from every cell breakpoint and vertex inside T.
            std::vector<TreePoint> image_pts;
            for (const auto& e : tree_T.endpoints()) image_pts.push_back(f(e));
            for (const auto& piece : tree_T.pieces()) {
                auto [b, e] = f.map().cells().cell_range(piece.edge);
                image_pts.push_back(f(TreePoint::on_edge(t, piece.edge, piece.lo)));
                image_pts.push_back(f(TreePoint::on_edge(t, piece.edge, piece.hi)));
                for (std::size_t c = b; c < e; ++c) {
                    const Cell& cell = f.map().cells().cells()[c];
                    for (const Rational& s : {cell.lo, cell.hi})
                        if (s > piece.lo && s < piece.hi) image_pts.push_back(f(TreePoint::on_edge(t, piece.edge, s)));
                }
            }
            SubTree image = convex_hull(image_pts);
            std::vector<TreePoint> end_images;
            for (const auto& e : tree_T.endpoints()) end_images.push_back(f(e));
            for (const auto& e : image.endpoints())
                CHECK(std::find(end_images.begin(), end_images.end(), e) != end_images.end());
        }
    }
}

TEST_CASE("dense periodicity only for bijective maps") {
    std::mt19937_64 rng(61);
    Rng corpus_rng(61);
    std::size_t dense = 0;
    for (int trial = 0; trial < 60; ++trial) {
        auto t = random_tree(rng, 2 + trial % 5);
        MonotoneMap f = random_monotone_map(corpus_rng, t);
        auto set = periodic_points(f.map(), 6);
        Rational covered = 0;
        for (const auto& s : set.segments) covered += s.piece.hi - s.piece.lo;
        if (covered == t->total_length()) {
            ++dense;
            CHECK(is_homeomorphism(f.map().cells()));
        }
    }
    // Rotations and reflections are the dense cases; make sure some exist.
    auto y = y_tree();
    PLSelfMap rot(y, {vertex(y, "c"), vertex(y, "b"), vertex(y, "d"), vertex(y, "a")});
    auto set = periodic_points(rot, 3);
    Rational covered = 0;
    for (const auto& s : set.segments) covered += s.piece.hi - s.piece.lo;
    CHECK(covered == y->total_length());
    CHECK(is_homeomorphism(rot.cells()));
    MESSAGE("dense periodic corpus maps: " << dense);
}

TEST_CASE("structure check on a random corpus") {
    auto corpus = monotone_corpus(5, 5);
    std::mt19937_64 rng(5);
    for (const auto& entry : corpus) {
        std::vector<TreePoint> samples;
        for (int i = 0; i < 20; ++i) samples.push_back(random_point(rng, entry.map.host()));
        auto report = check_recurrence_structure(entry.map, samples, kEps, 2000);
        CHECK(report.violation_count == 0);
        for (const auto& s : report.samples)
            for (const auto& v : s.violations) MESSAGE(v);
    }
}
