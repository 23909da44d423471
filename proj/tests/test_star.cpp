#include "dendrodyn/errors.hpp"
#include "dendrodyn/star.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace dendro;
using namespace dendro::testing;

namespace {

StarPoint random_star_point(std::mt19937_64& rng, std::int64_t max_ray = 60) {
    std::int64_t ray = static_cast<std::int64_t>(rng() % (2 * max_ray + 1)) - max_ray;
    long s = static_cast<long>(rng() % 65);
    return StarPoint(ray, ray_length(ray) * frac(s, 64));
}

StarSubtree random_star_subtree(std::mt19937_64& rng) {
    StarSubtree t;
    for (int i = 0; i < 1 + static_cast<int>(rng() % 5); ++i) {
        std::int64_t ray = static_cast<std::int64_t>(rng() % 21) - 10;
        t.set_reach(ray, ray_length(ray) * frac(static_cast<long>(rng() % 9), 8));
    }
    return t;
}

// Distance from p to the nearest point of t, through the root or along a ray.
Rational point_to_subtree(const StarPoint& p, const StarSubtree& t) {
    Rational r = t.reach(p.ray());
    return p.radius() > r ? Rational(p.radius() - r) : Rational(0);
}

// Directed Hausdorff distance by sampling each ray of a at spacing 1/grid.
Rational sampled_directed(const StarSubtree& a, const StarSubtree& b, long grid) {
    Rational best = 0;
    for (const auto& [ray, reach] : a.rays())
        for (long i = 0; i <= grid; ++i) {
            StarPoint p(ray, reach * frac(i, grid));
            best = max_of(best, point_to_subtree(p, b));
        }
    return best;
}

}  // namespace

TEST_CASE("g examples") {
    CHECK(g_apply(StarPoint::root()) == StarPoint::root());
    CHECK(g_apply(StarPoint(-1, R("1/2"))) == StarPoint(0, R("1")));
    CHECK(g_apply(StarPoint(0, R("1"))) == StarPoint(1, R("1/2")));
    CHECK(StarPoint(5, R("0")) == StarPoint::root());
    CHECK_THROWS_AS(StarPoint(2, R("1/2")), InvalidArgumentError);
    CHECK_THROWS_AS(StarPoint(0, R("-1/2")), InvalidArgumentError);
}

TEST_CASE("star distance examples") {
    StarPoint p(0, R("1/2"));
    CHECK(star_distance(p, p) == 0);
    CHECK(star_distance(StarPoint(0, R("1")), StarPoint::root()) == 1);
    CHECK(star_distance(StarPoint(0, R("1/2")), StarPoint(3, R("1/4"))) == R("3/4"));
    CHECK(star_distance(StarPoint(-2, R("1/3")), StarPoint(-2, R("1/9"))) == R("2/9"));
}

TEST_CASE("g is a bijection with an exact inverse") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 10000; ++i) {
        StarPoint p = random_star_point(rng, 1000);
        CHECK(g_inverse(g_apply(p)) == p);
        CHECK(g_apply(g_inverse(p)) == p);
    }
}

TEST_CASE("ray endpoints map to ray endpoints") {
    for (std::int64_t n = -1000; n <= 1000; ++n) {
        StarPoint tip(n, ray_length(n));
        StarPoint image = g_apply(tip);
        CHECK(image.ray() == n + 1);
        CHECK(image.radius() == ray_length(n + 1));
    }
}

TEST_CASE("every point is attracted to the root") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 300; ++i) {
        StarPoint p = random_star_point(rng, 200);
        if (p.is_root()) continue;
        // Once on a ray n >= 0 the radius strictly decreases and tends to 0.
        StarPoint q = g_power(p, p.ray() < 0 ? -p.ray() : 0);
        Rational prev = q.radius();
        for (int m = 1; m <= 200; ++m) {
            q = g_apply(q);
            CHECK(q.radius() < prev);
            prev = q.radius();
        }
        CHECK(prev * 201 <= 1);
    }
}

TEST_CASE("ray transport telescopes") {
    for (std::int64_t j = 1; j <= 300; ++j) {
        const Rational r = ray_length(-j) * frac(3, 7);
        StarPoint p(-j, r);
        StarPoint q = p;
        for (std::int64_t s = 0; s < j; ++s) q = g_apply(q);
        CHECK(q == StarPoint(0, r * (j + 1)));
        CHECK(g_power(p, j) == q);
    }
}

TEST_CASE("chordal distance never exceeds the geodesic one") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 5000; ++i) {
        StarPoint p = random_star_point(rng), q = random_star_point(rng);
        CHECK(chordal_distance(p, q) <= to_double(star_distance(p, q)) + 1e-12);
        // Distances to the root agree.
        CHECK(chordal_distance(p, StarPoint::root()) == doctest::Approx(to_double(p.radius())));
    }
}

TEST_CASE("star hausdorff examples") {
    auto t = StarSubtree::segment(2, R("1/5"));
    CHECK(star_hausdorff(t, t) == 0);
    CHECK(star_hausdorff(StarSubtree::segment(0, R("1")), StarSubtree::root()) == 1);
    StarSubtree a;
    a.set_reach(0, R("1/2"));
    a.set_reach(-1, R("1/4"));
    StarSubtree b;
    b.set_reach(0, R("1/3"));
    b.set_reach(4, R("1/5"));
    CHECK(star_hausdorff(a, b) == R("1/4"));
    CHECK_THROWS_AS(StarSubtree::segment(1, R("1")), InvalidArgumentError);
}

TEST_CASE("star hausdorff matches a sampled oracle") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 500; ++i) {
        auto a = random_star_subtree(rng), b = random_star_subtree(rng);
        const long grid = 240;
        Rational sampled = max_of(sampled_directed(a, b, grid), sampled_directed(b, a, grid));
        Rational exact = star_hausdorff(a, b);
        CHECK(sampled <= exact);
        // Sampling misses at most one grid step of the longest ray.
        CHECK(exact - sampled <= frac(1, grid));
        CHECK(star_hausdorff(g_subtree(a, 3), g_subtree(b, 3)) >= 0);
    }
}

TEST_CASE("S_lambda construction") {
    CHECK(van_der_corput(1) == R("1/2"));
    CHECK(van_der_corput(2) == R("1/4"));
    CHECK(van_der_corput(3) == R("3/4"));
    CHECK(van_der_corput(6) == R("3/8"));
    auto s1 = build_S_lambda(R("1"), 20);
    CHECK(s1.truncated.reach(-2) == R("1/4"));
    CHECK(s1.slack == frac(1, (1 << 20) + 1));
    auto half = build_S_lambda(R("1/2"), 12);
    for (unsigned n = 1; n <= 12; ++n) {
        Rational scaled = half.truncated.reach(-(std::int64_t{1} << n)) * ((1 << n) + 1);
        CHECK(scaled >= R("1/4"));
        CHECK(scaled <= R("1/2"));
    }
    CHECK(build_S_lambda(R("1/3"), 1).truncated.rays().size() == 1);
    CHECK_THROWS_AS(build_S_lambda(R("0"), 4), InvalidArgumentError);
    CHECK_THROWS_AS(build_S_lambda(R("3/2"), 4), InvalidArgumentError);
}

TEST_CASE("truncation enclosure contains the deeper truncation") {
    // A family truncated at 16 rays stands in for S_lambda when checking the
    // enclosure computed from 8 rays.
    for (const char* lam : {"1", "1/2", "1/3"}) {
        auto coarse = build_S_lambda(R(lam), 8);
        auto fine = build_S_lambda(R(lam), 16);
        auto k = StarSubtree::segment(0, R("3/5"));
        for (std::uint64_t m = 0; m <= coarse.valid_steps; m += 7) {
            Enclosure e = lambda_distance(coarse, m, k);
            Rational d = star_hausdorff(g_subtree(fine.truncated, static_cast<std::int64_t>(m)), k);
            CHECK(e.lower <= d);
            CHECK(d <= e.upper);
        }
    }
}

TEST_CASE("root approach bound") {
    for (const char* lam : {"1", "1/2", "1/3"}) {
        auto family = build_S_lambda(R(lam), 20);
        for (unsigned n = 2; n <= 12; ++n) {
            auto r = root_approach(family, n);
            CHECK(r.holds);
            CHECK(r.bound == frac(1, (1 << (n - 1)) + 1));
        }
    }
}

TEST_CASE("omega chaos certificate") {
    auto cert = omega_chaos_certificate(R("1/2"), R("1"), {R("4/5"), R("3/5")}, {20, 1 << 12, R("1/10")});
    CHECK(cert.ok());
    REQUIRE(cert.alphas.size() == 2);
    const auto& a = cert.alphas[0];
    CHECK(a.band == 1);
    REQUIRE(a.best);
    CHECK(a.best->upper <= a.best->target_bound);
    // K_alpha sits at least alpha - lambda away from every iterate of S_lambda.
    CHECK(a.separation >= R("4/5") - R("1/2") - cert.slack);
    CHECK(a.periodicity_gap == R("4/5"));

    // Band 2: alpha in (lambda/2, min(lambda'/2, lambda)].
    auto low = omega_chaos_certificate(R("1/2"), R("1"), {R("3/10")}, {20, 1 << 12, R("1/10")});
    REQUIRE(low.alphas.size() == 1);
    CHECK(low.alphas[0].band == 2);
    CHECK(low.alphas[0].ok());

    auto outside = omega_chaos_certificate(R("1/2"), R("1"), {R("1/5")}, {20, 1 << 10, R("1/10")});
    CHECK_FALSE(outside.alphas[0].ok());
    CHECK(outside.alphas[0].band == 0);
    CHECK_THROWS_AS(omega_chaos_certificate(R("1"), R("1/2"), {}), InvalidArgumentError);
    CHECK_THROWS_AS(omega_chaos_certificate(R("1/2"), R("1"), {}, {4, 1 << 10, R("1/10")}), InvalidArgumentError);
}

TEST_CASE("separated family examples") {
    auto c = entropy_certificate(2, 3);
    CHECK(c.ok());
    CHECK(c.count == 8);
    CHECK(c.pairs_checked == 28);
    CHECK(c.exhaustive);
    CHECK(c.min_separation == R("1/2"));

    auto one = entropy_certificate(1, 4);
    CHECK(one.ok());
    CHECK(one.count == 1);

    auto c35 = entropy_certificate(3, 5);
    CHECK(c35.ok());
    CHECK(c35.count == 243);
    CHECK(c35.min_separation == R("1/3"));
    CHECK(c35.log_growth == doctest::Approx(std::log(3.0)));
    // The last coordinate is only half as far apart one step earlier.
    CHECK(c35.window_separation == R("1/6"));
}

TEST_CASE("sampled certificate agrees with exhaustive enumeration") {
    for (unsigned k : {2u, 3u}) {
        for (unsigned n : {3u, 4u}) {
            auto full = entropy_certificate(k, n, 1u << 30);
            auto sampled = entropy_certificate(k, n, 20);
            CHECK(full.exhaustive);
            CHECK_FALSE(sampled.exhaustive);
            CHECK(sampled.ok());
            CHECK(sampled.min_separation == full.min_separation);
            CHECK(sampled.window_separation == full.window_separation);
            CHECK(sampled.pairs_checked <= 20);
        }
    }
}

TEST_CASE("T_sigma transport lands on ray 0 at sigma_j / k") {
    std::vector<unsigned> sigma{3, 1, 4, 2};
    auto t = t_sigma(4, sigma);
    for (std::int64_t j = 1; j <= 4; ++j) CHECK(g_subtree(t, j).reach(0) == frac(sigma[j - 1], 4));
    CHECK_THROWS_AS(t_sigma(2, {3}), InvalidArgumentError);
}
