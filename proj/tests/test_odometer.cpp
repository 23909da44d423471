#include "dendrodyn/errors.hpp"
#include "dendrodyn/odometer.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace dendro;
using namespace dendro::testing;

namespace {

// Mixed-radix value computed digit by digit, independent of the library.
std::uint64_t value_of(const std::vector<unsigned>& bounds, const OdoPoint& x) {
    std::uint64_t v = 0, weight = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        v += x[i] * weight;
        weight *= bounds[i];
    }
    return v;
}

// Sum of 1/2^i over differing digits, term by term.
Rational metric_oracle(const OdoPoint& x, const OdoPoint& y) {
    Rational sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[i]) sum += pow2_inverse(static_cast<unsigned>(i + 1));
    return sum;
}

}  // namespace

TEST_CASE("add_one examples") {
    auto b2 = OdometerBase::uniform(2, 3);
    CHECK(add_one(b2, {0, 0, 0}) == OdoPoint{1, 0, 0});
    CHECK(add_one(b2, {1, 1, 0}) == OdoPoint{0, 0, 1});
    OdometerBase b23({2, 3});
    CHECK(add_one(b23, {1, 2}) == OdoPoint{0, 0});
    CHECK(add(b23, {1, 1}, {1, 0}) == OdoPoint{0, 2});
}

TEST_CASE("invalid bases and points") {
    CHECK_THROWS_AS(OdometerBase({}), InvalidArgumentError);
    CHECK_THROWS_AS(OdometerBase({2, 1}), InvalidArgumentError);
    OdometerBase b({2, 3});
    CHECK_THROWS_AS(add_one(b, {0, 3}), InvalidArgumentError);
    CHECK_THROWS_AS(add_one(b, {0}), InvalidArgumentError);
    CHECK_THROWS_AS(d_alpha(b, {0, 0}, {0}), InvalidArgumentError);
    CHECK_THROWS_AS(regular_recurrence_certificate(b, {0, 0}, 3), InvalidArgumentError);
}

TEST_CASE("d_alpha examples") {
    auto b = OdometerBase::uniform(3, 4);
    CHECK(d_alpha(b, {1, 2, 0, 1}, {1, 2, 0, 1}) == 0);
    CHECK(d_alpha(b, {0, 0, 0, 0}, {1, 0, 0, 0}) == R("1/2"));
    CHECK(d_alpha(b, {0, 1, 0, 0}, {0, 2, 0, 0}) == R("1/4"));
    CHECK(d_alpha(b, {0, 0, 0, 0}, {1, 1, 1, 1}) == R("15/16"));
}

TEST_CASE("add_one is the successor in mixed radix") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<unsigned> bounds;
        for (int i = 0; i < 1 + trial % 7; ++i) bounds.push_back(2 + rng() % 5);
        OdometerBase b(bounds);
        std::uint64_t cycle = 1;
        for (unsigned j : bounds) cycle *= j;
        OdoPoint x(bounds.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng() % bounds[i];
        CHECK(value_of(bounds, add_one(b, x)) == (value_of(bounds, x) + 1) % cycle);
        std::uint64_t steps = rng() % (3 * cycle);
        CHECK(value_of(bounds, advance(b, x, steps)) == (value_of(bounds, x) + steps) % cycle);
        CHECK(to_index(b, x) == value_of(bounds, x));
        CHECK(from_index(b, value_of(bounds, x)) == x);
    }
}

TEST_CASE("add_one is a single cycle through every state") {
    for (const auto& bounds : std::vector<std::vector<unsigned>>{{2, 2, 2}, {2, 3}, {3, 2, 5}, {4, 4}}) {
        OdometerBase b(bounds);
        std::set<OdoPoint> seen;
        OdoPoint x(bounds.size(), 0);
        for (std::uint64_t n = 0; n < b.cycle_length(); ++n) {
            CHECK(seen.insert(x).second);
            x = add_one(b, x);
        }
        CHECK(x == OdoPoint(bounds.size(), 0));
        CHECK(seen.size() == b.cycle_length());
    }
}

TEST_CASE("d_alpha matches the term-by-term sum and is a metric on the quotient") {
    std::mt19937_64 rng(5);
    auto b = OdometerBase({2, 3, 2, 5, 2, 2});
    auto draw = [&] {
        OdoPoint x(b.depth());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng() % b.bounds()[i];
        return x;
    };
    for (int trial = 0; trial < 2000; ++trial) {
        auto x = draw(), y = draw(), z = draw();
        CHECK(d_alpha(b, x, y) == metric_oracle(x, y));
        CHECK(d_alpha(b, x, y) == d_alpha(b, y, x));
        CHECK(d_alpha(b, x, z) <= d_alpha(b, x, y) + d_alpha(b, y, z));
        CHECK((d_alpha(b, x, y) == 0) == (x == y));
    }
}

TEST_CASE("returns after P_M steps fix the first M digits") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<unsigned> bounds;
        for (int i = 0; i < 2 + trial % 5; ++i) bounds.push_back(2 + rng() % 4);
        OdometerBase b(bounds);
        OdoPoint x(bounds.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng() % bounds[i];
        for (std::size_t m = 0; m <= b.depth(); ++m) {
            OdoPoint y = x;
            for (std::uint64_t s = 0; s < b.period(m); ++s) y = add_one(b, y);
            for (std::size_t i = 0; i < m; ++i) CHECK(y[i] == x[i]);
            CHECK(d_alpha(b, x, y) <= pow2_inverse(static_cast<unsigned>(m)));
        }
    }
}

TEST_CASE("regular recurrence certificates") {
    OdometerBase b({2, 2});
    auto c = regular_recurrence_certificate(b, {0, 0}, 1);
    CHECK(c.ok());
    CHECK(c.period == 2);
    CHECK(c.returns == 2);
    CHECK(c.max_distance <= R("1/2"));
    CHECK(c.single_cycle);
    CHECK(c.prime_bounds);

    auto trivial = regular_recurrence_certificate(b, {1, 0}, 0);
    CHECK(trivial.ok());
    CHECK(trivial.bound == 1);

    auto deep = OdometerBase::uniform(2, 10);
    OdoPoint x{1, 0, 1, 1, 0, 0, 1, 0, 1, 1};
    auto full = regular_recurrence_certificate(deep, x, 10);
    CHECK(full.ok());
    CHECK(full.period == 1024);
    CHECK(full.max_distance == 0);
    CHECK(advance(deep, x, 1024) == x);

    // Composite bounds are certified but flagged.
    auto composite = regular_recurrence_certificate(OdometerBase({4, 6}), {3, 5}, 2);
    CHECK(composite.ok());
    CHECK_FALSE(composite.prime_bounds);
}
