#pragma once

#include "dendrodyn/errors.hpp"
#include "dendrodyn/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace dendro {

// Iterates j in [first, first + n) are compared. The default is the usual
// window 0 <= j < n with d > eps; the star example's separated family is
// stated for 1 <= j <= n with d >= eps.
struct SeparationRule {
    std::size_t first = 0;
    bool inclusive = false;

    bool separates(const Rational& d, const Rational& eps) const { return inclusive ? d >= eps : d > eps; }
};

enum class SepMethod { ExactFamily, GreedyLowerBound };

inline std::string to_string(SepMethod m) { return m == SepMethod::ExactFamily ? "exact-family" : "greedy"; }

template <class T>
struct SepResult {
    std::size_t n = 0;
    Rational eps;
    std::size_t count = 0;
    std::vector<T> witnesses;
    SepMethod method = SepMethod::GreedyLowerBound;
};

// Orbit segments x, f(x), ..., f^(last)(x) for every pool element.
template <class T, class Step>
std::vector<std::vector<T>> orbit_segments(const std::vector<T>& pool, Step&& step, std::size_t last) {
    std::vector<std::vector<T>> out;
    out.reserve(pool.size());
    for (const auto& x : pool) {
        std::vector<T> seg{x};
        seg.reserve(last + 1);
        for (std::size_t j = 0; j < last; ++j) seg.push_back(step(seg.back()));
        out.push_back(std::move(seg));
    }
    return out;
}

namespace detail {

template <class T, class Metric>
bool separated(const std::vector<T>& a, const std::vector<T>& b, Metric& metric, std::size_t n, const Rational& eps,
               const SeparationRule& rule) {
    for (std::size_t j = rule.first; j < rule.first + n; ++j)
        if (rule.separates(metric(a[j], b[j]), eps)) return true;
    return false;
}

// Greedy scan over the pool in the given order, on precomputed segments.
template <class T, class Metric>
std::vector<std::size_t> greedy(const std::vector<std::vector<T>>& segments, Metric& metric, std::size_t n,
                                const Rational& eps, const SeparationRule& rule) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        bool ok = true;
        for (std::size_t k : kept)
            if (!separated(segments[i], segments[k], metric, n, eps, rule)) {
                ok = false;
                break;
            }
        if (ok) kept.push_back(i);
    }
    return kept;
}

template <class T>
std::vector<T> canonical(std::vector<T> pool) {
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

}  // namespace detail

// Greedy maximal (n, f, eps)-separated subset of the pool, scanned in
// ascending element order. A lower bound for sep(n, f, eps).
template <class T, class Step, class Metric>
SepResult<T> sep_lower_bound(const std::vector<T>& pool, Step&& step, Metric&& metric, std::size_t n,
                             const Rational& eps, const SeparationRule& rule = {}) {
    if (n < 1) throw InvalidArgumentError("sep_lower_bound needs n >= 1");
    if (eps <= 0) throw InvalidArgumentError("sep_lower_bound needs eps > 0");
    if (pool.empty()) throw InvalidArgumentError("sep_lower_bound needs a nonempty pool");
    std::vector<T> sorted = detail::canonical(pool);
    auto segments = orbit_segments(sorted, step, rule.first + n - 1);
    SepResult<T> result;
    result.n = n;
    result.eps = eps;
    for (std::size_t i : detail::greedy(segments, metric, n, eps, rule)) result.witnesses.push_back(sorted[i]);
    result.count = result.witnesses.size();
    return result;
}

// Independent pairwise re-check of a witness family.
template <class T, class Step, class Metric>
bool verify_separated(const std::vector<T>& family, Step&& step, Metric&& metric, std::size_t n, const Rational& eps,
                      const SeparationRule& rule = {}) {
    for (std::size_t a = 0; a < family.size(); ++a)
        for (std::size_t b = a + 1; b < family.size(); ++b) {
            T x = family[a], y = family[b];
            bool found = false;
            for (std::size_t j = 0; j < rule.first + n && !found; ++j) {
                if (j >= rule.first && rule.separates(metric(x, y), eps)) found = true;
                x = step(x);
                y = step(y);
            }
            if (!found) return false;
        }
    return true;
}

struct CurveRow {
    std::size_t n = 0;
    Rational eps;
    std::size_t count = 0;
    double rate = 0;  // (1/n) log count
};

// Lower-bound growth table over n = 1..n_max and the given eps values. A
// family separated at (n', eps') is also separated at every n >= n' and
// eps <= eps', so each count is the best greedy count over such cells: rates
// never increase with eps and counts never decrease with n.
template <class T, class Step, class Metric>
std::vector<CurveRow> entropy_curve(const std::vector<T>& pool, Step&& step, Metric&& metric, std::size_t n_max,
                                    const std::vector<Rational>& eps_values, const SeparationRule& rule = {}) {
    if (n_max < 1) throw InvalidArgumentError("entropy_curve needs n_max >= 1");
    if (pool.empty()) throw InvalidArgumentError("entropy_curve needs a nonempty pool");
    std::vector<T> sorted = detail::canonical(pool);
    auto segments = orbit_segments(sorted, step, rule.first + n_max - 1);
    const std::size_t m = eps_values.size();
    std::vector<std::vector<std::size_t>> raw(m, std::vector<std::size_t>(n_max + 1, 0));
    for (std::size_t e = 0; e < m; ++e) {
        if (eps_values[e] <= 0) throw InvalidArgumentError("entropy_curve needs eps > 0");
        for (std::size_t n = 1; n <= n_max; ++n) raw[e][n] = detail::greedy(segments, metric, n, eps_values[e], rule).size();
    }
    std::vector<CurveRow> rows;
    for (std::size_t e = 0; e < m; ++e)
        for (std::size_t n = 1; n <= n_max; ++n) {
            CurveRow row;
            row.n = n;
            row.eps = eps_values[e];
            for (std::size_t f = 0; f < m; ++f)
                if (eps_values[f] >= eps_values[e])
                    for (std::size_t k = 1; k <= n; ++k) row.count = std::max(row.count, raw[f][k]);
            row.rate = std::log(static_cast<double>(row.count)) / static_cast<double>(n);
            rows.push_back(std::move(row));
        }
    return rows;
}

}  // namespace dendro
