#pragma once

#include "dendrodyn/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dendro {

// Digit bounds j_1..j_N of an adding machine truncated at depth N.
class OdometerBase {
public:
    // Throws InvalidArgumentError unless every bound is >= 2 and N >= 1.
    explicit OdometerBase(std::vector<unsigned> bounds);
    static OdometerBase uniform(unsigned bound, std::size_t depth);

    const std::vector<unsigned>& bounds() const { return bounds_; }
    std::size_t depth() const { return bounds_.size(); }
    // j_1 * ... * j_m; throws ResourceError past 2^63.
    std::uint64_t period(std::size_t m) const;
    std::uint64_t cycle_length() const { return period(depth()); }
    bool all_prime() const;

    friend bool operator==(const OdometerBase&, const OdometerBase&) = default;

private:
    std::vector<unsigned> bounds_;
};

using OdoPoint = std::vector<unsigned>;

// Throws InvalidArgumentError on a wrong length or an out-of-range digit.
void validate(const OdometerBase& base, const OdoPoint& x);

// Digit-wise addition with carries; a carry out of digit N is discarded.
OdoPoint add(const OdometerBase& base, const OdoPoint& x, const OdoPoint& y);
OdoPoint add_one(const OdometerBase& base, const OdoPoint& x);
// add_one applied `steps` times, by adding the mixed-radix digits of steps.
OdoPoint advance(const OdometerBase& base, const OdoPoint& x, std::uint64_t steps);

// Mixed-radix value x_1 + j_1 x_2 + j_1 j_2 x_3 + ...
std::uint64_t to_index(const OdometerBase& base, const OdoPoint& x);
OdoPoint from_index(const OdometerBase& base, std::uint64_t index);

// Sum over i <= N of delta(x_i, y_i) / 2^i. Throws InvalidArgumentError on
// points of different length.
Rational d_alpha(const OdometerBase& base, const OdoPoint& x, const OdoPoint& y);

struct OdometerCertificate {
    OdoPoint point;
    std::size_t depth = 0;         // M
    std::uint64_t period = 1;      // P_M
    std::uint64_t returns = 0;     // k checked, k * P_M <= full cycle
    Rational max_distance;         // max d_alpha(x, f^{k P_M} x)
    Rational bound;                // 2^-M
    bool single_cycle = false;     // orbit of x visits every state once per cycle
    bool prime_bounds = false;     // needed for conjugacy with a minimal set
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

// Regular recurrence at eps = 2^-M with step P_M, over one full cycle, plus
// the single-cycle check. Throws InvalidArgumentError when M > N and
// ResourceError when the cycle exceeds `state_budget`.
OdometerCertificate regular_recurrence_certificate(const OdometerBase& base, const OdoPoint& x, std::size_t depth,
                                                   std::uint64_t state_budget = std::uint64_t{1} << 26);

}  // namespace dendro
