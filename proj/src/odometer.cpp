#include "dendrodyn/odometer.hpp"

#include "dendrodyn/errors.hpp"

#include <algorithm>

namespace dendro {

namespace {

// Numerator of d_alpha over 2^N, for N small enough to fit.
std::uint64_t distance_numerator(const OdoPoint& x, const OdoPoint& y) {
    std::uint64_t num = 0;
    for (std::size_t i = 0; i < x.size(); ++i) num = 2 * num + (x[i] != y[i]);
    return num;
}

// Unchecked in-place forms for the certificate loops.
void add_in_place(const std::vector<unsigned>& bounds, OdoPoint& z, const OdoPoint& digits) {
    unsigned carry = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        unsigned s = z[i] + digits[i] + carry;
        carry = s >= bounds[i] ? 1 : 0;
        z[i] = s - carry * bounds[i];
    }
}

void increment(const std::vector<unsigned>& bounds, OdoPoint& z) {
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (++z[i] < bounds[i]) return;
        z[i] = 0;
    }
}

std::uint64_t unchecked_index(const std::vector<unsigned>& bounds, const OdoPoint& z) {
    std::uint64_t index = 0;
    for (std::size_t i = z.size(); i-- > 0;) index = index * bounds[i] + z[i];
    return index;
}

bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace

OdometerBase::OdometerBase(std::vector<unsigned> bounds) : bounds_(std::move(bounds)) {
    if (bounds_.empty()) throw InvalidArgumentError("odometer depth must be >= 1");
    for (unsigned j : bounds_)
        if (j < 2) throw InvalidArgumentError("odometer digit bounds must be >= 2");
}

OdometerBase OdometerBase::uniform(unsigned bound, std::size_t depth) {
    return OdometerBase(std::vector<unsigned>(depth, bound));
}

std::uint64_t OdometerBase::period(std::size_t m) const {
    if (m > depth()) throw InvalidArgumentError("period index beyond the depth");
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (p > (std::uint64_t{1} << 63) / bounds_[i]) throw ResourceError("odometer cycle length overflows");
        p *= bounds_[i];
    }
    return p;
}

bool OdometerBase::all_prime() const {
    for (unsigned j : bounds_)
        if (!is_prime(j)) return false;
    return true;
}

void validate(const OdometerBase& base, const OdoPoint& x) {
    if (x.size() != base.depth()) throw InvalidArgumentError("odometer point length differs from the depth");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] >= base.bounds()[i]) throw InvalidArgumentError("odometer digit out of range");
}

OdoPoint add(const OdometerBase& base, const OdoPoint& x, const OdoPoint& y) {
    validate(base, x);
    validate(base, y);
    OdoPoint z(x.size());
    unsigned carry = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        unsigned s = x[i] + y[i] + carry;
        carry = s >= base.bounds()[i] ? 1 : 0;
        z[i] = s - carry * base.bounds()[i];
    }
    return z;
}

OdoPoint add_one(const OdometerBase& base, const OdoPoint& x) {
    validate(base, x);
    OdoPoint z = x;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (++z[i] < base.bounds()[i]) break;
        z[i] = 0;
    }
    return z;
}

OdoPoint advance(const OdometerBase& base, const OdoPoint& x, std::uint64_t steps) {
    OdoPoint digits(base.depth());
    for (std::size_t i = 0; i < digits.size() && steps; ++i) {
        digits[i] = static_cast<unsigned>(steps % base.bounds()[i]);
        steps /= base.bounds()[i];
    }
    return add(base, x, digits);
}

std::uint64_t to_index(const OdometerBase& base, const OdoPoint& x) {
    validate(base, x);
    std::uint64_t index = 0;
    for (std::size_t i = x.size(); i-- > 0;) index = index * base.bounds()[i] + x[i];
    return index;
}

OdoPoint from_index(const OdometerBase& base, std::uint64_t index) {
    if (index >= base.cycle_length()) throw InvalidArgumentError("odometer index beyond the cycle");
    OdoPoint x(base.depth());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = static_cast<unsigned>(index % base.bounds()[i]);
        index /= base.bounds()[i];
    }
    return x;
}

Rational d_alpha(const OdometerBase& base, const OdoPoint& x, const OdoPoint& y) {
    validate(base, x);
    validate(base, y);
    // Numerator over 2^N, built as an integer.
    mpz_class num = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num *= 2;
        if (x[i] != y[i]) num += 1;
    }
    Rational d(num, mpz_class(1) << static_cast<mp_bitcnt_t>(x.size()));
    d.canonicalize();
    return d;
}

OdometerCertificate regular_recurrence_certificate(const OdometerBase& base, const OdoPoint& x, std::size_t depth,
                                                   std::uint64_t state_budget) {
    validate(base, x);
    if (depth > base.depth()) throw InvalidArgumentError("certificate depth exceeds the truncation depth");
    const std::uint64_t cycle = base.cycle_length();
    if (cycle > state_budget) throw ResourceError("odometer cycle exceeds the state budget");

    OdometerCertificate cert;
    cert.point = x;
    cert.depth = depth;
    cert.period = base.period(depth);
    cert.bound = pow2_inverse(static_cast<unsigned>(depth));
    cert.max_distance = 0;
    cert.prime_bounds = base.all_prime();

    const auto& bounds = base.bounds();
    // Mixed-radix digits of P_M, added once per return.
    OdoPoint step(base.depth());
    std::uint64_t rest = cert.period;
    for (std::size_t i = 0; i < step.size(); ++i) {
        step[i] = static_cast<unsigned>(rest % bounds[i]);
        rest /= bounds[i];
    }
    OdoPoint z = x;
    if (base.depth() <= 62) {
        std::uint64_t widest = 0;
        for (std::uint64_t k = 1; k * cert.period <= cycle; ++k, ++cert.returns) {
            add_in_place(bounds, z, step);
            widest = std::max(widest, distance_numerator(x, z));
        }
        cert.max_distance = Rational(mpz_class(std::to_string(widest)),
                                     mpz_class(1) << static_cast<mp_bitcnt_t>(base.depth()));
        cert.max_distance.canonicalize();
    } else {
        for (std::uint64_t k = 1; k * cert.period <= cycle; ++k, ++cert.returns) {
            add_in_place(bounds, z, step);
            Rational d = d_alpha(base, x, z);
            if (d > cert.max_distance) cert.max_distance = d;
        }
    }
    if (cert.max_distance > cert.bound)
        cert.failures.push_back("d_alpha(x, f^(k P_M) x) = " + format_rational(cert.max_distance) + " exceeds 2^-M");

    // Plain add_one steps: every state once, back to x after the full cycle.
    std::vector<bool> seen(cycle, false);
    OdoPoint y = x;
    cert.single_cycle = true;
    for (std::uint64_t n = 0; n < cycle && cert.single_cycle; ++n) {
        std::uint64_t i = unchecked_index(bounds, y);
        if (seen[i]) cert.single_cycle = false;
        seen[i] = true;
        increment(bounds, y);
    }
    if (!cert.single_cycle || y != x) {
        cert.single_cycle = false;
        cert.failures.push_back("orbit of x is not a single cycle through every state");
    }
    return cert;
}

}  // namespace dendro
