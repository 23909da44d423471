#pragma once

#include "dendrodyn/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dendro {

// Point of the star dendrite S: a radius on ray n. Ray n <= 0 leaves the
// origin at angle pi / (|n| + 2), ray n >= 0 at pi - pi / (n + 2); both
// have length 1 / (|n| + 1). Radius 0 is the root, stored on ray 0.
class StarPoint {
public:
    StarPoint() = default;
    // Throws InvalidArgumentError outside 0 <= radius <= 1 / (|ray| + 1).
    StarPoint(std::int64_t ray, Rational radius);
    static StarPoint root() { return StarPoint(); }

    std::int64_t ray() const { return ray_; }
    const Rational& radius() const { return radius_; }
    bool is_root() const { return radius_ == 0; }
    std::string describe() const;

    friend bool operator==(const StarPoint&, const StarPoint&) = default;
    friend bool operator<(const StarPoint& a, const StarPoint& b) {
        return a.ray_ != b.ray_ ? a.ray_ < b.ray_ : a.radius_ < b.radius_;
    }

private:
    std::int64_t ray_ = 0;
    Rational radius_ = 0;
};

Rational ray_length(std::int64_t ray);
double ray_angle(std::int64_t ray);
// g^m scales ray n onto ray n + m by (|n| + 1) / (|n + m| + 1).
Rational transport_scale(std::int64_t ray, std::int64_t steps);

StarPoint g_apply(const StarPoint& p);
StarPoint g_inverse(const StarPoint& p);
// g^steps for any integer steps.
StarPoint g_power(const StarPoint& p, std::int64_t steps);

// Geodesic metric: along a ray or through the root.
Rational star_distance(const StarPoint& p, const StarPoint& q);
// Euclidean distance of the plane embedding; never exceeds the geodesic one.
double chordal_distance(const StarPoint& p, const StarPoint& q);

// Finite union of initial segments [0, reach(n)] of rays; always holds the root.
class StarSubtree {
public:
    StarSubtree() = default;
    static StarSubtree root() { return StarSubtree(); }
    // K_alpha = [0, alpha] on ray 0.
    static StarSubtree segment(std::int64_t ray, const Rational& reach);

    // Throws InvalidArgumentError outside the ray; reach 0 removes the ray.
    void set_reach(std::int64_t ray, const Rational& reach);
    Rational reach(std::int64_t ray) const;
    const std::map<std::int64_t, Rational>& rays() const { return reach_; }
    bool contains(const StarPoint& p) const;
    std::string describe() const;

    friend bool operator==(const StarSubtree&, const StarSubtree&) = default;
    friend bool operator<(const StarSubtree& a, const StarSubtree& b) { return a.reach_ < b.reach_; }

private:
    std::map<std::int64_t, Rational> reach_;
};

StarSubtree g_subtree(const StarSubtree& t, std::int64_t steps = 1);

// Exact: every ray contributes |reach_A - reach_B|, the distance from the
// longer tip to the other set, which always holds the root.
Rational star_hausdorff(const StarSubtree& a, const StarSubtree& b);

// Van der Corput base-2 sequence, n >= 1: 1/2, 1/4, 3/4, 1/8, ...
Rational van_der_corput(std::uint64_t n);
// h_lambda(a_n) = lambda a_n / 2 + lambda / 2.
Rational a_lambda(const Rational& lambda, std::uint64_t n);

// S_lambda truncated to its first `rays` segments J_{-2^n}, n = 1..rays.
struct LambdaFamily {
    Rational lambda;
    unsigned rays = 0;
    StarSubtree truncated;
    // For 0 <= m <= 2^rays the omitted segments of g^m(S_lambda) have radius
    // at most slack = 1 / (2^rays + 1).
    Rational slack;
    std::uint64_t valid_steps = 0;  // 2^rays
};

// Throws InvalidArgumentError unless 0 < lambda <= 1 and 1 <= rays <= 60.
LambdaFamily build_S_lambda(const Rational& lambda, unsigned rays);

// Certified interval for d_H(g^m(S_lambda), b): the truncated part is exact
// and the omitted segments lie within slack of the root.
struct Enclosure {
    Rational lower;
    Rational upper;
};
Enclosure lambda_distance(const LambdaFamily& family, std::uint64_t steps, const StarSubtree& b);

// d_H(g^(2^n + 2^(n-1))(S_lambda), {0}) against 1 / (2^(n-1) + 1).
struct RootApproach {
    unsigned n = 0;
    std::uint64_t steps = 0;
    Rational upper;
    Rational bound;
    bool holds = false;
};
RootApproach root_approach(const LambdaFamily& family, unsigned n);

struct WitnessIterate {
    unsigned n = 0;
    std::uint64_t steps = 0;  // 2^n
    Rational upper;           // certified upper bound on d_H(K_alpha, g^steps(S))
    Rational target_bound;     // max{1 / (2^(n-1) + 1), |a(n) - alpha|}
};

struct AlphaReport {
    Rational alpha;
    // 1: K_alpha in omega(S_lambda') minus omega(S_lambda), alpha in (lambda, lambda'].
    // 2: K_alpha in omega(S_lambda) minus omega(S_lambda'), alpha in (lambda/2, min(lambda'/2, lambda)].
    int band = 0;
    std::vector<WitnessIterate> witnesses;  // iterates within tolerance, increasing n
    std::optional<WitnessIterate> best;
    Rational separation;        // lower bound of d_H(K_alpha, g^m(other family)), m <= horizon
    Rational periodicity_gap;   // min of d_H(K_alpha, g^m(K_alpha)), 1 <= m <= horizon
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

struct OmegaChaosOptions {
    unsigned rays = 20;
    std::uint64_t horizon = 4096;
    Rational tolerance = frac(1, 10);
};

struct OmegaChaosCertificate {
    Rational lambda;
    Rational lambda_prime;
    unsigned rays = 0;
    std::uint64_t horizon = 0;
    Rational slack;
    std::vector<RootApproach> root_lambda;
    std::vector<RootApproach> root_lambda_prime;
    std::vector<AlphaReport> alphas;
    std::vector<std::string> failures;

    bool ok() const;
};

// Throws InvalidArgumentError unless 0 < lambda < lambda' <= 1 and the
// horizon stays within 2^rays. An alpha outside both bands is reported as a
// failure of that alpha.
OmegaChaosCertificate omega_chaos_certificate(const Rational& lambda, const Rational& lambda_prime,
                                              const std::vector<Rational>& alphas,
                                              const OmegaChaosOptions& options = {});

// Seeded sample of `count` distinct alphas in (lo, hi] on the 1/denominator
// grid of that interval, in increasing order.
std::vector<Rational> sample_alphas(const Rational& lo, const Rational& hi, std::size_t count, std::uint64_t seed,
                                    unsigned denominator = 1024);

// Seeded pool of star points: ray uniform in [-max_ray, max_ray], radius a
// multiple of 1/denominator of the ray length. Duplicates are kept.
std::vector<StarPoint> star_pool(std::uint64_t seed, std::size_t size, std::int64_t max_ray = 100,
                                 unsigned denominator = 64);

// T_sigma: segment sigma_j / (k (j + 1)) on ray -j for j = 1..n.
StarSubtree t_sigma(unsigned k, const std::vector<unsigned>& sigma);

struct EntropyCertificate {
    unsigned k = 0;
    unsigned n = 0;
    std::uint64_t count = 0;          // k^n subtrees, pairwise separated
    std::uint64_t pairs_checked = 0;  // pairs verified by full d_H enumeration
    bool exhaustive = false;          // every pair enumerated
    // min over pairs of max_{1 <= j <= n} d_H(g^j T, g^j T'), at least 1/k.
    Rational min_separation;
    // The same over 0 <= j < n, the window of an (n, C(g), eps)-separated set.
    Rational window_separation;
    double log_growth = 0;  // (1/n) log count = log k
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

// Enumerates all pairs when C(k^n, 2) <= pair_budget. Beyond it, pairs that
// differ in coordinate j are separated by ray j's reach alone (d_H is the max
// of the per-ray reach differences); that per-coordinate bound is verified
// exactly and a seeded sample of pair_budget pairs is enumerated as a cross
// check. Throws ResourceError when k^n exceeds 2^40.
EntropyCertificate entropy_certificate(unsigned k, unsigned n, std::uint64_t pair_budget = 100000);

}  // namespace dendro
