#pragma once

#include "dendrodyn/dynamics.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dendro {

// Nonempty finite subset of a tree, sorted and free of duplicates.
class FiniteSet {
public:
    // Throws InvalidArgumentError when empty or on mixed hosts.
    static FiniteSet of(std::vector<TreePoint> points);

    const TreeHandle& host() const { return points_.front().host(); }
    const std::vector<TreePoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }

    friend bool operator==(const FiniteSet& a, const FiniteSet& b) { return a.points_ == b.points_; }
    friend bool operator<(const FiniteSet& a, const FiniteSet& b) { return a.points_ < b.points_; }

private:
    explicit FiniteSet(std::vector<TreePoint> points) : points_(std::move(points)) {}
    std::vector<TreePoint> points_;
};

// A point of F_n(X) or of T_n(X) / C(X).
using HyperElement = std::variant<FiniteSet, SubTree>;

const TreeHandle& host_of(const HyperElement& e);
// Generators: the points of a finite set, the endpoints of a subtree.
const std::vector<TreePoint>& generators(const HyperElement& e);
std::string describe(const HyperElement& e);

// Exact Hausdorff distance. Subtrees are handled through their endpoints;
// a finite set against a subtree is evaluated at the breakpoints of the
// piecewise slope +-1 distance envelope on each edge piece.
Rational hausdorff(const HyperElement& a, const HyperElement& b);

// Pointwise image; collisions lower the cardinality.
FiniteSet induced_Fn(const PLSelfMap& f, const FiniteSet& a);

// f(T) = hull of the images of the endpoints, exact for monotone f.
SubTree induced_Tn(const MonotoneMap& f, const SubTree& t);

HyperElement induced(const MonotoneMap& f, const HyperElement& e);

// Orbit of a hyperelement under the induced map, built lazily from the
// orbits of its generators: for monotone f, f^n([S]) = [f^n(S)].
class HyperOrbit {
public:
    HyperOrbit(HyperElement base, std::vector<OrbitRecord> coordinates, std::size_t horizon);

    const HyperElement& base() const { return base_; }
    const std::vector<OrbitRecord>& coordinates() const { return coordinates_; }
    std::size_t horizon() const { return horizon_; }
    // Exact element; beyond the horizon only once every generator has settled.
    HyperElement at(std::size_t n) const;
    // Exact cycle of elements when every generator orbit cycles exactly.
    const std::optional<Cycle>& cycle() const { return cycle_; }

    // Index from which every generator follows its periodic limit.
    std::optional<std::size_t> settled_from() const;
    std::size_t limit_period() const;
    // Element generated by the limit points at time n.
    HyperElement limit_element(std::size_t n) const;
    // d_H(at(n), limit_element(n)) is at most this: d_H is 1-Lipschitz in the
    // generators for finite sets, and hulls move no further than their
    // generators.
    Rational displacement_bound(std::size_t n) const;

private:
    HyperElement base_;
    std::vector<OrbitRecord> coordinates_;
    std::size_t horizon_;
    std::optional<Cycle> cycle_;
};

HyperOrbit hyper_orbit(const MonotoneMap& f, const HyperElement& e, std::size_t horizon);

// inf / sup of d_H over n in [horizon / 2, horizon], from the limit elements
// plus a displacement radius when both orbits have settled. Given eps, a
// radius that leaves a comparison with eps open triggers exact enumeration.
TailStats hyper_tail_stats(const HyperOrbit& a, const HyperOrbit& b, std::optional<Rational> eps = std::nullopt);

struct HyperOmega {
    std::vector<HyperElement> members;  // orbit order for resolved sets
    OmegaKind kind = OmegaKind::Unresolved;
    bool attracted = false;  // exact limit cycle reached only asymptotically
    // Each member's forward orbit comes within eps of every other member.
    // Exact for an exact periodic orbit, evidence otherwise.
    bool minimal = false;
    Rational eps;
    std::size_t horizon = 0;
};

HyperOmega hyper_omega(const HyperOrbit& orbit, const MonotoneMap& f, const Rational& eps,
                       std::size_t max_period = 64);
HyperOmega hyper_omega(const MonotoneMap& f, const HyperElement& e, const Rational& eps,
                       std::size_t horizon = 10000, std::size_t max_period = 64);

struct CompanionCertificate {
    HyperElement companion;
    Rational tail_sup;        // upper bound on d_H(f^m E, f^m B) over the tail window
    bool asymptotic = false;  // tail_sup < eps
    RecurrenceClass recurrence = RecurrenceClass::NonrecurrentEvidence;
    std::size_t rr_step = 0;
    std::optional<Rational> periodic_distance;  // d_H(B, nearest exactly periodic hyperpoint)
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

// Companion per coordinate: the point of the limit orbit of x_i in phase with
// it, so d(f^m x_i, f^m y_i) -> 0. Without a certified limit, y_i is a point
// of the approximate omega(x_i), snapped to an exact periodic point, that
// minimises the tail sup. Subtrees use their endpoints and return the hull.
// `periodic` may carry a precomputed periodic_points result for f.
CompanionCertificate asymptotic_companion(const MonotoneMap& f, const HyperElement& e, const Rational& eps,
                                          std::size_t horizon = 10000, const PeriodicSet* periodic = nullptr);

// Regular recurrence of a hyperelement under the induced map: the smallest
// N <= max_step with d_H(E, F^{kN} E) < eps for every kN <= horizon.
RecurrenceReport classify_hyper_recurrence(const HyperOrbit& orbit, const Rational& eps, std::size_t max_step = 64);

}  // namespace dendro
