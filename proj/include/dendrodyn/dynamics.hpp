#pragma once

#include "dendrodyn/pl_map.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace dendro {

struct Cycle {
    std::size_t preperiod = 0;
    std::size_t period = 0;
};

// Certified geometric convergence onto a periodic orbit. From `start` on,
// f is affine on every arc [limit[j], f^{start+j}(x)] and maps it onto the
// next one, so f^{start + k*period + j}(x) is the point of that arc at
// distance ratio^k * spread[j] from limit[j].
struct Attractor {
    std::size_t start = 0;
    std::size_t period = 0;
    Rational ratio;                 // in (0, 1)
    std::vector<TreePoint> limit;   // limit[j] = f^j(z), f^period(z) = z
    std::vector<Rational> spread;   // d(limit[j], f^{start+j}(x))
};

struct OrbitOptions {
    bool accelerate = true;  // look for an Attractor while iterating
    std::size_t max_period = 64;
};

// Exact forward orbit x, f(x), ..., truncated at the horizon, at the first
// repeat, or once an Attractor is certified. With a cycle or an attractor
// every iterate is available through at().
class OrbitRecord {
public:
    OrbitRecord(std::vector<TreePoint> points, std::optional<Cycle> cycle, std::size_t horizon,
                std::optional<Attractor> attractor = std::nullopt);

    const TreePoint& base() const { return points_.front(); }
    // Iterates computed explicitly.
    const std::vector<TreePoint>& points() const { return points_; }
    const std::optional<Cycle>& cycle() const { return cycle_; }
    const std::optional<Attractor>& attractor() const { return attractor_; }
    std::size_t horizon() const { return horizon_; }

    // f^n(x); throws std::out_of_range beyond the horizon when the orbit is
    // neither cyclic nor attracted.
    TreePoint at(std::size_t n) const;

    // Index from which the orbit follows its limiting periodic orbit: the
    // pre-period of a cycle or the start of an attractor.
    std::optional<std::size_t> settled_from() const;
    std::size_t limit_period() const;
    // The point of the limiting periodic orbit in phase with f^n(x), n >= settled_from().
    TreePoint limit_point(std::size_t n) const;
    // Upper bound on d(f^m(x), limit_point(m)) for every m >= n >= settled_from().
    Rational displacement_bound(std::size_t n) const;

private:
    std::vector<TreePoint> points_;
    std::optional<Cycle> cycle_;
    std::size_t horizon_;
    std::optional<Attractor> attractor_;
};

// Iterates until the horizon; the first exact repeat ends the record.
OrbitRecord orbit(const PLSelfMap& f, const TreePoint& x, std::size_t horizon, const OrbitOptions& options = {});

enum class OmegaKind { ExactPeriodicOrbit, ToleranceApproximation, Unresolved };
std::string to_string(OmegaKind kind);

struct OmegaSet {
    std::vector<TreePoint> points;  // in orbit order for resolved sets
    OmegaKind kind = OmegaKind::Unresolved;
    // ExactPeriodicOrbit reached by certified convergence rather than by
    // landing on the orbit.
    bool attracted = false;
    Rational eps;
    std::size_t horizon = 0;

    bool resolved() const { return kind != OmegaKind::Unresolved; }
};

struct OmegaOptions {
    std::size_t max_period = 64;
    std::size_t max_clusters = 256;
};

// Exact periodic orbit when the orbit cycles or is certified attracted within
// the horizon. Otherwise the tail (second half) is tested for approximate
// p-periodicity at radius eps; failing that the tail clusters are returned as
// Unresolved.
OmegaSet omega_limit(const OrbitRecord& orbit, const Rational& eps, const OmegaOptions& options = {});
OmegaSet omega_limit(const PLSelfMap& f, const TreePoint& x, const Rational& eps, std::size_t horizon = 10000,
                     const OmegaOptions& options = {});

struct PeriodicPoint {
    TreePoint point;
    std::size_t period = 0;
};

// A cell on which some iterate is the identity.
struct PeriodicSegment {
    EdgePiece piece;
    TreePoint representative;
    std::size_t period = 0;
};

struct PeriodicSet {
    std::vector<PeriodicPoint> points;
    std::vector<PeriodicSegment> segments;
    std::size_t max_period = 0;

    bool empty() const { return points.empty() && segments.empty(); }
    // Nearest periodic point or nearest point of a periodic segment.
    std::optional<TreePoint> nearest(const TreePoint& p) const;
    std::optional<Rational> distance_to(const TreePoint& p) const;
};

std::size_t minimal_period(const PLSelfMap& f, const TreePoint& x, std::size_t max_period);

// Solves f^m(x) = x cell by cell for m = 1..max_period.
PeriodicSet periodic_points(const PLSelfMap& f, std::size_t max_period, std::size_t cell_budget = 1u << 18);

enum class RecurrenceClass { Fixed, Periodic, RegularlyRecurrent, Recurrent, NonrecurrentEvidence };
std::string to_string(RecurrenceClass cls);

struct RecurrenceReport {
    RecurrenceClass cls = RecurrenceClass::NonrecurrentEvidence;
    std::size_t period = 0;  // Periodic / Fixed
    std::size_t step = 0;    // N for RegularlyRecurrent
    Rational eps;
    std::size_t horizon = 0;

    // Fix ⊂ P ⊂ RR: true for the three strongest classes.
    bool regularly_recurrent() const {
        return cls == RecurrenceClass::Fixed || cls == RecurrenceClass::Periodic ||
               cls == RecurrenceClass::RegularlyRecurrent;
    }
};

RecurrenceReport classify_recurrence(const OrbitRecord& orbit, const Rational& eps, std::size_t max_step = 64);
RecurrenceReport classify_recurrence(const PLSelfMap& f, const TreePoint& x, const Rational& eps,
                                     std::size_t horizon = 10000, std::size_t max_step = 64);

// Statistics of d(f^n x, f^n y) over a window. When `radius` is zero the
// values are exact; otherwise the true inf lies within radius of `inf` and the
// true sup within radius of `sup` (limit-orbit values plus certified
// displacement of both orbits).
struct TailStats {
    Rational inf;
    Rational sup;
    Rational radius;
    std::size_t begin = 0;  // first index of the window
    std::size_t end = 0;    // last index of the window

    bool inf_below(const Rational& eps) const { return inf + radius < eps; }
    bool sup_below(const Rational& eps) const { return sup + radius < eps; }
    bool inf_at_least(const Rational& eps) const { return inf - radius >= eps; }
    bool sup_above(const Rational& eps) const { return sup - radius > eps; }
};

// inf / sup of d(f^n x, f^n y) over n in [horizon / 2, horizon].
TailStats tail_distance_stats(const OrbitRecord& x, const OrbitRecord& y);

enum class PairVerdict { Asymptotic, ProximalNotAsymptotic, DistalEvidence, Inconclusive };
std::string to_string(PairVerdict verdict);

struct PairReport {
    PairVerdict verdict = PairVerdict::Inconclusive;
    TailStats stats;
};

// Asymptotic when the tail sup is below eps. Li-Yorke evidence when the tail
// inf is below eps while the sup exceeds `gap` (> eps) in both halves of the
// window. Distal evidence when the tail inf stays at or above eps.
// `gap` defaults to 2 * eps.
PairReport pair_type(const PLSelfMap& f, const TreePoint& x, const TreePoint& y, const Rational& eps,
                     std::size_t horizon = 10000, std::optional<Rational> gap = std::nullopt);

struct SampleCheck {
    TreePoint sample;
    OmegaSet omega;
    Rational max_distance_to_periodic;  // over ω-limit points
    std::vector<RecurrenceReport> omega_recurrence;
    std::vector<std::string> violations;
};

struct StructureReport {
    PeriodicSet periodic;
    std::vector<SampleCheck> samples;
    std::size_t violation_count = 0;
};

struct StructureOptions {
    std::size_t rr_max_step = 64;
    std::size_t max_period = 64;
    std::size_t cell_budget = 1u << 18;
};

// For each sample: every ω-limit point lies within eps of a periodic point and
// is regularly recurrent. Any failure is recorded as a violation.
StructureReport check_recurrence_structure(const MonotoneMap& f, const std::vector<TreePoint>& samples,
                                           const Rational& eps, std::size_t horizon = 10000,
                                           const StructureOptions& options = {});

}  // namespace dendro
