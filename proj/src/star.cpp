#include "dendrodyn/star.hpp"

#include "dendrodyn/corpus.hpp"
#include "dendrodyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dendro {

namespace {

std::uint64_t magnitude(std::int64_t n) { return n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : n; }

Rational from_u64(std::uint64_t v) { return Rational(mpz_class(std::to_string(v))); }

}  // namespace

StarPoint::StarPoint(std::int64_t ray, Rational radius) : ray_(ray), radius_(std::move(radius)) {
    if (radius_ < 0 || radius_ > ray_length(ray_)) throw InvalidArgumentError("star radius outside its ray");
    if (radius_ == 0) ray_ = 0;
}

std::string StarPoint::describe() const {
    if (is_root()) return "root";
    return "ray " + std::to_string(ray_) + " @ " + format_rational(radius_);
}

Rational ray_length(std::int64_t ray) { return Rational(1) / from_u64(magnitude(ray) + 1); }

double ray_angle(std::int64_t ray) {
    const double pi = std::numbers::pi;
    const double m = static_cast<double>(magnitude(ray));
    return ray <= 0 ? pi / (m + 2) : pi - pi / (m + 2);
}

Rational transport_scale(std::int64_t ray, std::int64_t steps) {
    return from_u64(magnitude(ray) + 1) / from_u64(magnitude(ray + steps) + 1);
}

StarPoint g_power(const StarPoint& p, std::int64_t steps) {
    if (p.is_root()) return p;
    return StarPoint(p.ray() + steps, p.radius() * transport_scale(p.ray(), steps));
}

StarPoint g_apply(const StarPoint& p) { return g_power(p, 1); }
StarPoint g_inverse(const StarPoint& p) { return g_power(p, -1); }

Rational star_distance(const StarPoint& p, const StarPoint& q) {
    // The root sits on ray 0 at radius 0, so it needs no special case.
    if (p.ray() == q.ray()) return abs_diff(p.radius(), q.radius());
    return p.radius() + q.radius();
}

double chordal_distance(const StarPoint& p, const StarPoint& q) {
    const double rp = to_double(p.radius()), rq = to_double(q.radius());
    const double ap = ray_angle(p.ray()), aq = ray_angle(q.ray());
    return std::hypot(rp * std::cos(ap) - rq * std::cos(aq), rp * std::sin(ap) - rq * std::sin(aq));
}

StarSubtree StarSubtree::segment(std::int64_t ray, const Rational& reach) {
    StarSubtree t;
    t.set_reach(ray, reach);
    return t;
}

void StarSubtree::set_reach(std::int64_t ray, const Rational& reach) {
    if (reach < 0 || reach > ray_length(ray)) throw InvalidArgumentError("star reach outside its ray");
    if (reach == 0)
        reach_.erase(ray);
    else
        reach_[ray] = reach;
}

Rational StarSubtree::reach(std::int64_t ray) const {
    auto it = reach_.find(ray);
    return it == reach_.end() ? Rational(0) : it->second;
}

bool StarSubtree::contains(const StarPoint& p) const { return p.is_root() || p.radius() <= reach(p.ray()); }

std::string StarSubtree::describe() const {
    std::string out = "{";
    bool first = true;
    for (const auto& [ray, r] : reach_) {
        out += (first ? "" : ", ") + std::to_string(ray) + ": " + format_rational(r);
        first = false;
    }
    return out + "}";
}

StarSubtree g_subtree(const StarSubtree& t, std::int64_t steps) {
    StarSubtree image;
    for (const auto& [ray, r] : t.rays()) image.set_reach(ray + steps, r * transport_scale(ray, steps));
    return image;
}

namespace {

// sup over a of d(a, b): the largest excess of a's reach over b's on a ray.
Rational directed(const StarSubtree& a, const StarSubtree& b) {
    Rational best = 0;
    for (const auto& [ray, r] : a.rays()) {
        Rational excess = r - b.reach(ray);
        if (excess > best) best = excess;
    }
    return best;
}

}  // namespace

// One merged pass over both ray maps; a ray missing from one side has reach 0.
Rational star_hausdorff(const StarSubtree& a, const StarSubtree& b) {
    Rational best = 0, diff;
    auto ia = a.rays().begin(), ib = b.rays().begin();
    const auto ea = a.rays().end(), eb = b.rays().end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->first < ib->first)) {
            if (ia->second > best) best = ia->second;
            ++ia;
        } else if (ia == ea || ib->first < ia->first) {
            if (ib->second > best) best = ib->second;
            ++ib;
        } else {
            mpq_sub(diff.get_mpq_t(), ia->second.get_mpq_t(), ib->second.get_mpq_t());
            mpq_abs(diff.get_mpq_t(), diff.get_mpq_t());
            if (diff > best) best = diff;
            ++ia;
            ++ib;
        }
    }
    return best;
}

Rational van_der_corput(std::uint64_t n) {
    if (n == 0) throw InvalidArgumentError("van der Corput index starts at 1");
    mpz_class num = 0, den = 1;
    for (; n; n >>= 1) {
        num = 2 * num + (n & 1);
        den *= 2;
    }
    Rational v(num, den);
    v.canonicalize();
    return v;
}

Rational a_lambda(const Rational& lambda, std::uint64_t n) { return lambda * van_der_corput(n) / 2 + lambda / 2; }

LambdaFamily build_S_lambda(const Rational& lambda, unsigned rays) {
    if (!(lambda > 0 && lambda <= 1)) throw InvalidArgumentError("lambda must lie in (0, 1]");
    if (rays < 1 || rays > 60) throw InvalidArgumentError("ray count must lie in [1, 60]");
    LambdaFamily family;
    family.lambda = lambda;
    family.rays = rays;
    for (unsigned n = 1; n <= rays; ++n) {
        const std::uint64_t p = std::uint64_t{1} << n;
        family.truncated.set_reach(-static_cast<std::int64_t>(p), a_lambda(lambda, n) / from_u64(p + 1));
    }
    family.valid_steps = std::uint64_t{1} << rays;
    family.slack = Rational(1) / from_u64(family.valid_steps + 1);
    return family;
}

Enclosure lambda_distance(const LambdaFamily& family, std::uint64_t steps, const StarSubtree& b) {
    if (steps > family.valid_steps) throw InvalidArgumentError("iterate beyond the certified truncation range");
    StarSubtree image = g_subtree(family.truncated, static_cast<std::int64_t>(steps));
    Rational out = directed(image, b);
    Rational in = directed(b, image);
    Enclosure e;
    e.upper = max_of(max_of(out, in), family.slack);
    e.lower = max_of(out, in - family.slack);
    if (e.lower < 0) e.lower = 0;
    return e;
}

RootApproach root_approach(const LambdaFamily& family, unsigned n) {
    if (n < 2 || n > 62) throw InvalidArgumentError("root approach index must lie in [2, 62]");
    RootApproach r;
    r.n = n;
    r.steps = (std::uint64_t{1} << n) + (std::uint64_t{1} << (n - 1));
    r.upper = lambda_distance(family, r.steps, StarSubtree::root()).upper;
    r.bound = Rational(1) / from_u64((std::uint64_t{1} << (n - 1)) + 1);
    r.holds = r.upper <= r.bound;
    return r;
}

bool OmegaChaosCertificate::ok() const {
    if (!failures.empty()) return false;
    return std::all_of(alphas.begin(), alphas.end(), [](const AlphaReport& a) { return a.ok(); });
}

OmegaChaosCertificate omega_chaos_certificate(const Rational& lambda, const Rational& lambda_prime,
                                              const std::vector<Rational>& alphas, const OmegaChaosOptions& options) {
    if (!(lambda > 0 && lambda < lambda_prime && lambda_prime <= 1))
        throw InvalidArgumentError("need 0 < lambda < lambda' <= 1");
    if (options.horizon < 1) throw InvalidArgumentError("horizon must be >= 1");
    OmegaChaosCertificate cert;
    cert.lambda = lambda;
    cert.lambda_prime = lambda_prime;
    cert.rays = options.rays;
    cert.horizon = options.horizon;
    const LambdaFamily low = build_S_lambda(lambda, options.rays);
    const LambdaFamily high = build_S_lambda(lambda_prime, options.rays);
    cert.slack = low.slack;
    if (options.horizon > low.valid_steps) throw InvalidArgumentError("horizon exceeds 2^rays");

    // {0} lies in both omega-limit sets.
    for (unsigned n = 2; n < 62 && (std::uint64_t{3} << (n - 1)) <= options.horizon; ++n) {
        cert.root_lambda.push_back(root_approach(low, n));
        cert.root_lambda_prime.push_back(root_approach(high, n));
        if (!cert.root_lambda.back().holds || !cert.root_lambda_prime.back().holds)
            cert.failures.push_back("root approach bound fails at n = " + std::to_string(n));
    }
    if (cert.root_lambda.empty()) cert.failures.push_back("horizon too short for a root approach");

    for (const auto& alpha : alphas) {
        AlphaReport report;
        report.alpha = alpha;
        if (alpha > lambda && alpha <= lambda_prime)
            report.band = 1;
        else if (alpha > lambda / 2 && alpha <= min_of(lambda_prime / 2, lambda))
            report.band = 2;
        if (report.band == 0) {
            report.failures.push_back("alpha " + format_rational(alpha) + " outside both bands");
            cert.alphas.push_back(std::move(report));
            continue;
        }
        const LambdaFamily& near = report.band == 1 ? high : low;
        const LambdaFamily& far = report.band == 1 ? low : high;
        const StarSubtree k_alpha = StarSubtree::segment(0, alpha);

        for (unsigned n = 1; n < 62 && (std::uint64_t{1} << n) <= options.horizon; ++n) {
            WitnessIterate w;
            w.n = n;
            w.steps = std::uint64_t{1} << n;
            w.upper = lambda_distance(near, w.steps, k_alpha).upper;
            w.target_bound = max_of(Rational(1) / from_u64((std::uint64_t{1} << (n - 1)) + 1),
                                   abs_diff(a_lambda(near.lambda, n), alpha));
            if (w.upper > w.target_bound)
                report.failures.push_back("displayed bound fails at n = " + std::to_string(n));
            if (w.upper <= options.tolerance) {
                if (!report.best || w.upper < report.best->upper) report.best = w;
                report.witnesses.push_back(std::move(w));
            }
        }
        if (report.witnesses.empty()) report.failures.push_back("no witness iterate within tolerance");

        report.separation = 1;
        for (std::uint64_t m = 0; m <= options.horizon; ++m)
            report.separation = min_of(report.separation, lambda_distance(far, m, k_alpha).lower);
        if (!(report.separation > 0)) report.failures.push_back("K_alpha approached by the other family");

        report.periodicity_gap = alpha;
        for (std::uint64_t m = 1; m <= options.horizon; ++m)
            report.periodicity_gap =
                min_of(report.periodicity_gap, star_hausdorff(k_alpha, g_subtree(k_alpha, static_cast<std::int64_t>(m))));
        if (!(report.periodicity_gap > 0)) report.failures.push_back("K_alpha returns to itself");
        cert.alphas.push_back(std::move(report));
    }
    return cert;
}

StarSubtree t_sigma(unsigned k, const std::vector<unsigned>& sigma) {
    if (k < 1) throw InvalidArgumentError("k must be >= 1");
    StarSubtree t;
    for (std::size_t j = 1; j <= sigma.size(); ++j) {
        const unsigned s = sigma[j - 1];
        if (s < 1 || s > k) throw InvalidArgumentError("sigma entries must lie in 1..k");
        t.set_reach(-static_cast<std::int64_t>(j), frac(s, static_cast<long>(k * (j + 1))));
    }
    return t;
}

namespace {

std::vector<unsigned> sigma_of(std::uint64_t index, unsigned k, unsigned n) {
    std::vector<unsigned> sigma(n);
    for (unsigned j = 0; j < n; ++j, index /= k) sigma[j] = static_cast<unsigned>(index % k) + 1;
    return sigma;
}

// g^j(T_sigma) for j = 0..n.
std::vector<StarSubtree> trajectory(unsigned k, unsigned n, std::uint64_t index) {
    std::vector<StarSubtree> out{t_sigma(k, sigma_of(index, k, n))};
    for (unsigned j = 1; j <= n; ++j) out.push_back(g_subtree(out.back()));
    return out;
}

struct PairSeparation {
    Rational forward;  // max over 1 <= j <= n
    Rational window;  // max over 0 <= j < n
};

PairSeparation separation(const std::vector<StarSubtree>& a, const std::vector<StarSubtree>& b, unsigned n) {
    PairSeparation s{0, 0};
    for (unsigned j = 0; j <= n; ++j) {
        Rational d = star_hausdorff(a[j], b[j]);
        if (j >= 1) s.forward = max_of(s.forward, d);
        if (j < n) s.window = max_of(s.window, d);
    }
    return s;
}

}  // namespace

EntropyCertificate entropy_certificate(unsigned k, unsigned n, std::uint64_t pair_budget) {
    if (k < 1 || n < 1) throw InvalidArgumentError("entropy certificate needs k >= 1 and n >= 1");
    EntropyCertificate cert;
    cert.k = k;
    cert.n = n;
    std::uint64_t count = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (count > (std::uint64_t{1} << 40) / k) throw ResourceError("k^n exceeds the enumeration budget");
        count *= k;
    }
    cert.count = count;
    cert.log_growth = std::log(static_cast<double>(count)) / n;
    if (count == 1) {
        cert.exhaustive = true;
        return cert;
    }
    const Rational eps = frac(1, k);
    const std::uint64_t all_pairs = count * (count - 1) / 2;
    cert.exhaustive = all_pairs <= pair_budget;

    // Subset of subtrees whose pairs are enumerated in full.
    std::vector<std::uint64_t> chosen;
    if (cert.exhaustive) {
        for (std::uint64_t i = 0; i < count; ++i) chosen.push_back(i);
    } else {
        std::uint64_t size = 2;
        while ((size + 1) * size / 2 <= pair_budget) ++size;
        Rng rng(0x5eed0000ULL + 131 * k + n);
        std::vector<std::uint64_t> picked;
        while (picked.size() < size) {
            std::uint64_t i = rng.next() % count;
            if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
        }
        std::sort(picked.begin(), picked.end());
        chosen = std::move(picked);
    }
    std::vector<std::vector<StarSubtree>> orbits;
    orbits.reserve(chosen.size());
    for (std::uint64_t i : chosen) orbits.push_back(trajectory(k, n, i));

    std::optional<PairSeparation> worst;
    for (std::size_t a = 0; a < orbits.size(); ++a)
        for (std::size_t b = a + 1; b < orbits.size(); ++b, ++cert.pairs_checked) {
            PairSeparation s = separation(orbits[a], orbits[b], n);
            if (s.forward < eps)
                cert.failures.push_back("pair " + std::to_string(chosen[a]) + ", " + std::to_string(chosen[b]) +
                                        " separated by only " + format_rational(s.forward));
            if (!worst) {
                worst = s;
            } else {
                worst->forward = min_of(worst->forward, s.forward);
                worst->window = min_of(worst->window, s.window);
            }
        }

    if (!cert.exhaustive) {
        // Pairs differing in coordinate j: ray -j alone carries them apart.
        // The exact minimum over all pairs is attained by pairs differing in
        // one coordinate by one step.
        worst.reset();
        for (unsigned j = 1; j <= n; ++j)
            for (unsigned a = 1; a <= k; ++a)
                for (unsigned b = a + 1; b <= k; ++b) {
                    std::vector<StarSubtree> ta{StarSubtree::segment(-static_cast<std::int64_t>(j), frac(a, k * (j + 1)))};
                    std::vector<StarSubtree> tb{StarSubtree::segment(-static_cast<std::int64_t>(j), frac(b, k * (j + 1)))};
                    for (unsigned i = 1; i <= n; ++i) {
                        ta.push_back(g_subtree(ta.back()));
                        tb.push_back(g_subtree(tb.back()));
                    }
                    PairSeparation s = separation(ta, tb, n);
                    if (s.forward < eps)
                        cert.failures.push_back("coordinate " + std::to_string(j) + " values " + std::to_string(a) +
                                                ", " + std::to_string(b) + " not separated");
                    if (!worst) {
                        worst = s;
                    } else {
                        worst->forward = min_of(worst->forward, s.forward);
                        worst->window = min_of(worst->window, s.window);
                    }
                }
    }
    cert.min_separation = worst->forward;
    cert.window_separation = worst->window;
    if (cert.failures.size() > 16) cert.failures.resize(16);
    return cert;
}

}  // namespace dendro

namespace dendro {

std::vector<Rational> sample_alphas(const Rational& lo, const Rational& hi, std::size_t count, std::uint64_t seed,
                                    unsigned denominator) {
    if (hi <= lo) throw InvalidArgumentError("sample_alphas needs lo < hi");
    if (count > denominator) throw InvalidArgumentError("sample_alphas: more alphas than grid points");
    Rng rng(seed);
    std::vector<unsigned> picks;
    while (picks.size() < count) {
        unsigned i = 1 + static_cast<unsigned>(rng.below(denominator));
        if (std::find(picks.begin(), picks.end(), i) == picks.end()) picks.push_back(i);
    }
    std::sort(picks.begin(), picks.end());
    std::vector<Rational> out;
    for (unsigned i : picks) out.push_back(Rational(lo + (hi - lo) * frac(i, denominator)));
    return out;
}

std::vector<StarPoint> star_pool(std::uint64_t seed, std::size_t size, std::int64_t max_ray, unsigned denominator) {
    if (max_ray < 0 || denominator == 0) throw InvalidArgumentError("star_pool: bad parameters");
    Rng rng(seed);
    std::vector<StarPoint> out;
    out.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        std::int64_t ray = rng.between(-max_ray, max_ray);
        unsigned step = static_cast<unsigned>(rng.below(denominator + 1));
        out.emplace_back(ray, Rational(ray_length(ray) * frac(step, denominator)));
    }
    return out;
}

}  // namespace dendro
