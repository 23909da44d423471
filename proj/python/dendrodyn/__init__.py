"""Exact dynamics of monotone maps on metric trees.

Trees, maps, points and hyperspace elements are plain dicts in the JSON
shapes of the command line tool. Exact quantities come back as Fraction.
"""

import json
from fractions import Fraction

from . import _core
from ._core import (
    HostMismatchError,
    InvalidArgumentError,
    NotMonotoneError,
    ParseError,
    ResourceError,
)

__all__ = [
    "HostMismatchError",
    "InvalidArgumentError",
    "NotMonotoneError",
    "ParseError",
    "ResourceError",
    "asymptotic_companion",
    "classify_recurrence",
    "distance",
    "evaluate",
    "hausdorff",
    "hull",
    "is_monotone",
    "normalize_tree",
    "odometer_certificate",
    "omega_chaos_certificate",
    "omega_limit",
    "periodic_points",
    "star_entropy_certificate",
    "star_entropy_curve",
]


def _enc(value):
    return json.dumps(value)


def _rat(value):
    return value if isinstance(value, str) else f"{Fraction(value).numerator}/{Fraction(value).denominator}"


def normalize_tree(tree):
    return json.loads(_core.normalize_tree(_enc(tree)))


def distance(tree, p, q):
    return Fraction(_core.distance(_enc(tree), _enc(p), _enc(q)))


def hull(tree, points):
    return json.loads(_core.hull(_enc(tree), _enc(list(points))))


def hausdorff(tree, a, b):
    return Fraction(_core.hausdorff(_enc(tree), _enc(a), _enc(b)))


def evaluate(map_, point):
    return json.loads(_core.evaluate(_enc(map_), _enc(point)))


def is_monotone(map_):
    return json.loads(_core.is_monotone(_enc(map_)))


def omega_limit(map_, point, eps=Fraction(1, 10**6), horizon=10000):
    return json.loads(_core.omega_limit(_enc(map_), _enc(point), _rat(eps), horizon))


def classify_recurrence(map_, point, eps=Fraction(1, 10**6), horizon=10000):
    return json.loads(_core.classify_recurrence(_enc(map_), _enc(point), _rat(eps), horizon))


def periodic_points(map_, max_period=64):
    return json.loads(_core.periodic_points(_enc(map_), max_period))


def asymptotic_companion(map_, element, eps=Fraction(1, 10**6), horizon=10000):
    return json.loads(_core.asymptotic_companion(_enc(map_), _enc(element), _rat(eps), horizon))


def odometer_certificate(base, point, depth):
    return json.loads(_core.odometer_certificate(list(base), list(point), depth))


def star_entropy_certificate(k, n, pair_budget=100000):
    return json.loads(_core.star_entropy_certificate(k, n, pair_budget))


def omega_chaos_certificate(lambda_, lambda_prime, alphas, rays=20, horizon=4096):
    return json.loads(
        _core.omega_chaos_certificate(_rat(lambda_), _rat(lambda_prime), [_rat(a) for a in alphas], rays, horizon)
    )


def star_entropy_curve(seed, pool, n_max, eps):
    return json.loads(_core.star_entropy_curve(seed, pool, n_max, [_rat(e) for e in eps]))["rows"]
