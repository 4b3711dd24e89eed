"""Limit machinery for repeated subdivision: the path characteristic
polynomial recurrence, its stable ratio form, spider spectral-radius
limits, weighted quotient paths, and the degree-sequence limit rule for
full subdivision.

The ratio recurrence is the workhorse: raw path polynomials grow
geometrically in t for |x| > 2, while rho_t = phi(P_{t-1}, x)/phi(P_t, x)
stays in (0, 1) there and admits the closed-form limit (x - sqrt(x^2-4))/2.
The recurrence is written in plain arithmetic so exact types
(fractions.Fraction) flow through unchanged; that is how monotonicity is
verified past the resolution of float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from .tridiag import tridiagonal_eigenvalues
from .graphs import spider_graph  # noqa: F401  (re-exported convenience)

# rescale thresholds for the raw polynomial recurrence
_BIG = 2.0 ** 512
_SMALL = 2.0 ** -512


class PoleError(ArithmeticError):
    """The ratio recurrence stepped onto a pole (x equals a path eigenvalue)."""

    def __init__(self, x, t):
        self.x = x
        self.t = t
        super().__init__(f"ratio recurrence hit a pole at index t={t} for x={x}")


def path_charpoly(t, x):
    """Characteristic polynomial of the path on t vertices, evaluated at x.

    Three-term recurrence with p_0 = 1, p_1 = x.  Values growing beyond
    float range are returned as a scaled pair (mantissa, exponent) worth
    mantissa * 2**exponent; everything representable comes back as a
    plain float.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    x = float(x)
    prev, cur = 1.0, x
    if t == 0:
        return 1.0
    exp = 0
    for _ in range(t - 1):
        prev, cur = cur, x * cur - prev
        mag = max(abs(prev), abs(cur))
        if mag > _BIG:
            prev *= _SMALL
            cur *= _SMALL
            exp += 512
    if exp == 0:
        return cur
    m, e = math.frexp(cur)
    e += exp
    if e <= 1024:
        return math.ldexp(m, e)
    return (m, e)


def path_ratio(t, x, pole_tolerance=1e-12):
    """phi(P_{t-1}, x) / phi(P_t, x) via the stable recurrence
    rho_{t+1} = 1 / (x - rho_t), rho_1 = 1/x.

    For x > 2 the ratio lies in (0, 1) and climbs strictly in t toward
    the closed-form limit: the recurrence map is increasing and rho_1
    starts below its fixed point.  Other arguments are permitted but may
    run onto poles of the rational function, reported as PoleError with
    the offending index.  Exact numeric types are preserved (pass a
    Fraction to track the ratio exactly).
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    exact = not isinstance(x, (int, float))
    if not exact:
        x = float(x)
    if x == 0:
        raise PoleError(x, 1)
    rho = 1 / x
    for step in range(2, t + 1):
        denom = x - rho
        if exact:
            if denom == 0:
                raise PoleError(x, step)
        elif abs(denom) < pole_tolerance * max(1.0, abs(float(x))):
            raise PoleError(x, step)
        rho = 1 / denom
    return rho


@dataclass
class PathRatioState:
    """Running state of the ratio recurrence: ratio at index t for
    argument x.  advance() steps t by one."""

    x: float
    t: int = 1
    rho: float = None

    def __post_init__(self):
        if isinstance(self.x, int):
            self.x = float(self.x)
        if self.rho is None:
            self.rho = 1 / self.x

    def advance(self):
        denom = self.x - self.rho
        if denom == 0:
            raise PoleError(self.x, self.t + 1)
        self.rho = 1 / denom
        self.t += 1
        return self.rho


def path_ratio_limit(x):
    """Limit of phi(P_{t-1}, x)/phi(P_t, x) as t grows, for x > 2."""
    x = float(x)
    if x <= 2.0:
        raise ValueError(f"the ratio limit requires x > 2, got {x}")
    return 0.5 * (x - math.sqrt(x * x - 4.0))


def spider_radius_limit(d):
    """Limit of the spectral radius of the d-legged spider as the legs grow:
    2 for d in {1, 2}, d/sqrt(d-1) for d >= 3."""
    d = int(d)
    if d < 1:
        raise ValueError(f"leg count must be >= 1, got {d}")
    if d <= 2:
        return 2.0
    return d / math.sqrt(d - 1)


@dataclass(frozen=True)
class WeightedPath:
    """The weighted path on t+1 vertices whose first edge has weight
    sqrt(branch_degree) and all later edges weight 1.

    This is the equitable quotient of the d-legged spider with legs of
    length t, so its spectral radius equals the spider's.
    """

    branch_degree: int
    t: int

    def __post_init__(self):
        if self.branch_degree < 1:
            raise ValueError("branch degree must be >= 1")
        if self.t < 1:
            raise ValueError("t must be >= 1")

    @property
    def n(self):
        return self.t + 1

    def offdiagonal(self):
        e = np.ones(self.t)
        e[0] = math.sqrt(self.branch_degree)
        return e


def quotient_path_radius(d, t):
    """Spectral radius of the weighted quotient path for the d-legged
    spider with legs of length t (d >= 3)."""
    if d < 3:
        raise ValueError(f"quotient path radius requires d >= 3, got {d}")
    wp = WeightedPath(d, t)
    vals = tridiagonal_eigenvalues(np.zeros(wp.n), wp.offdiagonal())
    return float(vals[0])


def quotient_path_radius_mp(d, t, dps=60):
    """quotient_path_radius in arbitrary precision (mpmath).

    Bisection on the Sturm inertia count of the weighted path.  Needed
    when consecutive radii differ by less than float64 resolution, e.g.
    to confirm strict growth in t for long legs.  Returns an mpf.
    """
    if d < 3:
        raise ValueError(f"quotient path radius requires d >= 3, got {d}")
    WeightedPath(d, t)  # argument validation
    with mp.workdps(dps):
        n = t + 1
        e2 = [mp.mpf(d)] + [mp.mpf(1)] * (t - 1)

        def below(sigma):
            q = -sigma
            count = 1 if q < 0 else 0
            for i in range(1, n):
                if q == 0:
                    q = mp.mpf("-1e-300")
                q = -sigma - e2[i - 1] / q
                if q < 0:
                    count += 1
            return count

        lo = mp.mpf(0)
        hi = mp.sqrt(mp.mpf(d)) + 1
        target_width = mp.mpf(10) ** (-(dps - 12))
        while hi - lo > target_width:
            mid = (lo + hi) / 2
            if below(mid) == n:
                hi = mid
            else:
                lo = mid
        return (lo + hi) / 2


@dataclass(frozen=True)
class DegreeSequence:
    """Nonincreasing positive integer degrees with an even sum."""

    values: tuple

    def __post_init__(self):
        vals = tuple(sorted((int(v) for v in self.values), reverse=True))
        if not vals:
            raise ValueError("degree sequence is empty")
        if vals[-1] < 1:
            raise ValueError("degrees must be >= 1")
        if sum(vals) % 2 != 0:
            raise ValueError("degree sum must be even")
        object.__setattr__(self, "values", vals)

    @classmethod
    def of_graph(cls, graph):
        degs = graph.degrees()
        if min(degs) < 1:
            raise ValueError("graph has isolated vertices; no degree sequence limit")
        return cls(degs)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def full_subdivision_limit(degrees, k):
    """Limit of the k-th largest adjacency eigenvalue when every edge of a
    graph with the given degree sequence is subdivided without bound (the
    k-th smallest tends to the negative of the same value):
    d_k/sqrt(d_k - 1) when k <= n and d_k >= 3, else 2.
    """
    if not isinstance(degrees, DegreeSequence):
        degrees = DegreeSequence(tuple(degrees))
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k <= len(degrees) and degrees[k - 1] >= 3:
        return spider_radius_limit(degrees[k - 1])
    return 2.0
