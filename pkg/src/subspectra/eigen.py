"""Spectral queries on graphs: full adjacency spectra, inertia-based
interval eigenvalue counts, extreme eigenvalues, and eigenpairs.

Interval counts never compute a spectrum: they run Sturm pivot counts on
the cached tridiagonal reduction of the adjacency matrix.  Open-interval
endpoints are resolved with a shift tolerance tau: an eigenvalue within
tau of an endpoint cannot be classified reliably in floating point, so
such counts carry an ambiguity flag (or, for count_below, raise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .graphs import Graph
from .tridiag import (
    householder_tridiagonalize,
    inverse_iteration,
    krylov_extreme,
    ql_implicit_shift,
    sturm_count_below,
)

DENSE_CAP_DEFAULT = 4000
SHIFT_TOLERANCE = 1e-9
# pivot magnitudes below _BREAKDOWN_RTOL * scale trigger the +-tau retry
_BREAKDOWN_RTOL = 1e-11


class CapacityError(RuntimeError):
    """Dense-path request beyond the configured size cap.

    Use extreme_eigenvalues for a few eigenvalues, or raise the cap
    explicitly if memory allows.
    """


class AmbiguousShiftError(RuntimeError):
    """An eigenvalue lies within the shift tolerance of the requested
    shift, so 'strictly below' is not numerically decidable."""

    def __init__(self, sigma, count_minus, count_plus, tolerance):
        self.sigma = sigma
        self.count_minus = count_minus
        self.count_plus = count_plus
        self.tolerance = tolerance
        super().__init__(
            f"shift {sigma} is within {tolerance} of an eigenvalue: "
            f"count below sigma-tau is {count_minus}, below sigma+tau is {count_plus}"
        )


class SolverConvergenceError(RuntimeError):
    """Iterative solver ran out of budget; carries the best Ritz values."""

    def __init__(self, message, ritz_values=None, residuals=None):
        self.ritz_values = ritz_values
        self.residuals = residuals
        super().__init__(message)


@dataclass(frozen=True)
class Spectrum:
    """All adjacency eigenvalues of a graph, sorted descending."""

    eigenvalues: tuple
    n: int
    iterations: int
    method: str = "dense-householder-ql"
    residual_bound: float | None = None

    def kth_largest(self, k):
        return self.eigenvalues[k - 1]

    def kth_smallest(self, k):
        return self.eigenvalues[self.n - k]

    def count_in(self, lower, upper):
        """#eigenvalues strictly inside (lower, upper), by direct counting."""
        return sum(1 for w in self.eigenvalues if lower < w < upper)


@dataclass(frozen=True)
class IntervalCount:
    """#eigenvalues in the open interval (lower, upper), counted by inertia.

    ambiguous_lower / ambiguous_upper are set when some eigenvalue lies
    within shift_tolerance of the corresponding finite endpoint, in which
    case the count excludes the whole tolerance sliver around it.
    """

    lower: float
    upper: float
    count: int
    n: int
    shift_tolerance: float
    ambiguous_lower: bool = False
    ambiguous_upper: bool = False

    @property
    def ambiguous(self):
        return self.ambiguous_lower or self.ambiguous_upper

    def to_dict(self):
        return {
            "lower": None if self.lower == -math.inf else self.lower,
            "upper": None if self.upper == math.inf else self.upper,
            "count": self.count,
            "n": self.n,
            "shift_tolerance": self.shift_tolerance,
            "ambiguous_lower": self.ambiguous_lower,
            "ambiguous_upper": self.ambiguous_upper,
        }


@dataclass
class EigenPair:
    """An eigenvalue with a unit eigenvector indexed by vertex id.

    in_eigenspace marks numerically multiple eigenvalues: the vector is
    then one member of the eigenspace rather than a unique eigenvector.
    """

    value: float
    vector: np.ndarray = field(repr=False)
    residual: float
    in_eigenspace: bool = False


def adjacency_matrix(graph):
    A = np.zeros((graph.n, graph.n))
    for u, v in graph.edges:
        A[u, v] = 1.0
        A[v, u] = 1.0
    return A


def _adjacency_matvec(graph):
    """Sparse y = A x as a closure over the edge arrays."""
    if graph.edges:
        uu = np.fromiter((e[0] for e in graph.edges), dtype=np.int64)
        vv = np.fromiter((e[1] for e in graph.edges), dtype=np.int64)
    else:
        uu = np.zeros(0, dtype=np.int64)
        vv = np.zeros(0, dtype=np.int64)

    def matvec(x):
        y = np.zeros_like(x)
        np.add.at(y, uu, x[vv])
        np.add.at(y, vv, x[uu])
        return y

    return matvec


@lru_cache(maxsize=128)
def _sturm_data(graph):
    """Cached tridiagonal reduction of A(graph): (d, e^2, scale)."""
    d, e = householder_tridiagonalize(adjacency_matrix(graph))
    e2 = e * e
    scale = float(np.max(np.abs(d))) if graph.n else 0.0
    if graph.n >= 2:
        scale += 2.0 * float(np.max(np.abs(e)))
    scale = max(1.0, scale)
    for arr in (d, e2):
        arr.setflags(write=False)
    return d, e2, scale


def _check_cap(graph, dense_cap):
    cap = DENSE_CAP_DEFAULT if dense_cap is None else dense_cap
    if graph.n > cap:
        raise CapacityError(
            f"graph has {graph.n} vertices, above the dense cap {cap}; "
            "use extreme_eigenvalues for selected eigenvalues or "
            "count_below/count_interval for interval counts"
        )


def full_spectrum(graph, dense_cap=None):
    """All adjacency eigenvalues, descending, via the tridiagonal QL path."""
    _check_cap(graph, dense_cap)
    d, e = householder_tridiagonalize(adjacency_matrix(graph))
    iters, ok = ql_implicit_shift(d, e, np.zeros((0, 0)), False)
    if not ok:
        raise SolverConvergenceError("QL iteration did not converge")
    d.sort()
    return Spectrum(tuple(float(x) for x in d[::-1]), graph.n, iters)


def extreme_eigenvalues(graph, k, side="largest", seed=0, tol=1e-10,
                        max_basis=None, dense_cap=None):
    """The k largest (or smallest) adjacency eigenvalues, descending order
    for side='largest' and ascending magnitude order matching the tail of
    the spectrum for side='smallest'.

    Deterministic for a fixed seed.  Raises SolverConvergenceError with
    the best Ritz values if the basis budget is exhausted.
    """
    if not 1 <= k <= graph.n:
        raise ValueError(f"need 1 <= k <= n, got k={k} for n={graph.n}")
    values, residuals, basis, ok = krylov_extreme(
        _adjacency_matvec(graph), graph.n, k, side=side, seed=seed, tol=tol,
        max_basis=max_basis,
    )
    if not ok:
        raise SolverConvergenceError(
            f"extreme eigenvalue iteration not converged after basis size {basis}",
            ritz_values=values, residuals=residuals,
        )
    return values


def count_below(graph, sigma, shift_tolerance=SHIFT_TOLERANCE):
    """#eigenvalues strictly below sigma, by inertia of A - sigma*I.

    No spectrum is computed.  If the factorization hits a near-singular
    pivot, the count is retried at sigma +- tau; if those retries
    disagree, an eigenvalue lies within tau of sigma and
    AmbiguousShiftError reports both counts.
    """
    d, e2, scale = _sturm_data(graph)
    sigma = float(sigma)
    count, min_pivot = sturm_count_below(d, e2, sigma)
    if min_pivot > _BREAKDOWN_RTOL * scale:
        return count
    tau = shift_tolerance
    lo, _ = sturm_count_below(d, e2, sigma - tau)
    hi, _ = sturm_count_below(d, e2, sigma + tau)
    if lo == hi:
        return lo
    raise AmbiguousShiftError(sigma, lo, hi, tau)


def count_interval(graph, lower, upper, shift_tolerance=SHIFT_TOLERANCE):
    """#eigenvalues in the open interval (lower, upper), by inertia.

    Endpoints may be +-inf.  For each finite endpoint x the sliver
    (x-tau, x+tau] is checked by a Sturm count; if it contains an
    eigenvalue the result is flagged ambiguous and the returned count
    excludes the sliver.
    """
    if not lower < upper:
        raise ValueError(f"need lower < upper, got ({lower}, {upper})")
    d, e2, _ = _sturm_data(graph)
    tau = shift_tolerance

    def raw(x):
        return sturm_count_below(d, e2, x)[0]

    if lower == -math.inf:
        lo_count, amb_lower = 0, False
    else:
        lo_count = raw(lower + tau)
        amb_lower = lo_count - raw(lower - tau) > 0
    if upper == math.inf:
        hi_count, amb_upper = graph.n, False
    else:
        hi_count = raw(upper - tau)
        amb_upper = raw(upper + tau) - hi_count > 0
    return IntervalCount(
        lower=float(lower), upper=float(upper),
        count=max(hi_count - lo_count, 0), n=graph.n,
        shift_tolerance=tau,
        ambiguous_lower=amb_lower, ambiguous_upper=amb_upper,
    )


def eigenpair_at(graph, target, seed=0, dense_cap=None):
    """Unit eigenvector for the eigenvalue nearest target (within 1e-6).

    For a simple eigenvalue the sign is fixed by making the
    largest-magnitude entry positive.  When another eigenvalue lies
    within 1e-8 of the target the returned pair is flagged
    in_eigenspace: any unit vector of the eigenspace is a valid answer.
    """
    _check_cap(graph, dense_cap)
    d, e2, _ = _sturm_data(graph)
    target = float(target)

    def raw(x):
        return sturm_count_below(d, e2, x)[0]

    if raw(target + 1e-6) - raw(target - 1e-6) < 1:
        raise ValueError(f"no eigenvalue within 1e-6 of target {target}")
    multiplicity = raw(target + 1e-8) - raw(target - 1e-8)
    A = adjacency_matrix(graph)
    vec, theta, resid, _ = inverse_iteration(A, target, seed=seed)
    if resid > 1e-8:
        raise SolverConvergenceError(
            f"inverse iteration stalled at residual {resid:.3e} for target {target}",
            ritz_values=[theta],
        )
    lead = int(np.argmax(np.abs(vec)))
    if vec[lead] < 0:
        vec = -vec
    return EigenPair(value=theta, vector=vec, residual=resid,
                     in_eigenspace=multiplicity > 1)


def eigenpairs_outside(graph, bound=2.0, strict=True, seed=0, dense_cap=None):
    """EigenPairs for every eigenvalue with |value| > bound (or >= bound).

    Convenience driver for the structure checks: one dense spectrum, then
    inverse iteration per qualifying eigenvalue.
    """
    spec = full_spectrum(graph, dense_cap=dense_cap)
    pairs = []
    for w in spec.eigenvalues:
        mag = abs(w)
        if (mag > bound) if strict else (mag >= bound):
            pairs.append(eigenpair_at(graph, w, seed=seed, dense_cap=dense_cap))
    return pairs
