"""Dense symmetric eigensolver kernels.

One reduction feeds every consumer: a symmetric matrix is orthogonally
reduced to tridiagonal form by Householder reflectors, after which

  * implicit-shift QL iteration delivers the full eigenvalue list
    (optionally with eigenvectors), and
  * Sturm-sequence pivot counts deliver inertia (#eigenvalues below a
    shift) without computing any spectrum.

On top of those sit a Krylov scheme with full reorthogonalization for a
few extreme eigenvalues of large sparse operators, and shifted inverse
iteration for individual eigenvectors.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

MACHINE_EPS = float(np.finfo(np.float64).eps)


def householder_tridiagonalize(A, vectors=False):
    """Reduce a symmetric matrix to tridiagonal form T = Q^T A Q.

    Returns (d, e) with d the diagonal of T (length n) and e the
    subdiagonal (length n-1).  With vectors=True also returns Q.
    The input matrix is not modified.
    """
    A = np.array(A, dtype=np.float64, copy=True)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    # work at unit scale so squared terms cannot under/overflow
    scale = float(np.max(np.abs(A))) if n else 0.0
    if scale != 0.0:
        A /= scale
    Q = np.eye(n) if vectors else None
    e = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = A[k + 1:, k]
        nrm = float(np.linalg.norm(x))
        if nrm == 0.0:
            e[k] = 0.0
            continue
        alpha = -math.copysign(nrm, x[0]) if x[0] != 0.0 else -nrm
        v = x.copy()
        v[0] -= alpha
        vsq = float(v @ v)
        if vsq == 0.0:
            e[k] = alpha
            continue
        beta = 2.0 / vsq
        B = A[k + 1:, k + 1:]
        p = beta * (B @ v)
        p -= (0.5 * beta * float(v @ p)) * v
        B -= np.outer(v, p)
        B -= np.outer(p, v)
        e[k] = alpha
        A[k + 1, k] = alpha
        A[k + 2:, k] = 0.0
        if vectors:
            Qv = Q[:, k + 1:] @ v
            Q[:, k + 1:] -= beta * np.outer(Qv, v)
    if n >= 2:
        e[n - 2] = A[n - 1, n - 2]
    d = np.diag(A).copy()
    if scale != 0.0:
        d *= scale
        e *= scale
    if vectors:
        return d, e, Q
    return d, e


@njit(cache=True)
def ql_implicit_shift(d, e, z, want_vectors):
    """Implicit-shift QL iteration on a symmetric tridiagonal matrix.

    d and e are overwritten (d receives the eigenvalues, unordered).
    When want_vectors is set, the rotations are accumulated into z, whose
    columns then hold the eigenvectors in the same unordered arrangement.
    Returns (total_iterations, converged).
    """
    n = d.shape[0]
    if n <= 1:
        return 0, True
    work = np.zeros(n)
    for i in range(n - 1):
        work[i] = e[i]
    total = 0
    for l in range(n):
        its = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(work[m]) <= 2.220446049250313e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            its += 1
            total += 1
            if its > 64:
                return total, False
            g = (d[l + 1] - d[l]) / (2.0 * work[l])
            r = math.hypot(g, 1.0)
            if g >= 0.0:
                g = d[m] - d[l] + work[l] / (g + r)
            else:
                g = d[m] - d[l] + work[l] / (g - r)
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * work[i]
                b = c * work[i]
                r = math.hypot(f, g)
                work[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    work[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_vectors:
                    for krow in range(z.shape[0]):
                        f2 = z[krow, i + 1]
                        z[krow, i + 1] = s * z[krow, i] + c * f2
                        z[krow, i] = c * z[krow, i] - s * f2
            if underflow:
                continue
            d[l] -= p
            work[l] = g
            work[m] = 0.0
    return total, True


@njit(cache=True)
def sturm_count_below(d, e2, sigma):
    """Number of eigenvalues of the tridiagonal matrix strictly below sigma.

    e2 holds the squared subdiagonal.  Also returns the smallest pivot
    magnitude seen in the LDL^T factorization of T - sigma*I; a tiny value
    signals that sigma sits numerically on top of an eigenvalue of T or of
    one of its leading principal submatrices.
    """
    n = d.shape[0]
    q = d[0] - sigma
    min_abs = abs(q)
    if q == 0.0:
        # exact zero pivot: perturb to a tiny negative so the counted sign
        # and the ratio fed to the next pivot stay consistent
        q = -1.0e-300
    count = 1 if q < 0.0 else 0
    for i in range(1, n):
        q = d[i] - sigma - e2[i - 1] / q
        a = abs(q)
        if a < min_abs:
            min_abs = a
        if q == 0.0:
            q = -1.0e-300
        if q < 0.0:
            count += 1
    return count, min_abs


def symmetric_eigenvalues(A):
    """All eigenvalues of a symmetric matrix in descending order.

    Returns (values, iterations).  Raises ArithmeticError if the QL
    iteration fails to converge (it does not, in practice).
    """
    d, e = householder_tridiagonalize(A)
    dummy = np.zeros((0, 0))
    iters, ok = ql_implicit_shift(d, e.copy(), dummy, False)
    if not ok:
        raise ArithmeticError("QL iteration failed to converge")
    d.sort()
    return d[::-1].copy(), iters


def symmetric_eigh(A):
    """Full eigendecomposition of a symmetric matrix, descending eigenvalues.

    Returns (values, vectors, iterations) with vectors[:, i] the unit
    eigenvector for values[i].
    """
    d, e, Q = householder_tridiagonalize(A, vectors=True)
    iters, ok = ql_implicit_shift(d, e.copy(), Q, True)
    if not ok:
        raise ArithmeticError("QL iteration failed to converge")
    order = np.argsort(d)[::-1]
    return d[order].copy(), Q[:, order].copy(), iters


def tridiagonal_eigenvalues(d, e):
    """Eigenvalues (descending) of the tridiagonal matrix with diagonal d
    and subdiagonal e."""
    vals = np.array(d, dtype=np.float64, copy=True)
    sub = np.array(e, dtype=np.float64, copy=True)
    dummy = np.zeros((0, 0))
    _, ok = ql_implicit_shift(vals, sub, dummy, False)
    if not ok:
        raise ArithmeticError("QL iteration failed to converge")
    vals.sort()
    return vals[::-1].copy()


def krylov_extreme(matvec, n, k, side="largest", seed=0, tol=1e-10,
                   max_basis=None):
    """k extreme eigenvalues of a symmetric operator given by matvec.

    Block Krylov iteration with block size k and full
    reorthogonalization: the block resolves clusters and multiple
    eigenvalues, directions lost to rank deficiency are replaced by fresh
    random ones, and Ritz values come from a dense eigensolve of the
    projected matrix.  Deterministic for a fixed seed.

    Returns (values, residuals, basis_size, converged); values holds the
    k best Ritz values even when converged is False.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if side not in ("largest", "smallest"):
        raise ValueError("side must be 'largest' or 'smallest'")
    if max_basis is None:
        max_basis = min(n, max(40 * k + 160, 320))
    max_basis = min(max(max_basis, k), n)
    rng = np.random.default_rng(seed)
    B = np.zeros((n, max_basis))
    AB = np.zeros((n, max_basis))

    def orthonormal_block(W, j, width):
        """Columns of W orthogonalized against B[:, :j] and each other;
        rank-deficient directions are replaced by random ones."""
        cols = []
        idx = 0
        attempts = 0
        while len(cols) < width and attempts < 20 * width:
            attempts += 1
            if idx < W.shape[1]:
                w = W[:, idx].copy()
                idx += 1
            else:
                w = rng.standard_normal(n)
            for _ in range(2):
                if j:
                    w -= B[:, :j] @ (B[:, :j].T @ w)
                for c in cols:
                    w -= c * (c @ w)
            nw = float(np.linalg.norm(w))
            if nw > 1e-8:
                cols.append(w / nw)
        if len(cols) < width:
            raise ArithmeticError("could not generate independent directions")
        return np.column_stack(cols)

    j = 0
    block = orthonormal_block(np.zeros((n, 0)), 0, min(k, max_basis))
    best = None
    last_check = 0
    while True:
        width = block.shape[1]
        B[:, j:j + width] = block
        for c in range(width):
            AB[:, j + c] = matvec(block[:, c])
        j += width
        if j - last_check >= max(k, 6) or j >= max_basis:
            last_check = j
            H = B[:, :j].T @ AB[:, :j]
            H = 0.5 * (H + H.T)
            vals, vecs, _ = symmetric_eigh(H)
            sel = np.arange(k) if side == "largest" else np.arange(j - k, j)
            theta = vals[sel]
            Y = B[:, :j] @ vecs[:, sel]
            R = AB[:, :j] @ vecs[:, sel] - Y * theta
            resid = np.linalg.norm(R, axis=0)
            best = (theta.copy(), resid.copy(), j)
            scale = max(1.0, float(np.max(np.abs(vals))))
            if np.all(resid <= tol * scale):
                return (list(map(float, theta)), list(map(float, resid)),
                        j, True)
        if j >= max_basis:
            break
        width = min(k, max_basis - j)
        block = orthonormal_block(AB[:, j - block.shape[1]:j], j, width)
    theta, resid, used = best
    return list(map(float, theta)), list(map(float, resid)), used, False


def inverse_iteration(A, target, seed=0, tol=1e-11, max_iter=60):
    """Unit eigenvector of a symmetric matrix near a given eigenvalue
    estimate, by shifted inverse iteration.

    Returns (vector, rayleigh_value, residual, iterations).  The shift is
    nudged off the target if the shifted matrix is exactly singular.
    """
    A = np.asarray(A, dtype=np.float64)
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    shift = float(target)
    scale = max(1.0, abs(shift))
    theta = shift
    resid = math.inf
    for it in range(1, max_iter + 1):
        try:
            w = np.linalg.solve(A - shift * np.eye(n), v)
        except np.linalg.LinAlgError:
            shift += scale * 1e-12 * it
            continue
        norm_w = float(np.linalg.norm(w))
        if not math.isfinite(norm_w) or norm_w == 0.0:
            shift += scale * 1e-12 * it
            continue
        v = w / norm_w
        Av = A @ v
        theta = float(v @ Av)
        resid = float(np.linalg.norm(Av - theta * v))
        if resid <= tol * max(1.0, abs(theta)):
            return v, theta, resid, it
    return v, theta, resid, max_iter
