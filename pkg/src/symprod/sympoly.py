"""Conversion between root multisets and elementary-symmetric coordinates.

A point z = (z_1, ..., z_n) of C^n is read through the monic polynomial

    p_z(t) = t^n + sum_{j=1}^n (-1)^j z_j t^(n-j),

so z_j is the j-th elementary symmetric polynomial of the roots of p_z.
Points and root multisets are plain 1-D complex ndarrays; a root multiset
is unordered, and every function here returns roots in a canonical
lexicographic (re, im) order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL_RES = 1e-12
MAX_ITERATIONS = 200
MAX_DEGREE = 16
MATCH_MAX_N = 8

_EPS = np.finfo(float).eps


class RootSolveError(RuntimeError):
    """Simultaneous iteration failed to converge.

    Carries the best iterate and its residuals so callers can inspect how
    close the solver got.
    """

    def __init__(self, message, best_roots, residuals):
        super().__init__(message)
        self.best_roots = np.asarray(best_roots)
        self.residuals = np.asarray(residuals)


@dataclass(frozen=True)
class RootMatch:
    """Optimal pairing between two root multisets of equal size.

    ``permutation[i]`` is the index (0-based) in ``b`` matched to ``a[i]``;
    ``max_error`` is the bottleneck cost max_i |a_i - b_perm(i)|.
    """

    permutation: tuple
    max_error: float


def as_point(z, n=None):
    """Validate and return z as a finite 1-D complex array."""
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("point must be a non-empty 1-D sequence of complex numbers")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point entries must be finite")
    if n is not None and arr.size != n:
        raise ValueError(f"expected dimension {n}, got {arr.size}")
    if arr.size > MAX_DEGREE:
        raise ValueError(f"dimension {arr.size} exceeds supported maximum {MAX_DEGREE}")
    return arr


def sort_roots(roots):
    """Canonical (re, im) lexicographic order for a root multiset."""
    arr = np.asarray(roots, dtype=complex)
    order = np.lexsort((arr.imag, arr.real))
    return arr[order]


def collision_gap(roots):
    """Minimum pairwise distance of a root multiset (inf for a single root)."""
    arr = as_point(roots)
    if arr.size == 1:
        return np.inf
    diff = np.abs(arr[:, None] - arr[None, :])
    np.fill_diagonal(diff, np.inf)
    return float(diff.min())


def symmetrize(roots):
    """Elementary symmetric coordinates (sigma_1, ..., sigma_n) of a root tuple.

    Roots are sorted canonically before expansion, so the result is bitwise
    identical under any permutation of the input.
    """
    arr = sort_roots(as_point(roots))
    n = arr.size
    # partial-product recurrence for elementary symmetric polynomials
    sig = np.zeros(n + 1, dtype=complex)
    sig[0] = 1.0
    for k, r in enumerate(arr):
        upper = min(k + 1, n)
        sig[1 : upper + 1] = sig[1 : upper + 1] + r * sig[0:upper].copy()
    return sig[1:]


def monic_coeffs(z):
    """Coefficients [1, -z_1, +z_2, ...] of p_z in descending powers."""
    arr = as_point(z)
    n = arr.size
    signs = (-1.0) ** np.arange(1, n + 1)
    return np.concatenate(([1.0 + 0j], signs * arr))


def monic_eval(z, mu):
    """Evaluate p_z at mu (mu may be a scalar or an ndarray)."""
    coeffs = monic_coeffs(z)
    mu_arr = np.asarray(mu, dtype=complex)
    result = np.zeros_like(mu_arr)
    for c in coeffs:
        result = result * mu_arr + c
    if np.isscalar(mu) or mu_arr.ndim == 0:
        return complex(result)
    return result


def _horner_batch(coeffs, x):
    """p and p' for a batch: coeffs (m, n+1), x (m, n) -> (p, dp) each (m, n)."""
    m, n = x.shape
    p = np.broadcast_to(coeffs[:, 0:1], x.shape).copy()
    dp = np.zeros_like(x)
    for j in range(1, coeffs.shape[1]):
        dp = dp * x + p
        p = p * x + coeffs[:, j : j + 1]
    return p, dp


def _eval_bound_batch(coeffs, x):
    """Running bound sum_j |c_j| |x|^(n-j), used as a roundoff floor."""
    ax = np.abs(x)
    bound = np.broadcast_to(np.abs(coeffs[:, 0:1]), x.shape).copy()
    for j in range(1, coeffs.shape[1]):
        bound = bound * ax + np.abs(coeffs[:, j : j + 1])
    return bound


def _initial_circle(coeffs, phase):
    """Equispaced starting points on a circle of radius 1 + max_j |z_j|^(1/j)."""
    m, deg = coeffs.shape[0], coeffs.shape[1] - 1
    mags = np.abs(coeffs[:, 1:])
    powers = 1.0 / np.arange(1, deg + 1)
    radius = 1.0 + np.max(mags**powers, axis=1)
    angles = 2.0 * np.pi * np.arange(deg) / deg + phase
    return radius[:, None] * np.exp(1j * angles)[None, :]


def _aberth_batch(coeffs, tol_res, max_iter):
    """Aberth-Ehrlich simultaneous iteration on a batch of monic polynomials.

    coeffs: (m, n+1) with coeffs[:, 0] == 1.  Returns (roots, residuals,
    converged) of shapes (m, n), (m, n), (m,).  One restart on a rotated
    starting circle is attempted for rows that stagnate.
    """
    m, deg = coeffs.shape[0], coeffs.shape[1] - 1
    if deg == 1:
        roots = -coeffs[:, 1:2].copy()
        res = np.abs(_horner_batch(coeffs, roots)[0])
        return roots, res, np.ones(m, dtype=bool)

    x = _initial_circle(coeffs, phase=0.4)
    converged = np.zeros(m, dtype=bool)
    restarted = np.zeros(m, dtype=bool)
    best_res = np.full(m, np.inf)
    last_improve = np.zeros(m, dtype=int)

    for it in range(max_iter):
        active = ~converged
        if not active.any():
            break
        xa = x[active]
        ca = coeffs[active]
        p, dp = _horner_batch(ca, xa)
        bound = _eval_bound_batch(ca, xa)
        tol = np.maximum(tol_res, 4.0 * _EPS * bound)
        res = np.abs(p)
        row_res = res.max(axis=1)
        done = (res <= tol).all(axis=1)

        idx = np.flatnonzero(active)
        converged[idx[done]] = True

        improved = row_res < 0.5 * best_res[idx]
        best_res[idx] = np.minimum(best_res[idx], row_res)
        last_improve[idx[improved]] = it

        # stagnation: no halving of the residual for 30 iterations
        stale = (it - last_improve[idx] > 30) & ~done & ~restarted[idx]
        if stale.any():
            rows = idx[stale]
            x[rows] = _initial_circle(coeffs[rows], phase=2.399963229728653)
            restarted[rows] = True
            continue

        work = ~done
        if not work.any():
            continue
        xw = xa[work]
        pw = p[work]
        dpw = dp[work]
        dpw = np.where(np.abs(dpw) < 1e-300, 1e-300 + 0j, dpw)
        w = pw / dpw
        diff = xw[:, :, None] - xw[:, None, :]
        k = diff.shape[1]
        diff[:, np.arange(k), np.arange(k)] = 1.0
        inv = 1.0 / diff
        inv[:, np.arange(k), np.arange(k)] = 0.0
        s = inv.sum(axis=2)
        denom = 1.0 - w * s
        small = np.abs(denom) < 1e-12
        denom = np.where(small, 1.0 + 0j, denom)
        step = w / denom
        rows = idx[work]
        x[rows] = xw - step

    # Newton polish (keeps a polished root only where the residual improves)
    for _ in range(2):
        p, dp = _horner_batch(coeffs, x)
        safe = np.abs(dp) > 1e-300
        cand = np.where(safe, x - p / np.where(safe, dp, 1.0), x)
        pc, _ = _horner_batch(coeffs, cand)
        better = np.abs(pc) < np.abs(p)
        x = np.where(better, cand, x)

    p, _ = _horner_batch(coeffs, x)
    residuals = np.abs(p)
    bound = _eval_bound_batch(coeffs, x)
    tol = np.maximum(tol_res, 4.0 * _EPS * bound)
    converged = (residuals <= tol).all(axis=1)
    return x, residuals, converged


def roots_batch(points, tol_res=DEFAULT_TOL_RES, max_iter=MAX_ITERATIONS):
    """Roots of p_z for every row of ``points`` ((m, n) -> (m, n), row-sorted).

    Raises RootSolveError if any row fails to converge.
    """
    pts = np.asarray(points, dtype=complex)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-D array (one point per row)")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point entries must be finite")
    n = pts.shape[1]
    signs = (-1.0) ** np.arange(1, n + 1)
    coeffs = np.concatenate(
        [np.ones((pts.shape[0], 1), dtype=complex), signs[None, :] * pts], axis=1
    )
    roots, residuals, converged = _aberth_batch(coeffs, tol_res, max_iter)
    if not converged.all():
        bad = np.flatnonzero(~converged)
        raise RootSolveError(
            f"root iteration failed to converge for {bad.size} point(s) "
            f"(first failing index {bad[0]})",
            roots[bad],
            residuals[bad],
        )
    order = np.lexsort((roots.imag, roots.real), axis=1)
    return np.take_along_axis(roots, order, axis=1)


def roots_of_point(z, tol_res=DEFAULT_TOL_RES, max_iter=MAX_ITERATIONS):
    """All n roots of p_z, canonically sorted.

    Uses Aberth-Ehrlich simultaneous iteration with a Newton polish; raises
    RootSolveError (carrying the best iterate and residuals) on
    non-convergence.
    """
    arr = as_point(z)
    return roots_batch(arr[None, :], tol_res=tol_res, max_iter=max_iter)[0]


def match_roots(a, b):
    """Permutation of b minimizing max_i |a_i - b_perm(i)|.

    Exhaustive search (n <= 8); ties are broken by lexicographic permutation
    order, so the result is deterministic.
    """
    aa = as_point(a)
    bb = as_point(b)
    if aa.size != bb.size:
        raise ValueError("root multisets must have equal size")
    n = aa.size
    if n > MATCH_MAX_N:
        raise ValueError(f"match_roots supports n <= {MATCH_MAX_N}")
    dist = np.abs(aa[:, None] - bb[None, :])
    best_perm = None
    best_err = np.inf
    for perm in itertools.permutations(range(n)):
        err = max(dist[i, perm[i]] for i in range(n))
        if err < best_err:
            best_err = err
            best_perm = perm
    return RootMatch(permutation=best_perm, max_error=float(best_err))
