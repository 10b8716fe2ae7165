"""Geometry of the symmetric product S_n(D) = pi_n(D^n) in coordinates.

S_n(D) is the image of the n-fold product of a planar domain D under the
map collecting elementary symmetric polynomials.  Membership reduces to a
root computation; every exterior point is separated from the domain by an
affine hyperplane whose points all share one root outside D, which is what
makes these domains linearly convex.  For D the complement of finitely
many punctures, S_n(D) is exactly the complement of the corresponding
hyperplane arrangement, and the count of punctures against the threshold
2n decides Kobayashi completeness versus non-hyperbolicity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domains import (
    COMPLEMENT_FINITE,
    DELTA_BOUNDARY,
    STATE_BOUNDARY,
    STATE_IN,
    STATE_OUT,
    FunctionHandle,
    MembershipVerdict,
    PlanarDomain,
    _margin_arrays,
    complement_cardinality,
    contains,
)
from .sympoly import as_point, monic_eval, roots_batch, roots_of_point, symmetrize

VERDICT_COMPLETE = "KOBAYASHI_COMPLETE"
VERDICT_NOT_HYPERBOLIC = "NOT_HYPERBOLIC"

CURVE_WITNESS_TAG = "exp_curve_avoiding_two_lines"


@dataclass(frozen=True)
class SymProduct:
    """The domain S_n(D) for a planar base domain D and n >= 2."""

    base: PlanarDomain
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("symmetric products are considered for n >= 2")


def symmetrized_polydisc(n):
    """S_n of the unit disc."""
    return SymProduct(PlanarDomain.unit_disc(), n)


def _root_verdict(base, roots, delta):
    """Combine per-root margins into a point verdict (state, margin)."""
    margins, hits = _margin_arrays(base, roots)
    margin = float(np.max(margins))
    if np.any((margins > delta) & ~hits):
        return STATE_OUT, margin
    if np.any(hits) or np.any(np.abs(margins) <= delta):
        return STATE_BOUNDARY, margin
    return STATE_IN, margin


def member(S, z, delta=DELTA_BOUNDARY):
    """Membership of a coordinate point in S_n(D) via its root multiset.

    IN iff every root of p_z sits in D with margin below -delta; BOUNDARY if
    no root is outside beyond delta but some root is within delta of the
    boundary (an exact puncture hit counts); OUT otherwise.  The verdict
    margin is the worst root margin.
    """
    zz = as_point(z, n=S.n)
    roots = roots_of_point(zz)
    state, margin = _root_verdict(S.base, roots, delta)
    return MembershipVerdict(state, margin)


def member_batch(S, points, delta=DELTA_BOUNDARY):
    """States and margins for many points at once ((m, n) input)."""
    pts = np.asarray(points, dtype=complex)
    roots = roots_batch(pts)
    margins, hits = _margin_arrays(S.base, roots)
    worst = margins.max(axis=1)
    out = ((margins > delta) & ~hits).any(axis=1)
    near = hits.any(axis=1) | (np.abs(margins) <= delta).any(axis=1)
    states = np.where(out, STATE_OUT, np.where(near, STATE_BOUNDARY, STATE_IN))
    return states, worst


def push_forward(f, z):
    """Coordinates of <f(root_1), ..., f(root_n)> for a holomorphic f on D.

    Well-defined because the result only depends on the root multiset.  When
    ``f`` carries a domain, roots must not fall strictly outside it (closure
    points are fine).
    """
    zz = as_point(z)
    roots = roots_of_point(zz)
    if isinstance(f, FunctionHandle) and f.domain is not None:
        for r in roots:
            if contains(f.domain, r).state == STATE_OUT:
                raise ValueError("root outside the domain of the mapped function")
    images = np.asarray(f(roots), dtype=complex)
    return symmetrize(images)


def symmetric_eval(fnt, z, tol=1e-10, seed=0):
    """Evaluate a declared-symmetric function of the roots at a point.

    ``fnt`` takes a 1-D complex array of roots.  Symmetry is spot-checked by
    comparing two random orderings of the roots; disagreement beyond ``tol``
    raises, which flags a function that does not descend to S_n(D).
    """
    zz = as_point(z)
    roots = roots_of_point(zz)
    rng = np.random.default_rng(seed)
    p1 = rng.permutation(roots.size)
    p2 = rng.permutation(roots.size)
    v1 = complex(fnt(roots[p1]))
    v2 = complex(fnt(roots[p2]))
    if abs(v1 - v2) > tol:
        raise ValueError("function is not symmetric in its arguments")
    return complex(fnt(roots))


@dataclass(frozen=True)
class Hyperplane:
    """Affine hyperplane {z : p_z(witness) = 0} in C^n.

    Every point on it has ``witness`` among its roots, so when the witness
    lies outside D the hyperplane is disjoint from S_n(D).
    """

    witness: complex
    n: int

    @property
    def coeffs(self):
        j = np.arange(1, self.n + 1)
        return ((-1.0) ** j) * self.witness ** (self.n - j)

    @property
    def offset(self):
        return self.witness**self.n

    def functional(self, z):
        """p_z(witness); zero exactly on the hyperplane."""
        return monic_eval(z, self.witness)

    def null_basis(self):
        """Orthonormal basis (rows) of the direction space of the hyperplane."""
        a = self.coeffs[None, :]
        _, _, vh = np.linalg.svd(a)
        return vh[1:].conj()

    def sample(self, count, rng, scale=10.0):
        """Random points on the hyperplane: offset point + null-space combos."""
        base = point_on(self)
        basis = self.null_basis()
        re = rng.uniform(-scale, scale, size=(count, basis.shape[0]))
        im = rng.uniform(-scale, scale, size=(count, basis.shape[0]))
        return base[None, :] + (re + 1j * im) @ basis


def point_on(h):
    """A concrete point of the hyperplane: symmetrize(witness, 0, ..., 0)."""
    roots = np.zeros(h.n, dtype=complex)
    roots[0] = h.witness
    return symmetrize(roots)


def separating_hyperplane(S, w, delta=DELTA_BOUNDARY):
    """Hyperplane through an exterior point w, disjoint from S_n(D).

    Picks a root of p_w lying outside D (largest margin first, then
    lexicographic (re, im)); such a root exists exactly when w fails
    membership with an exterior root, which covers every OUT point and, for
    puncture-complement bases, the points sitting on the arrangement itself.
    """
    ww = as_point(w, n=S.n)
    roots = roots_of_point(ww)
    margins, hits = _margin_arrays(S.base, roots)
    exterior = (margins > delta) | hits
    if not np.any(exterior):
        raise ValueError("point has no root outside the base domain")
    cand = roots[exterior]
    cand_m = margins[exterior]
    order = np.lexsort((cand.imag, cand.real, -cand_m))
    return Hyperplane(witness=complex(cand[order[0]]), n=S.n)


@dataclass(frozen=True)
class AffineSubspace:
    """Affine subspace of C^n cut out by p_z(mu_i) = 0 for distinct witnesses."""

    offset: np.ndarray
    basis: np.ndarray
    witnesses: tuple

    @property
    def dimension(self):
        return self.basis.shape[0]

    def sample(self, count, rng, scale=10.0):
        if self.dimension == 0:
            return np.tile(self.offset, (count, 1))
        re = rng.uniform(-scale, scale, size=(count, self.dimension))
        im = rng.uniform(-scale, scale, size=(count, self.dimension))
        return self.offset[None, :] + (re + 1j * im) @ self.basis


def _witness_normals(witnesses, n):
    mus = np.asarray(witnesses, dtype=complex)
    j = np.arange(1, n + 1)
    return ((-1.0) ** j)[None, :] * mus[:, None] ** (n - j)[None, :]


def intersection_space(witnesses, n, rank_tol=1e-8):
    """Common solution set of p_z(mu_i) = 0, i = 1..k, as an affine subspace.

    For k distinct witnesses this is the set of points whose root multiset
    contains all of them, an affine space of dimension exactly n - k.
    """
    mus = tuple(complex(m) for m in witnesses)
    k = len(mus)
    if not 1 <= k <= n:
        raise ValueError("need between 1 and n witnesses")
    if len(set(mus)) != k:
        raise ValueError("witnesses must be pairwise distinct")
    a = _witness_normals(mus, n)
    _, s, vh = np.linalg.svd(a)
    rank = int(np.sum(s > rank_tol))
    if rank != k:
        raise ValueError("witness normals are numerically rank deficient")
    basis = vh[k:].conj()
    # canonical phase: make the largest entry of each basis vector real positive
    fixed = []
    for row in basis:
        i = int(np.argmax(np.abs(row)))
        phase = row[i] / abs(row[i])
        fixed.append(row / phase)
    basis = np.asarray(fixed) if fixed else basis.reshape(0, n)
    roots = np.concatenate([np.asarray(mus), np.zeros(n - k, dtype=complex)])
    return AffineSubspace(offset=symmetrize(roots), basis=basis, witnesses=mus)


@dataclass(frozen=True)
class GeneralPositionReport:
    n: int
    num_hyperplanes: int
    subsets_checked: int
    failures: tuple
    min_singular_value: float

    @property
    def all_pass(self):
        return not self.failures


def arrangement(punctures, n, rank_tol=1e-8):
    """Hyperplanes of S_n(C minus punctures) plus a general-position report.

    The complement of S_n of a punctured plane is the union of the witness
    hyperplanes; the report checks, exhaustively over witness subsets of
    size k <= n, that the normals have rank k (so every intersection is an
    affine space of dimension n - k).
    """
    mus = tuple(complex(m) for m in punctures)
    if len(mus) < 1:
        raise ValueError("need at least one puncture")
    if len(set(mus)) != len(mus):
        raise ValueError("punctures must be pairwise distinct")
    planes = [Hyperplane(witness=m, n=n) for m in mus]
    failures = []
    checked = 0
    min_sv = np.inf
    for k in range(1, min(n, len(mus)) + 1):
        for subset in itertools.combinations(range(len(mus)), k):
            a = _witness_normals([mus[i] for i in subset], n)
            s = np.linalg.svd(a, compute_uv=False)
            min_sv = min(min_sv, float(s.min()))
            rank = int(np.sum(s > rank_tol))
            checked += 1
            if rank != k:
                failures.append((subset, rank))
    report = GeneralPositionReport(
        n=n,
        num_hyperplanes=len(mus),
        subsets_checked=checked,
        failures=tuple(failures),
        min_singular_value=float(min_sv),
    )
    return planes, report


@dataclass(frozen=True)
class Classification:
    verdict: str
    complement: float
    threshold: int
    witness: Optional[FunctionHandle]
    witness_reason: str


def entire_curve_witness():
    """Nonconstant entire curve into S_2(C minus {0, 1}).

    lam -> (e^lam + 2, e^lam): the second coordinate never vanishes and
    1 - z_1 + z_2 = -1 identically, so the image avoids both hyperplanes of
    the arrangement.
    """

    def curve(lam):
        e = np.exp(np.asarray(lam, dtype=complex))
        return np.stack([e + 2.0, e], axis=-1)

    return FunctionHandle(tag=CURVE_WITNESS_TAG, params={}, fn=curve)


def classify(S):
    """Completeness versus non-hyperbolicity by the complement count.

    S_n(D) is Kobayashi complete when C minus D has at least 2n points
    (infinitely many included); with fewer the domain contains a nonconstant
    entire curve and is not hyperbolic.  An explicit curve is attached for
    the worked case D = C minus {0, 1}, n = 2.
    """
    card = complement_cardinality(S.base)
    threshold = 2 * S.n
    if card >= threshold:
        return Classification(
            verdict=VERDICT_COMPLETE,
            complement=card,
            threshold=threshold,
            witness=None,
            witness_reason="",
        )
    witness = None
    reason = "witness construction out of scope"
    if (
        S.n == 2
        and S.base.kind == COMPLEMENT_FINITE
        and set(S.base.punctures) == {0j, 1 + 0j}
    ):
        witness = entire_curve_witness()
        reason = ""
    return Classification(
        verdict=VERDICT_NOT_HYPERBOLIC,
        complement=card,
        threshold=threshold,
        witness=witness,
        witness_reason=reason,
    )


def affine_iso_cstar2(z):
    """Affine map (s, p) -> (p, s - p - 1) carrying S_2(C minus {0,1}) onto (C*)^2.

    The coordinates of the image are p_z(0) and -p_z(1), so membership in the
    symmetric product is exactly both image coordinates being nonzero.
    """
    zz = as_point(z, n=2)
    s, p = zz
    return np.asarray([p, s - p - 1.0], dtype=complex)


def affine_iso_cstar2_inverse(u):
    uu = as_point(u, n=2)
    a, b = uu
    return np.asarray([b + a + 1.0, a], dtype=complex)
