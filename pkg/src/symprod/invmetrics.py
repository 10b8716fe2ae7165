"""Certified bounds for invariant pseudodistances on S_n(D).

Lower bounds for the Caratheodory pseudodistance come from a finite family
of explicit competitors (coordinate functions and, for n = 2, the rational
family (2*omega*p - s)/(2 - omega*s) on an omega grid), each post-composed
with a disc automorphism so it vanishes at the source point.  Upper bounds
for the Lempert function come from explicit analytic discs: either a
root-matching construction with the hyperbolic metric of the base disc, or
a numerical search over polynomial discs in the ambient coordinates.  Since
c <= k <= l, every reported interval [lower, upper] is a certificate
sandwich for all three distances between its endpoints' roles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .domains import (
    DELTA_BOUNDARY,
    DISC,
    STATE_IN,
    UNIT_DISC,
    PlanarDomain,
    _margin_arrays,
    neg_exhaustion,
)
from .symgeo import SymProduct, member, separating_hyperplane, symmetrized_polydisc
from .sympoly import as_point, monic_eval, roots_of_point, symmetrize


def poincare(a, b):
    """Poincare distance atanh |(a - b) / (1 - conj(a) b)| on the unit disc."""
    a, b = complex(a), complex(b)
    if abs(a) >= 1.0 or abs(b) >= 1.0:
        raise ValueError("arguments must lie in the open unit disc")
    m = abs((a - b) / (1.0 - np.conj(a) * b))
    return math.atanh(min(m, np.nextafter(1.0, 0.0)))


def _poincare_arr(a, b):
    m = np.abs((a - b) / (1.0 - np.conj(a) * b))
    return np.arctanh(np.minimum(m, np.nextafter(1.0, 0.0)))


def phi_omega(omega, s, p):
    """The rational map (2*omega*p - s) / (2 - omega*s), |omega| = 1.

    Maps the symmetrized bidisc into the unit disc; rejected near its pole.
    """
    omega, s, p = complex(omega), complex(s), complex(p)
    if abs(abs(omega) - 1.0) > 1e-12:
        raise ValueError("omega must lie on the unit circle")
    if abs(2.0 - omega * s) <= 1e-12:
        raise ValueError("argument too close to the pole of the map")
    return (2.0 * omega * p - s) / (2.0 - omega * s)


@dataclass(frozen=True)
class DistanceBound:
    """Certified interval for an invariant distance.

    One side is typically informative; the other is trivial (0 or inf).
    Certificates are (tag, params) pairs except for the disc search, which
    attaches a DiscCertificate.
    """

    lower: float
    upper: float
    lower_certificate: object = None
    upper_certificate: object = None


@dataclass(frozen=True)
class DiscCertificate:
    """Polynomial analytic disc through two points of S_n(D).

    ``coeffs[j]`` lists the coefficients (constant first) of the j-th
    coordinate polynomial; the disc passes through the source at 0 and the
    target at ``sigma``; ``boundary_margin`` is the distance its sampled
    values keep from the boundary of the domain.
    """

    coeffs: tuple
    sigma: float
    boundary_margin: float


@dataclass(frozen=True)
class DivergenceReport:
    """Lower-bound trace c_k along an escaping sequence, with crossings."""

    rows: tuple
    thresholds: tuple
    first_crossings: dict


def _require_in(S, z, delta, name):
    verdict = member(S, z, delta=delta)
    if verdict.state != STATE_IN:
        raise ValueError(f"{name} is not an interior point of the symmetric product")


def _ambient_roots(S, z):
    """Roots of z normalized into the unit disc via the ambient disc of the base."""
    amb = S.base.ambient_disc()
    c, r = amb
    return (roots_of_point(as_point(z, S.n)) - c) / r


def carath_lower(S, z, w, omega_grid=720, delta=DELTA_BOUNDARY):
    """Lower bound for the Caratheodory pseudodistance from explicit competitors.

    Each competitor G maps S_n(D) holomorphically into the unit disc, and
    p(G(z), G(w)) is a valid lower bound (compose with the automorphism
    killing G(z)).  The family: normalized coordinate functions, plus for
    n = 2 the omega grid of the rational bidisc functions applied after the
    ambient normalization of the base.  Unbounded bases admit no bounded
    nonconstant competitors here, so the bound degenerates to 0.
    """
    zz = as_point(z, S.n)
    ww = as_point(w, S.n)
    _require_in(S, zz, delta, "z")
    _require_in(S, ww, delta, "w")
    if S.base.ambient_disc() is None:
        return DistanceBound(0.0, np.inf, ("trivial", {}), None)

    za = _ambient_roots(S, zz)
    wa = _ambient_roots(S, ww)
    sz = symmetrize(za)
    sw = symmetrize(wa)
    n = S.n

    best = 0.0
    best_cert = ("trivial", {})
    for j in range(1, n + 1):
        scale = math.comb(n, j)
        val = poincare(sz[j - 1] / scale, sw[j - 1] / scale)
        if val > best:
            best = val
            best_cert = ("coordinate", {"index": j})

    if n == 2 and omega_grid > 0:
        omegas = np.exp(2j * np.pi * np.arange(omega_grid) / omega_grid)
        u = (2.0 * omegas * sz[1] - sz[0]) / (2.0 - omegas * sz[0])
        v = (2.0 * omegas * sw[1] - sw[0]) / (2.0 - omegas * sw[0])
        vals = _poincare_arr(u, v)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best = float(vals[k])
            best_cert = ("phi_omega", {"omega": complex(omegas[k])})

    return DistanceBound(float(best), np.inf, best_cert, None)


def lempert_upper_permutation(S, z, w):
    """Upper bound for the Lempert function by matching roots pairwise.

    min over permutations of max_j p_D(a_j, b_perm(j)): reparametrized
    geodesic discs through the matched roots assemble into an analytic disc
    through both points, so the bottleneck cost bounds l (hence k and c)
    from above.  Needs the closed-form hyperbolic metric of a disc base.
    """
    if S.base.kind not in (UNIT_DISC, DISC):
        raise ValueError("permutation bound needs a disc base")
    a = _ambient_roots(S, z)
    b = _ambient_roots(S, w)
    if np.any(np.abs(a) >= 1.0) or np.any(np.abs(b) >= 1.0):
        raise ValueError("points must be interior to the symmetric product")
    n = S.n
    dist = _poincare_arr(a[:, None], b[None, :])
    best_perm = None
    best = np.inf
    for perm in itertools.permutations(range(n)):
        cost = max(dist[i, perm[i]] for i in range(n))
        if cost < best:
            best = cost
            best_perm = perm
    return DistanceBound(
        0.0, float(best), ("trivial", {}), ("permutation", {"assignment": best_perm})
    )


def _quadratic_roots(c1, c2):
    """Stable vectorized roots of t^2 + c1 t + c2."""
    disc = c1 * c1 - 4.0 * c2
    sq = np.sqrt(disc.astype(complex))
    flip = np.real(np.conj(c1) * sq) < 0.0
    sq = np.where(flip, -sq, sq)
    q = -0.5 * (c1 + sq)
    small = np.abs(q) < 1e-300
    r1 = np.where(small, sq * 0.5, q)
    r2 = np.where(small, -sq * 0.5, c2 / np.where(small, 1.0, q))
    return np.stack([r1, r2], axis=-1)


def _poly_curve_roots(base, values):
    """Roots of p_z for each coordinate point in ``values`` ((m, n) array)."""
    m, n = values.shape
    signs = (-1.0) ** np.arange(1, n + 1)
    coeffs = signs[None, :] * values
    if n == 2:
        return _quadratic_roots(coeffs[:, 0], coeffs[:, 1])
    comp = np.zeros((m, n, n), dtype=complex)
    idx = np.arange(1, n)
    comp[:, idx, idx - 1] = 1.0
    comp[:, :, -1] = -coeffs[:, ::-1]
    return np.linalg.eigvals(comp)


class _DiscSearchProblem:
    """Shared state for the polynomial-disc feasibility oracle."""

    def __init__(self, S, z, w, degree, margin, boundary_samples):
        self.S = S
        self.z = np.asarray(z, dtype=complex)
        self.w = np.asarray(w, dtype=complex)
        self.n = S.n
        self.degree = degree
        self.margin = margin
        angles = 2.0 * np.pi * np.arange(boundary_samples) / boundary_samples
        zeta = np.exp(1j * angles)
        if S.base.punctures:
            rings = [rad * zeta[::4] for rad in (0.35, 0.65, 0.9)]
            zeta = np.concatenate([zeta] + rings)
        self.zeta = zeta
        self.powers = zeta[:, None] ** np.arange(degree + 1)[None, :]
        self.evaluations = 0
        self.best = None  # (sigma, coeffs, boundary_margin)

    def coeff_matrix(self, sigma, free):
        """Full (n, degree+1) coefficient matrix with both interpolation
        constraints (value w at 0, value z at sigma) solved exactly."""
        coeffs = np.zeros((self.n, self.degree + 1), dtype=complex)
        coeffs[:, 0] = self.w
        if self.degree >= 2:
            coeffs[:, 2:] = free
        powers = sigma ** np.arange(2, self.degree + 1)
        higher = coeffs[:, 2:] @ powers if self.degree >= 2 else 0.0
        coeffs[:, 1] = (self.z - self.w - higher) / sigma
        return coeffs

    def worst_margin(self, coeffs):
        """Max signed margin of the curve's roots over all sample points."""
        self.evaluations += 1
        values = self.powers @ coeffs.T
        if not np.all(np.isfinite(values)):
            return np.inf
        try:
            roots = _poly_curve_roots(self.S.base, values)
        except np.linalg.LinAlgError:
            return np.inf
        margins, hits = _margin_arrays(self.S.base, roots)
        worst = float(margins.max())
        if hits.any():
            worst = max(worst, 0.0)
        return worst

    def probe(self, sigma, free):
        """Feasibility probe; records the best feasible disc seen."""
        if not 0.0 < sigma < 1.0:
            return np.inf
        coeffs = self.coeff_matrix(sigma, free)
        worst = self.worst_margin(coeffs)
        if worst <= -self.margin:
            if self.best is None or sigma < self.best[0]:
                self.best = (sigma, coeffs.copy(), -worst)
        return worst

    def objective(self, x):
        sigma = 1.0 / (1.0 + math.exp(-float(x[0])))
        free = (
            x[1 : 1 + 2 * self.n * (self.degree - 1)]
            .reshape(self.n, self.degree - 1, 2)
            .astype(float)
        )
        free = free[..., 0] + 1j * free[..., 1]
        worst = self.probe(sigma, free)
        if worst <= -self.margin:
            return math.atanh(min(sigma, np.nextafter(1.0, 0.0)))
        return 50.0 + 10.0 * min(max(worst + self.margin, 0.0), 10.0)

    def pack(self, sigma, free):
        s = min(max(sigma, 1e-9), 1.0 - 1e-12)
        t = math.log(s / (1.0 - s))
        flat = np.stack([free.real, free.imag], axis=-1).ravel()
        return np.concatenate([[t], flat])


def _bisect_sigma(problem, free, lo=1e-6, hi=None):
    """Smallest feasible sigma for fixed free coefficients, or None.

    Relies on feasibility being monotone for the straight-segment family and
    is used as a guarded refinement elsewhere (only results verified
    feasible are kept).
    """
    hi = 1.0 - 1e-9 if hi is None else hi
    if problem.probe(hi, free) > -problem.margin:
        return None
    if problem.probe(lo, free) <= -problem.margin:
        return lo
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if problem.probe(mid, free) <= -problem.margin:
            hi = mid
        else:
            lo = mid
    return hi


def _lifted_linear_coeffs(problem, assignment):
    """Ambient coefficients of the disc built from straight-line root paths.

    Root j travels a_j -> b_assignment(j) linearly in zeta/sigma; the
    coordinates are then polynomials of degree n in zeta, interpolated
    exactly on n+1 nodes.  Returns free coefficients normalized to sigma=1
    scaling (the linear part is recomputed by the parametrization anyway).
    """
    n, d = problem.n, problem.degree
    if n > d:
        return None
    a = roots_of_point(problem.w)
    b = roots_of_point(problem.z)
    b = b[list(assignment)]
    nodes = np.exp(2j * np.pi * np.arange(d + 1) / (d + 1))
    vand = nodes[:, None] ** np.arange(d + 1)[None, :]
    samples = np.empty((d + 1, n), dtype=complex)
    for i, t in enumerate(nodes):
        samples[i] = symmetrize(a + (b - a) * t)
    coeffs = np.linalg.solve(vand, samples).T  # (n, d+1), constant first
    return coeffs


def lempert_upper_disc_search(
    S,
    z,
    w,
    budget=4096,
    degree=3,
    feasibility_margin=1e-6,
    starts=16,
    boundary_samples=256,
    seed=0,
    delta=DELTA_BOUNDARY,
):
    """Upper bound for the Lempert function via polynomial analytic discs.

    Searches discs f(zeta) = (f_1, ..., f_n)(zeta) with polynomial
    coordinates of degree <= ``degree``, f(0) = w and f(sigma) = z solved
    exactly; feasibility (the disc staying inside S_n(D) with the stated
    margin) is enforced on boundary samples, which suffices for bounded
    bases because the root-modulus exhaustion composed with the disc is
    subharmonic.  Free coefficients and sigma are optimized by seeded
    multistart Nelder-Mead; when the base admits the closed-form
    root-matching bound, that disc is kept as a fallback candidate, so the
    search never reports worse than the permutation bound.
    """
    zz = as_point(z, S.n)
    ww = as_point(w, S.n)
    _require_in(S, zz, delta, "z")
    _require_in(S, ww, delta, "w")

    if np.max(np.abs(zz - ww)) == 0.0:
        return DistanceBound(0.0, 0.0, ("trivial", {}), ("constant_disc", {}))

    perm_bound = None
    if S.base.kind in (UNIT_DISC, DISC):
        perm_bound = lempert_upper_permutation(S, zz, ww)

    problem = _DiscSearchProblem(S, zz, ww, degree, feasibility_margin, boundary_samples)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5EA2C4]))

    start_points = []
    zero_free = np.zeros((S.n, degree - 1), dtype=complex)
    seg_sigma = _bisect_sigma(problem, zero_free)
    if seg_sigma is not None:
        start_points.append((seg_sigma, zero_free))

    if perm_bound is not None and S.n <= degree:
        # assignment pairs z-roots to w-roots; the lifted disc starts at w
        assignment = perm_bound.upper_certificate[1]["assignment"]
        inverse = tuple(int(i) for i in np.argsort(assignment))
        lifted = _lifted_linear_coeffs(problem, inverse)
        if lifted is not None:
            free = lifted[:, 2:]
            base_sigma = math.tanh(perm_bound.upper) if perm_bound.upper > 0 else 0.5
            for factor in (1.02, 1.1, 1.3, 1.6):
                s = min(base_sigma * factor, 1.0 - 1e-9)
                if problem.probe(s, free) <= -problem.margin:
                    start_points.append((s, free))
                    break

    if not start_points:
        start_points.append((0.9, zero_free))

    anchor_sigma, anchor_free = start_points[0]
    scale = 0.15 * float(np.max(np.abs(zz - ww))) + 1e-3
    while len(start_points) < starts:
        jitter = rng.normal(scale=scale, size=(S.n, degree - 1, 2))
        free = anchor_free + jitter[..., 0] + 1j * jitter[..., 1]
        sig = float(np.clip(anchor_sigma * rng.uniform(0.85, 1.15), 1e-6, 1 - 1e-9))
        start_points.append((sig, free))

    per_start = max(40, budget // max(len(start_points), 1))
    for sig, free in start_points:
        if problem.evaluations >= budget:
            break
        x0 = problem.pack(sig, free)
        minimize(
            problem.objective,
            x0,
            method="Nelder-Mead",
            options={
                "maxfev": per_start,
                "xatol": 1e-8,
                "fatol": 1e-10,
                "adaptive": True,
            },
        )

    if problem.best is not None:
        # sigma refinement with the best coefficients held fixed; probe()
        # records improvements, so a failed bisection changes nothing
        sigma, coeffs, _ = problem.best
        _bisect_sigma(problem, coeffs[:, 2:] if degree >= 2 else zero_free, lo=1e-9, hi=sigma)

    candidates = []
    if problem.best is not None:
        sigma, coeffs, bmargin = problem.best
        cert = DiscCertificate(
            coeffs=tuple(tuple(row) for row in coeffs),
            sigma=float(sigma),
            boundary_margin=float(bmargin),
        )
        candidates.append((math.atanh(sigma), cert))
    if perm_bound is not None:
        candidates.append((perm_bound.upper, perm_bound.upper_certificate))

    if not candidates:
        return DistanceBound(
            0.0,
            np.inf,
            ("trivial", {}),
            ("infeasible", {"evaluations": problem.evaluations}),
        )
    value, cert = min(candidates, key=lambda t: t[0])
    return DistanceBound(0.0, float(value), ("trivial", {}), cert)


def kobayashi_lower_projection(S, z, w, boundary_point, delta=DELTA_BOUNDARY):
    """Lower bound for the Kobayashi distance from a separating hyperplane.

    The affine functional vanishing on the hyperplane at ``boundary_point``
    maps S_n(D) into a disc of computable radius (coordinate bounds
    |z_j| <= C(n,j) M^j with M the sup of |lambda| over the closure of D)
    punctured at 0; dropping the puncture, the Poincare distance of the
    bounding disc between the two images is a valid lower bound.
    """
    if not S.base.bounded:
        raise ValueError("projection bound needs a bounded base")
    zz = as_point(z, S.n)
    ww = as_point(w, S.n)
    h = separating_hyperplane(S, boundary_point, delta=delta)
    c, r = S.base.ambient_disc()
    m_sup = abs(c) + r
    mu = abs(h.witness)
    radius = (mu + m_sup) ** S.n
    pz = monic_eval(zz, h.witness)
    pw = monic_eval(ww, h.witness)
    if abs(pz) >= radius or abs(pw) >= radius:
        raise ValueError("points do not lie inside the bounding disc")
    return poincare(pz / radius, pw / radius)


def exhaustion_value(S, z):
    """max_j u(root_j) for the radial exhaustion u of the base disc.

    Negative on S_n(D), plurisubharmonic, and tending to 0 along sequences
    approaching the boundary; independent of root ordering by construction.
    """
    u = neg_exhaustion(S.base)
    zz = as_point(z, S.n)
    roots = roots_of_point(zz)
    margins, _ = _margin_arrays(S.base, roots)
    if float(margins.max()) > DELTA_BOUNDARY:
        raise ValueError("point is not in the closure of the symmetric product")
    return float(np.max(u(roots)))


def radial_g2_sequence(k):
    """The escaping sequence (0, 1 - 2^-k) in the symmetrized bidisc."""
    return np.asarray([0.0, 1.0 - 2.0 ** (-k)], dtype=complex)


def divergence_probe(S, base_point, sequence, K, thresholds=(1.0, 2.0, 5.0)):
    """Trace of Caratheodory lower bounds along an escaping sequence.

    For each k a disc automorphism of the ambient disc is chosen to vanish
    at a root of ``base_point`` and rotated so the escaping root of the k-th
    sequence point lands on the positive axis; the certified lower bound
    between the push-forwards then witnesses divergence.  Requires n = 2 and
    a base contained in the unit disc.
    """
    if S.n != 2:
        raise ValueError("quantitative probe implemented for n = 2")
    amb = S.base.ambient_disc()
    if amb is None or abs(amb[0]) + amb[1] > 1.0 + 1e-12:
        raise ValueError("base must be contained in the unit disc")
    bp = as_point(base_point, 2)
    _require_in(S, bp, DELTA_BOUNDARY, "base_point")
    c, r = amb
    bp_roots = roots_of_point(bp)
    a = (bp_roots[0] - c) / r

    def normalized(lam):
        u = (np.asarray(lam, dtype=complex) - c) / r
        return (u - a) / (1.0 - np.conj(a) * u)

    g2 = symmetrized_polydisc(2)
    rows = []
    for k in range(1, K + 1):
        wk = as_point(sequence(k), 2)
        verdict = member(S, wk)
        if verdict.state != STATE_IN:
            raise ValueError(f"sequence point {k} leaves the domain")
        wk_roots = roots_of_point(wk)
        v = normalized(wk_roots)
        esc = int(np.argmax(np.abs(v)))
        rot = np.conj(v[esc]) / abs(v[esc]) if abs(v[esc]) > 0 else 1.0
        pz = symmetrize(rot * normalized(bp_roots))
        pw = symmetrize(rot * v)
        ck = carath_lower(g2, pz, pw).lower
        rows.append((k, float(ck)))

    first = {}
    for t in thresholds:
        crossed = [k for k, ck in rows if ck > t]
        first[float(t)] = crossed[0] if crossed else None
    return DivergenceReport(
        rows=tuple(rows), thresholds=tuple(float(t) for t in thresholds), first_crossings=first
    )
