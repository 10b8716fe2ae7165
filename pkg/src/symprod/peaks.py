"""Composed peak functions on S_2(D) and their numerical verification.

A peak function at a boundary point has modulus below 1 on the domain and
value exactly 1 at the point.  Here the construction is a composition: a
planar peak function f at a unit-circle point z1, pushed forward to the
symmetrized bidisc, followed by an explicit bidisc peak function at
pi_2(1, f(z2)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domains import (
    DELTA_BOUNDARY,
    STATE_IN,
    STATE_OUT,
    FunctionHandle,
    contains,
    disc_peak_function,
)
from .symgeo import member
from .sympoly import as_point, roots_of_point, symmetrize


@dataclass(frozen=True)
class PeakCandidate:
    """A claimed peak function at a boundary coordinate point.

    ``handle`` evaluates at coordinate points (root-solving internally);
    when the candidate came from the composition construction, the planar
    and bidisc components are kept so evaluation on known root tuples can
    bypass the solver.
    """

    target: np.ndarray
    handle: FunctionHandle
    planar_peak: Optional[FunctionHandle] = None
    g2_peak: Optional[FunctionHandle] = None


@dataclass(frozen=True)
class PeakReport:
    max_interior_modulus: float
    target_value: complex
    approach: tuple
    verdict: str
    samples: int
    diagnostics: Optional[str] = None


def g2_boundary_peak(b):
    """Peak function of the symmetrized bidisc at pi_2(1, b), |b| <= 1.

    F(s, p) = (1 - (2p - s)/(2 - s)) / 2: the rational factor is identically
    -1 on the curve pi_2(1, b), so F is 1 there, and |F| < 1 on the open
    bidisc image.  At the single pole point (2, 1) the continuous extension
    value 1 is used.
    """
    b = complex(b)
    if abs(b) > 1.0 + 1e-12:
        raise ValueError("companion point must lie in the closed unit disc")

    def evaluate(point):
        pt = np.asarray(point, dtype=complex)
        s = pt[..., 0]
        p = pt[..., 1]
        denom = 2.0 - s
        near_pole = np.abs(denom) <= 1e-12
        safe = np.where(near_pole, 1.0, denom)
        phi = (2.0 * p - s) / safe
        val = (1.0 - phi) / 2.0
        val = np.where(near_pole, 1.0 + 0j, val)
        if pt.ndim == 1:
            return complex(val)
        return val

    return FunctionHandle(tag="g2_peak", params={"b": b}, fn=evaluate)


def _composed_eval(planar, g2, roots):
    images = np.asarray(planar(np.asarray(roots, dtype=complex)), dtype=complex)
    return g2(symmetrize(images))


def symmetric_peak(domain, z1, z2, delta=DELTA_BOUNDARY):
    """Peak candidate at symmetrize(z1, z2) on S_2(D) for D inside the unit disc.

    z1 must sit on the unit circle (the peak point of the disc kinds) and z2
    in the closure of D.  The handle is G = F o pushforward(f) with f the
    planar peak at z1 and F the bidisc peak at pi_2(1, f(z2)).
    """
    z1 = complex(z1)
    z2 = complex(z2)
    if abs(abs(z1) - 1.0) > 1e-12:
        raise ValueError("peak point must lie on the unit circle")
    amb = domain.ambient_disc()
    if amb is None or abs(amb[0]) + amb[1] > 1.0 + 1e-12:
        raise ValueError("domain must be contained in the unit disc")
    if contains(domain, z1, delta=delta).state == STATE_IN:
        raise ValueError("peak point must be a boundary point of the domain")
    v2 = contains(domain, z2, delta=delta)
    if v2.state == STATE_OUT and v2.margin > delta:
        raise ValueError("companion point must lie in the closure of the domain")

    f = disc_peak_function(z1)
    g2 = g2_boundary_peak(complex(f(z2)))
    target = symmetrize(np.asarray([z1, z2]))

    def handle_fn(point):
        roots = roots_of_point(as_point(point, n=2))
        return _composed_eval(f, g2, roots)

    handle = FunctionHandle(
        tag="composed_peak",
        params={"z1": z1, "z2": z2, "b": g2.params["b"]},
        fn=handle_fn,
    )
    return PeakCandidate(target=target, handle=handle, planar_peak=f, g2_peak=g2)


def peak_on_roots(candidate, roots):
    """Evaluate a composed candidate on a known root tuple (no solver)."""
    if candidate.planar_peak is None or candidate.g2_peak is None:
        return complex(candidate.handle(symmetrize(roots)))
    return complex(_composed_eval(candidate.planar_peak, candidate.g2_peak, roots))


def default_approach(candidate, k_max=20):
    """Radial approach: the circle root slides out to z1, the other is frozen."""
    params = candidate.handle.params
    if "z1" not in params:
        raise ValueError("candidate carries no approach parameters")
    z1, z2 = params["z1"], params["z2"]
    return [
        (k, symmetrize(np.asarray([z1 * (1.0 - 2.0 ** (-k)), z2])))
        for k in range(1, k_max + 1)
    ]


def verify_peak(candidate, S, samples=10_000, approach=None, seed=0, k_max=20, delta=DELTA_BOUNDARY):
    """Sample-based verification of a peak candidate.

    Interior points are drawn as root tuples in D and symmetrized; the
    report records the max interior modulus, the value at the target, and
    the moduli along the approach sequence.  PASS requires the target value
    within 1e-9 of 1 and every interior modulus strictly below 1.
    """
    verdict = member(S, candidate.target, delta=delta)
    if verdict.state == STATE_IN or verdict.margin > 1e-6:
        raise ValueError("target must be a boundary point of the symmetric product")

    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xBEAC]))
    diagnostics = None
    max_mod = 0.0
    try:
        drawn = 0
        while drawn < samples:
            batch = min(4096, samples - drawn)
            pts = _sample_base(S.base, rng, (batch, S.n), delta)
            if candidate.planar_peak is not None and candidate.g2_peak is not None:
                images = np.asarray(candidate.planar_peak(pts), dtype=complex)
                s = images.sum(axis=1)
                p = images.prod(axis=1)
                vals = candidate.g2_peak(np.stack([s, p], axis=-1))
            else:
                vals = np.asarray(
                    [candidate.handle(symmetrize(row)) for row in pts], dtype=complex
                )
            max_mod = max(max_mod, float(np.abs(vals).max()))
            drawn += batch

        target_value = complex(candidate.handle(candidate.target))

        if approach is None:
            approach = default_approach(candidate, k_max=k_max)
        table = tuple(
            (int(k), float(abs(candidate.handle(point)))) for k, point in approach
        )
    except (ValueError, RuntimeError) as exc:
        return PeakReport(
            max_interior_modulus=float("nan"),
            target_value=complex("nan"),
            approach=(),
            verdict="FAIL",
            samples=samples,
            diagnostics=f"evaluation failed: {exc}",
        )

    ok = max_mod < 1.0 and abs(target_value - 1.0) <= 1e-9
    return PeakReport(
        max_interior_modulus=max_mod,
        target_value=target_value,
        approach=table,
        verdict="PASS" if ok else "FAIL",
        samples=samples,
        diagnostics=diagnostics,
    )


def _sample_base(base, rng, shape, delta):
    """Uniform samples of the base domain, rejection-thinned near punctures."""
    c, r = base.ambient_disc()
    out = np.empty(shape, dtype=complex)
    flat = out.ravel()
    need = flat.size
    got = 0
    while got < need:
        m = max(need - got, 256)
        u = rng.uniform(0.0, 1.0, m)
        theta = rng.uniform(0.0, 2.0 * np.pi, m)
        pts = c + r * np.sqrt(u) * np.exp(1j * theta)
        if base.punctures:
            p = np.asarray(base.punctures)
            keep = (np.abs(pts[:, None] - p[None, :]) > 10.0 * delta).all(axis=1)
            pts = pts[keep]
        take = min(pts.size, need - got)
        flat[got : got + take] = pts[:take]
        got += take
    return out
