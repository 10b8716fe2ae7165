"""Planar domains D in C with decidable membership, and the holomorphic
gadgets (peak, separating, exhaustion functions) built on them.

Four domain kinds are supported: the unit disc, a general disc, the
complement of a finite puncture set, and a disc with finitely many
punctures removed.  Membership is an exact geometric test per kind; the
verdict carries a signed margin (Euclidean distance to the boundary,
negative inside).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

UNIT_DISC = "unit_disc"
DISC = "disc"
COMPLEMENT_FINITE = "complement_finite"
DISC_MINUS_FINITE = "disc_minus_finite"

STATE_IN = "IN"
STATE_OUT = "OUT"
STATE_BOUNDARY = "BOUNDARY"

DELTA_BOUNDARY = 1e-9


@dataclass(frozen=True)
class PlanarDomain:
    kind: str
    center: complex = 0j
    radius: float = 1.0
    punctures: tuple = ()

    def __post_init__(self):
        if self.kind not in (UNIT_DISC, DISC, COMPLEMENT_FINITE, DISC_MINUS_FINITE):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind in (DISC, DISC_MINUS_FINITE) and not self.radius > 0:
            raise ValueError("disc radius must be positive")
        pts = tuple(complex(p) for p in self.punctures)
        object.__setattr__(self, "punctures", pts)
        object.__setattr__(self, "center", complex(self.center))
        if self.kind in (COMPLEMENT_FINITE, DISC_MINUS_FINITE):
            if not pts:
                raise ValueError("puncture set must be non-empty")
            arr = np.asarray(pts)
            if not np.all(np.isfinite(arr)):
                raise ValueError("punctures must be finite")
            if len(pts) > 1:
                diff = np.abs(arr[:, None] - arr[None, :])
                np.fill_diagonal(diff, np.inf)
                if diff.min() <= 0.0:
                    raise ValueError("punctures must be pairwise distinct")
        if self.kind == DISC_MINUS_FINITE:
            c, r = self.center, self.radius
            if any(abs(p - c) >= r for p in self.punctures):
                raise ValueError("punctures must lie strictly inside the disc")

    @classmethod
    def unit_disc(cls):
        return cls(kind=UNIT_DISC)

    @classmethod
    def disc(cls, center, radius):
        return cls(kind=DISC, center=complex(center), radius=float(radius))

    @classmethod
    def complement_finite(cls, punctures):
        return cls(kind=COMPLEMENT_FINITE, punctures=tuple(punctures))

    @classmethod
    def disc_minus_finite(cls, center, radius, punctures):
        return cls(
            kind=DISC_MINUS_FINITE,
            center=complex(center),
            radius=float(radius),
            punctures=tuple(punctures),
        )

    @property
    def bounded(self):
        return self.kind in (UNIT_DISC, DISC, DISC_MINUS_FINITE)

    def ambient_disc(self):
        """(center, radius) of the surrounding disc, or None if unbounded."""
        if self.kind == UNIT_DISC:
            return 0j, 1.0
        if self.kind in (DISC, DISC_MINUS_FINITE):
            return self.center, self.radius
        return None


@dataclass(frozen=True)
class MembershipVerdict:
    state: str
    margin: float


def _margin_arrays(domain, lam):
    """Vectorized signed margins plus an exact-puncture-hit mask."""
    z = np.asarray(lam, dtype=complex)
    if domain.kind == UNIT_DISC:
        return np.abs(z) - 1.0, np.zeros(z.shape, dtype=bool)
    if domain.kind == DISC:
        return np.abs(z - domain.center) - domain.radius, np.zeros(z.shape, dtype=bool)
    p = np.asarray(domain.punctures)
    dist = np.abs(z[..., None] - p)
    nearest = dist.min(axis=-1)
    hit = (dist == 0.0).any(axis=-1)
    if domain.kind == COMPLEMENT_FINITE:
        return -nearest, hit
    circle = np.abs(z - domain.center) - domain.radius
    inside = circle < 0.0
    margin = np.where(inside, np.maximum(circle, -nearest), circle)
    return margin, hit & inside


def contains(domain, lam, delta=DELTA_BOUNDARY):
    """Membership of a single complex number in D.

    A point exactly on a puncture is OUT (set membership is exact there);
    otherwise the verdict follows the signed margin with BOUNDARY band
    |margin| <= delta.
    """
    z = complex(lam)
    margin, hit = _margin_arrays(domain, np.asarray(z))
    m = float(margin)
    if bool(hit):
        return MembershipVerdict(STATE_OUT, m)
    if m > delta:
        return MembershipVerdict(STATE_OUT, m)
    if m < -delta:
        return MembershipVerdict(STATE_IN, m)
    return MembershipVerdict(STATE_BOUNDARY, m)


def complement_cardinality(domain):
    """Number of points in C \\ D: an integer for finitely many, else inf."""
    if domain.kind == COMPLEMENT_FINITE:
        return len(domain.punctures)
    return np.inf


@dataclass(eq=False)
class FunctionHandle:
    """Closed-form function with a serializable tag + parameter dict.

    ``fn`` evaluates at a complex argument (scalars and ndarrays both work);
    ``domain`` when present states where arguments must lie (closure
    included).
    """

    tag: str
    params: dict
    fn: Callable = field(repr=False)
    domain: Optional[PlanarDomain] = None

    def __call__(self, lam):
        return self.fn(lam)


def identity_map():
    return FunctionHandle(tag="identity", params={}, fn=lambda lam: lam)


def constant_map(c):
    c = complex(c)
    return FunctionHandle(
        tag="constant",
        params={"value": c},
        fn=lambda lam: np.full_like(np.asarray(lam, dtype=complex), c)
        if np.ndim(lam)
        else c,
    )


def mobius(a, b, c, d, domain=None):
    """(a*lam + b) / (c*lam + d)."""
    a, b, c, d = complex(a), complex(b), complex(c), complex(d)
    if abs(a * d - b * c) == 0.0:
        raise ValueError("degenerate Mobius coefficients")
    return FunctionHandle(
        tag="mobius",
        params={"a": a, "b": b, "c": c, "d": d},
        fn=lambda lam: (a * np.asarray(lam, dtype=complex) + b)
        / (c * np.asarray(lam, dtype=complex) + d),
        domain=domain,
    )


def mobius_compose(f, g):
    """Mobius composition f(g(.)) via coefficient-matrix multiplication."""
    if f.tag != "mobius" or g.tag != "mobius":
        raise ValueError("both handles must be Mobius maps")
    fa, fb, fc, fd = (f.params[k] for k in "abcd")
    ga, gb, gc, gd = (g.params[k] for k in "abcd")
    return mobius(
        fa * ga + fb * gc,
        fa * gb + fb * gd,
        fc * ga + fd * gc,
        fc * gb + fd * gd,
        domain=g.domain,
    )


def disc_automorphism(a):
    """Automorphism of the unit disc vanishing at a: lam -> (lam-a)/(1-conj(a)lam)."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise ValueError("base point must lie in the open unit disc")
    return mobius(1.0, -a, -np.conj(a), 1.0, domain=PlanarDomain.unit_disc())


def compose(outer, inner):
    """Generic composition handle outer(inner(.))."""
    return FunctionHandle(
        tag="compose",
        params={"outer": outer.tag, "inner": inner.tag},
        fn=lambda lam: outer.fn(inner.fn(lam)),
        domain=inner.domain,
    )


def disc_peak_function(zeta):
    """f(lam) = (1 + lam * conj(zeta)) / 2: peaks at zeta on the closed unit disc.

    f(zeta) = 1 and |f| < 1 everywhere else on the closed disc.
    """
    zeta = complex(zeta)
    if abs(abs(zeta) - 1.0) > 1e-12:
        raise ValueError("peak point must lie on the unit circle")
    cz = np.conj(zeta)
    return FunctionHandle(
        tag="disc_peak",
        params={"zeta": zeta},
        fn=lambda lam: (1.0 + np.asarray(lam, dtype=complex) * cz) / 2.0,
        domain=PlanarDomain.unit_disc(),
    )


def c_separating_function(domain, lam1, avoid):
    """Bounded holomorphic h with h(lam1) = 0 and h != 0 on ``avoid``.

    h is the automorphism of the ambient disc vanishing at lam1 (pulled back
    through the affine normalization of the ambient disc), so sup|h| <= 1 and
    h vanishes only at lam1.
    """
    amb = domain.ambient_disc()
    if amb is None:
        raise ValueError("domain has no ambient disc")
    lam1 = complex(lam1)
    avoid = tuple(complex(x) for x in avoid)
    if contains(domain, lam1).state != STATE_IN:
        raise ValueError("base point must lie in the domain")
    for x in avoid:
        if contains(domain, x).state != STATE_IN:
            raise ValueError("avoid points must lie in the domain")
        if x == lam1:
            raise ValueError("base point must not belong to the avoid set")
    c, r = amb
    a = (lam1 - c) / r

    def h(lam):
        u = (np.asarray(lam, dtype=complex) - c) / r
        return (u - a) / (1.0 - np.conj(a) * u)

    return FunctionHandle(
        tag="disc_separator",
        params={"zero": lam1, "center": c, "radius": r},
        fn=h,
        domain=PlanarDomain.disc(c, r) if domain.kind != UNIT_DISC else PlanarDomain.unit_disc(),
    )


def neg_exhaustion(domain):
    """u(lam) = |lam - c|/r - 1: negative subharmonic exhaustion of a disc."""
    if domain.kind not in (UNIT_DISC, DISC):
        raise ValueError("exhaustion formula only supported for disc kinds")
    c, r = domain.ambient_disc()
    return FunctionHandle(
        tag="radial_exhaustion",
        params={"center": c, "radius": r},
        fn=lambda lam: np.abs(np.asarray(lam, dtype=complex) - c) / r - 1.0,
        domain=domain,
    )
