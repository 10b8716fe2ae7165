"""JSON/CSV encoding of the public result types.

Complex numbers serialize as two-element arrays [re, im] everywhere; the
complement count "inf" is a string so the JSON stays schema-stable.  Output
is canonical (sorted keys, fixed float formatting for CSV) so identical
requests produce byte-identical artifacts.
"""

from __future__ import annotations

import json

import numpy as np

from .domains import COMPLEMENT_FINITE, DISC, DISC_MINUS_FINITE, UNIT_DISC, PlanarDomain


def c2j(value):
    value = complex(value)
    return [value.real, value.imag]


def j2c(pair):
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise ValueError("complex literals must be [re, im] pairs")
    return complex(float(pair[0]), float(pair[1]))


def point_to_json(point):
    return [c2j(v) for v in np.asarray(point, dtype=complex)]


def point_from_json(data):
    return np.asarray([j2c(v) for v in data], dtype=complex)


def domain_to_json(domain):
    data = {"kind": domain.kind}
    if domain.kind in (DISC, DISC_MINUS_FINITE):
        data["center"] = c2j(domain.center)
        data["radius"] = domain.radius
    if domain.kind in (COMPLEMENT_FINITE, DISC_MINUS_FINITE):
        data["punctures"] = [c2j(p) for p in domain.punctures]
    return data


def domain_from_json(data):
    kind = data.get("kind")
    if kind == UNIT_DISC:
        return PlanarDomain.unit_disc()
    if kind == DISC:
        return PlanarDomain.disc(j2c(data["center"]), float(data["radius"]))
    if kind == COMPLEMENT_FINITE:
        return PlanarDomain.complement_finite([j2c(p) for p in data["punctures"]])
    if kind == DISC_MINUS_FINITE:
        return PlanarDomain.disc_minus_finite(
            j2c(data["center"]),
            float(data["radius"]),
            [j2c(p) for p in data["punctures"]],
        )
    raise ValueError(f"unknown domain kind {kind!r}")


def verdict_to_json(verdict):
    return {"state": verdict.state, "margin": verdict.margin}


def hyperplane_to_json(h):
    return {
        "witness": c2j(h.witness),
        "coeffs": [c2j(c) for c in h.coeffs],
        "offset": c2j(h.offset),
    }


def classification_to_json(c):
    return {
        "verdict": c.verdict,
        "complement": "inf" if np.isinf(c.complement) else int(c.complement),
        "threshold": c.threshold,
        "witness": c.witness.tag if c.witness is not None else None,
        "witness_reason": c.witness_reason,
    }


def _certificate_to_json(cert):
    if cert is None:
        return None
    if hasattr(cert, "coeffs") and hasattr(cert, "sigma"):
        return {
            "tag": "poly_disc",
            "coeffs": [[c2j(c) for c in row] for row in cert.coeffs],
            "sigma": cert.sigma,
            "boundary_margin": cert.boundary_margin,
        }
    tag, params = cert
    encoded = {}
    for key, value in params.items():
        if isinstance(value, complex):
            encoded[key] = c2j(value)
        elif isinstance(value, tuple):
            encoded[key] = list(value)
        else:
            encoded[key] = value
    return {"tag": tag, "params": encoded}


def bound_to_json(bound):
    return {
        "lower": bound.lower,
        "upper": "inf" if np.isinf(bound.upper) else bound.upper,
        "lower_cert": _certificate_to_json(bound.lower_certificate),
        "upper_cert": _certificate_to_json(bound.upper_certificate),
    }


def peak_report_to_json(report, target=None):
    data = {
        "target": point_to_json(target) if target is not None else None,
        "max_interior_modulus": report.max_interior_modulus,
        "target_value": c2j(report.target_value)
        if report.target_value == report.target_value
        else None,
        "approach": [{"k": k, "modulus": m} for k, m in report.approach],
        "verdict": report.verdict,
    }
    if report.diagnostics:
        data["diagnostics"] = report.diagnostics
    return data


def general_position_to_json(report):
    return {
        "n": report.n,
        "num_hyperplanes": report.num_hyperplanes,
        "subsets_checked": report.subsets_checked,
        "failures": [list(map(int, subset)) for subset, _rank in report.failures],
        "min_singular_value": report.min_singular_value,
        "all_pass": report.all_pass,
    }


def divergence_csv_lines(report):
    """CSV rows k,c_k,crossed_1,crossed_2,crossed_5 (17 significant digits)."""
    names = [f"crossed_{t:g}" for t in report.thresholds]
    lines = ["k,c_k," + ",".join(names)]
    for k, ck in report.rows:
        flags = ",".join("1" if ck > t else "0" for t in report.thresholds)
        lines.append(f"{k},{ck:.17g},{flags}")
    return lines


def canonical_dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
