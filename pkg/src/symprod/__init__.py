"""Symmetric products of planar domains.

Conversions between root multisets and elementary-symmetric coordinates,
membership and linear-convexity certificates for S_n(D), the hyperbolicity
and completeness classifier, certified invariant-distance bounds,
exhaustion functions, and composed peak functions.
"""

from .domains import (
    COMPLEMENT_FINITE,
    DELTA_BOUNDARY,
    DISC,
    DISC_MINUS_FINITE,
    STATE_BOUNDARY,
    STATE_IN,
    STATE_OUT,
    UNIT_DISC,
    FunctionHandle,
    MembershipVerdict,
    PlanarDomain,
    c_separating_function,
    complement_cardinality,
    contains,
    disc_automorphism,
    disc_peak_function,
    identity_map,
    mobius,
    mobius_compose,
    neg_exhaustion,
)
from .invmetrics import (
    DiscCertificate,
    DistanceBound,
    DivergenceReport,
    carath_lower,
    divergence_probe,
    exhaustion_value,
    kobayashi_lower_projection,
    lempert_upper_disc_search,
    lempert_upper_permutation,
    phi_omega,
    poincare,
    radial_g2_sequence,
)
from .peaks import (
    PeakCandidate,
    PeakReport,
    g2_boundary_peak,
    peak_on_roots,
    symmetric_peak,
    verify_peak,
)
from .symgeo import (
    VERDICT_COMPLETE,
    VERDICT_NOT_HYPERBOLIC,
    AffineSubspace,
    Classification,
    GeneralPositionReport,
    Hyperplane,
    SymProduct,
    affine_iso_cstar2,
    affine_iso_cstar2_inverse,
    arrangement,
    classify,
    entire_curve_witness,
    intersection_space,
    member,
    push_forward,
    separating_hyperplane,
    symmetric_eval,
    symmetrized_polydisc,
)
from .sympoly import (
    RootMatch,
    RootSolveError,
    collision_gap,
    match_roots,
    monic_eval,
    roots_batch,
    roots_of_point,
    symmetrize,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
