"""Central numeric policy: tolerances, size caps, and assertion constants.

Every magic number used by more than one module lives here so a single
profile switch retightens the whole pipeline consistently.  ``DEFAULT``
matches the documented contracts of the public operations; ``STRICT``
tightens the purely numeric targets where the algorithms have headroom and
leaves the desk-scale assertion constants alone (those encode what the
experiments assert, not how accurately they compute).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    """Numeric tolerances and policy constants for one run profile.

    Attributes:
        invariant: validation slack for structural invariants (products of
            Satake parameters, conjugation closure, imaginary-part checks).
        root_residual: polynomial residual target for Satake recovery,
            scaled by (1 + max coefficient magnitude).
        roundtrip: multiset tolerance for recover/rebuild round trips.
        cross_check: disagreement allowed between two internal evaluation
            routes of the same quantity (direct vs recurrence power sums).
        relation_residual: residual allowed in Hecke multiplicative
            relation checks.
        table_residual: residual for table-level identities
            (multiplicativity, generating-function consistency).
        gamma_rel: relative error target for the Gamma evaluator.
        zeta_abs: absolute error target for the zeta evaluator.
        kernel_check: residual target for the exponential-smoothing kernel
            identity check.
        contour_identity: residual target for series-vs-contour identity
            checks.
        jensen: convergence target for Jensen disc averages.
        mean_square_rel: relative agreement between closed-form mean squares
            and quadrature oracles.
        report_ratio: slack when re-deriving report ratios from observed and
            bound values.
        weight_floor: exponential weights below this are truncated to zero.
        bound_slack: multiplicative slack for sharp inequality checks.
        mv_constant: asserted off-diagonal constant in mean-square
            discrepancy checks (classical value 3*pi, asserted policy).
        lemma5_bound: asserted cap for smoothed tail sums.
        lemma6_factor: asserted head-sum factor, multiplied by degree**2.
        thm2_factor: asserted mean-square factor, multiplied by degree**2.
        thm2_growth_per_decade: allowed growth of the mean-square ratio per
            decade of T.
        oracle_base_tolerance: base relative envelope for the zeta oracle
            cross-check before the smoothing share is added.
    """

    invariant: float = 1e-10
    root_residual: float = 1e-9
    roundtrip: float = 1e-8
    cross_check: float = 1e-9
    relation_residual: float = 1e-9
    table_residual: float = 1e-8
    gamma_rel: float = 1e-10
    zeta_abs: float = 1e-9
    kernel_check: float = 1e-6
    contour_identity: float = 1e-5
    jensen: float = 1e-8
    mean_square_rel: float = 1e-9
    report_ratio: float = 1e-12
    weight_floor: float = 1e-18
    bound_slack: float = 1e-12
    mv_constant: float = 3.0 * math.pi
    lemma5_bound: float = 1.0
    lemma6_factor: float = 5.0
    thm2_factor: float = 10.0
    thm2_growth_per_decade: float = 1.5
    oracle_base_tolerance: float = 0.2


@dataclass(frozen=True)
class Limits:
    """Hard size caps guarding memory and runtime.

    Attributes:
        sieve: largest admissible sieve limit.
        table: largest dense coefficient table.
        tau: largest exact Ramanujan tau table.
        mean_square_terms: largest Dirichlet polynomial accepted by the
            closed-form mean square (the pair sum is quadratic in length).
        contour_nodes_min: fewest nodes accepted on a vertical segment.
        disc_nodes_min: fewest angular nodes accepted on a disc.
        jensen_nodes_max: node budget for disc-average doubling.
        root_iterations: iteration budget for simultaneous root refinement.
    """

    sieve: int = 100_000_000
    table: int = 10_000_000
    tau: int = 1_000_000
    mean_square_terms: int = 200_000
    contour_nodes_min: int = 16
    disc_nodes_min: int = 64
    jensen_nodes_max: int = 1 << 18
    root_iterations: int = 200


@dataclass(frozen=True)
class Profile:
    """A named pairing of tolerances and caps."""

    name: str
    tol: Tolerances
    limits: Limits


DEFAULT = Profile(name="default", tol=Tolerances(), limits=Limits())

STRICT = Profile(
    name="strict",
    tol=replace(
        Tolerances(),
        invariant=1e-11,
        root_residual=1e-10,
        cross_check=1e-10,
        relation_residual=1e-10,
        gamma_rel=1e-11,
        zeta_abs=1e-10,
        kernel_check=1e-8,
        contour_identity=1e-6,
        jensen=1e-9,
        mean_square_rel=1e-10,
    ),
    limits=Limits(),
)

PROFILES = {p.name: p for p in (DEFAULT, STRICT)}


def get_profile(name: str) -> Profile:
    """Look up a profile by name, raising ``KeyError`` for unknown names."""
    return PROFILES[name]


# Default experiment parameters shared by the estimators and the CLI.
ETA_DEFAULT = 0.4
EPS1_DEFAULT = 0.05
SIGMA0_GRID = (0.55, 0.6, 0.75, 0.9)
Y_GRID = (1e2, 1e3, 1e4, 1e5)
P_GRID = (10**3, 10**4, 10**5, 10**6)
T_GRID = (1e2, 1e3, 1e4)
Y_MIN = 10.0
R_MAX_DEFAULT = 20
