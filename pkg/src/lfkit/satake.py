"""Local Satake data: recovery from Hecke eigenvalues and bound checks.

Provides:
    * SatakeLocal, HeckeEigenvalueVector, ThetaBound, BoundCheck
    * alphas_from_hecke  -- roots of the local characteristic polynomial
    * hecke_from_alphas  -- elementary symmetric functions of the parameters
    * power_sum          -- r-th power sums with an independent recurrence check
    * theta_bound        -- best known progress toward the local bound, by degree
    * check_bound        -- |alpha| <= p**theta test with argmax reporting

Key identity: the local parameters alpha_1..alpha_n at p are the roots of

    X**n + sum_{j=1}^{n-1} (-1)**j A_j X**(n-j) + (-1)**n,

where A_j is the eigenvalue with p in slot j, so A_j is the j-th elementary
symmetric function of the alphas and their product is 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import DEFAULT, Profile
from .errors import DomainError, NumericError
from .numutil import elementary_symmetric

__all__ = [
    "SatakeLocal",
    "HeckeEigenvalueVector",
    "ThetaBound",
    "BoundCheck",
    "alphas_from_hecke",
    "hecke_from_alphas",
    "power_sum",
    "theta_bound",
    "check_bound",
    "aberth_roots",
]


@dataclass(frozen=True)
class SatakeLocal:
    """Satake parameters of one local factor.

    Attributes:
        p: the prime.
        alphas: complex parameters, length = degree of the form.
    """

    p: int
    alphas: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "alphas", np.asarray(self.alphas, dtype=complex))
        if self.p < 2:
            raise DomainError(f"local prime must be >= 2, got {self.p}")
        if len(self.alphas) < 1:
            raise DomainError("at least one Satake parameter is required")

    @property
    def degree(self) -> int:
        return len(self.alphas)

    def product_gap(self) -> float:
        """|prod(alphas) - 1|; zero for admissible local data."""
        return abs(complex(np.prod(self.alphas)) - 1.0)

    def self_dual_gap(self) -> float:
        """Distance of the parameter multiset from its conjugate multiset.

        Uses elementary symmetric functions: the two multisets coincide
        exactly iff every e_j is real.
        """
        e = elementary_symmetric(self.alphas)
        return float(np.max(np.abs(e.imag) / (1.0 + np.abs(e))))

    def validate(self, self_dual: bool = False, profile: Profile = DEFAULT) -> None:
        tol = profile.tol.invariant
        gap = self.product_gap()
        if gap > tol:
            raise DomainError(
                f"alphas at p={self.p} have product gap {gap:.3e} > {tol:.1e}"
            )
        if self_dual:
            sd = self.self_dual_gap()
            if sd > tol:
                raise DomainError(
                    f"alphas at p={self.p} are not conjugation-closed "
                    f"(gap {sd:.3e} > {tol:.1e})"
                )


@dataclass(frozen=True)
class HeckeEigenvalueVector:
    """Eigenvalues A(1,..,p,..,1) with p running through slots 1..n-1.

    Attributes:
        p: the prime.
        values: complex array, entry j-1 has p in slot j.
    """

    p: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))
        if self.p < 2:
            raise DomainError(f"local prime must be >= 2, got {self.p}")
        if len(self.values) < 1:
            raise DomainError("eigenvalue vector needs degree >= 2")

    @property
    def degree(self) -> int:
        return len(self.values) + 1

    def dual_gap(self) -> float:
        """Max deviation from the slot symmetry A_j = conj(A_{n-j})."""
        rev = np.conj(self.values[::-1])
        return float(np.max(np.abs(self.values - rev) / (1.0 + np.abs(self.values))))


@dataclass(frozen=True)
class ThetaBound:
    """Best known bound |alpha| <= p**theta for degree n.

    Attributes:
        n: degree.
        theta: exact rational exponent.
    """

    n: int
    theta: Fraction

    def __post_init__(self):
        if not (0 <= self.theta <= Fraction(1, 2)):
            raise DomainError(f"theta {self.theta} outside [0, 1/2]")

    @property
    def value(self) -> float:
        return float(self.theta)


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of a |alpha| <= p**theta check.

    Attributes:
        satisfied: whether every parameter obeys the bound (with slack).
        worst_index: index of the largest parameter.
        worst_magnitude: its magnitude.
        limit: the cap p**theta that was tested.
    """

    satisfied: bool
    worst_index: int
    worst_magnitude: float
    limit: float


_THETA_SMALL = {2: Fraction(7, 64), 3: Fraction(5, 14), 4: Fraction(9, 22)}


def theta_bound(n: int) -> ThetaBound:
    """Sharpest generally available exponent toward |alpha_p| <= p**(1/2).

    Degrees 2-4 have special values; degree n >= 5 gets 1/2 - 1/(n**2 + 1).

    Raises:
        DomainError: for n < 2.
    """
    if n < 2:
        raise DomainError(f"theta_bound needs degree >= 2, got {n}")
    if n in _THETA_SMALL:
        return ThetaBound(n=n, theta=_THETA_SMALL[n])
    return ThetaBound(n=n, theta=Fraction(1, 2) - Fraction(1, n * n + 1))


def check_bound(s: SatakeLocal, theta: float, profile: Profile = DEFAULT) -> BoundCheck:
    """Test max_i |alpha_i| <= p**theta with multiplicative slack."""
    mags = np.abs(s.alphas)
    worst = int(np.argmax(mags))
    limit = float(s.p) ** float(theta)
    ok = bool(mags[worst] <= limit * (1.0 + profile.tol.bound_slack))
    return BoundCheck(
        satisfied=ok,
        worst_index=worst,
        worst_magnitude=float(mags[worst]),
        limit=limit,
    )


def characteristic_coefficients(h: HeckeEigenvalueVector) -> np.ndarray:
    """Monic coefficients (descending powers) of the local characteristic polynomial."""
    n = h.degree
    coeffs = np.empty(n + 1, dtype=complex)
    coeffs[0] = 1.0
    signs = (-1.0) ** np.arange(1, n)
    coeffs[1:n] = signs * h.values
    coeffs[n] = (-1.0) ** n
    return coeffs


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.full_like(z, coeffs[0])
    for c in coeffs[1:]:
        out = out * z + c
    return out


def aberth_roots(
    coeffs: np.ndarray,
    profile: Profile = DEFAULT,
) -> tuple[np.ndarray, float]:
    """All roots of a monic polynomial by simultaneous (Aberth) iteration.

    Args:
        coeffs: complex coefficients, descending powers, coeffs[0] == 1.

    Returns:
        (roots, residual) where residual = max |poly(root)|.

    Raises:
        NumericError: when the iteration budget is exhausted before the
            residual target is met; carries the achieved residual.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    n = len(coeffs) - 1
    if n < 1:
        raise DomainError("polynomial must have positive degree")
    if abs(coeffs[0] - 1.0) > 1e-14:
        raise DomainError("polynomial must be monic")
    scale = 1.0 + float(np.max(np.abs(coeffs)))
    target = profile.tol.root_residual * scale
    dcoeffs = coeffs[:-1] * np.arange(n, 0, -1)

    radius = 1.0 + float(np.max(np.abs(coeffs[1:])))
    angles = 2.0 * np.pi * (np.arange(n) + 0.375) / n
    z = radius * np.exp(1j * angles)

    residual = math.inf
    for _ in range(profile.limits.root_iterations):
        pz = _horner(coeffs, z)
        residual = float(np.max(np.abs(pz)))
        if residual <= max(target * 1e-3, 1e-14 * scale):
            break
        dz = _horner(dcoeffs, z)
        dz = np.where(np.abs(dz) < 1e-300, 1e-300, dz)
        newton = pz / dz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        srep = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * srep
        denom = np.where(np.abs(denom) < 1e-300, 1e-300, denom)
        step = newton / denom
        z = z - step
        if float(np.max(np.abs(step))) < 1e-16 * (1.0 + float(np.max(np.abs(z)))):
            residual = float(np.max(np.abs(_horner(coeffs, z))))
            break
    if residual > target:
        raise NumericError(
            f"root refinement stalled at residual {residual:.3e} "
            f"(target {target:.3e})",
            residual=residual,
        )
    return z, residual


def alphas_from_hecke(
    h: HeckeEigenvalueVector,
    self_dual: bool = False,
    profile: Profile = DEFAULT,
) -> SatakeLocal:
    """Recover local Satake parameters from a Hecke eigenvalue vector.

    The recovered multiset is rescaled by the n-th root of its product so
    the unit-product invariant holds to machine precision; the rescaling is
    of the same order as the root-finding error.

    Raises:
        NumericError: when the residual target cannot be met.
    """
    coeffs = characteristic_coefficients(h)
    roots, _ = aberth_roots(coeffs, profile=profile)
    prod = complex(np.prod(roots))
    if abs(prod) > 1e-300:
        roots = roots * cmath.exp(-cmath.log(prod) / len(roots))
    residual = float(np.max(np.abs(_horner(coeffs, roots))))
    scale = 1.0 + float(np.max(np.abs(coeffs)))
    if residual > profile.tol.root_residual * scale:
        raise NumericError(
            f"recovered parameters at p={h.p} have residual {residual:.3e}",
            residual=residual,
        )
    local = SatakeLocal(p=h.p, alphas=roots)
    local.validate(self_dual=self_dual, profile=profile)
    return local


def hecke_from_alphas(s: SatakeLocal) -> HeckeEigenvalueVector:
    """Eigenvalue vector (e_1, .., e_{n-1}) of the parameter multiset."""
    e = elementary_symmetric(s.alphas)
    return HeckeEigenvalueVector(p=s.p, values=e[1 : s.degree])


def power_sum(s: SatakeLocal, r: int, profile: Profile = DEFAULT) -> complex:
    """Sum of r-th powers of the local parameters.

    Evaluated directly and, independently, through the Newton recurrence on
    elementary symmetric functions; disagreement raises.

    Raises:
        DomainError: for r < 1.
        NumericError: when the two routes disagree beyond the cross-check
            tolerance.
    """
    if r < 1:
        raise DomainError(f"power sum needs r >= 1, got {r}")
    direct = complex(np.sum(s.alphas ** r))
    recur = _newton_power_sum(s.alphas, r)
    gap = abs(direct - recur)
    if gap > profile.tol.cross_check * max(1.0, abs(direct)):
        raise NumericError(
            f"power sum routes disagree by {gap:.3e} at p={s.p}, r={r}",
            residual=gap,
        )
    return direct


def _newton_power_sum(alphas: np.ndarray, r: int) -> complex:
    n = len(alphas)
    e = elementary_symmetric(alphas)
    p = np.zeros(r + 1, dtype=complex)
    for k in range(1, r + 1):
        acc = 0.0 + 0.0j
        for j in range(1, min(k - 1, n) + 1):
            acc += (-1.0) ** (j - 1) * e[j] * p[k - j]
        if k <= n:
            acc += (-1.0) ** (k - 1) * k * e[k]
        p[k] = acc
    return complex(p[r])
