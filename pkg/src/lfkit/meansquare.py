"""Exact second moments of Dirichlet polynomials over [T, 2T].

Provides:
    * DirichletPolynomial, MeanSquareResult
    * exact_mean_square  -- closed-form integral, no time discretization
    * mv_discrepancy     -- off-diagonal mass against the classical majorant
    * truncated_tail_split / smoothed_logderiv_polynomial
    * split_boundary, hard_cutoff -- the truncation bookkeeping

Key identity: for distinct positive frequencies,

    int_T^{2T} |sum_m a_m m^{-it}|^2 dt
        = T sum_m |a_m|^2
        + sum_{m != k} a_m conj(a_k) ((k/m)^{2iT} - (k/m)^{iT}) / (i log(k/m)).

The pair sum runs in fixed ascending row blocks with exactly-rounded
block combination, so results do not depend on chunking or worker counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Profile
from .errors import CapacityError, DomainError, NumericError
from .numutil import fsum_array

__all__ = [
    "DirichletPolynomial",
    "MeanSquareResult",
    "SplitPolynomial",
    "exact_mean_square",
    "mv_discrepancy",
    "truncated_tail_split",
    "smoothed_logderiv_polynomial",
    "split_boundary",
    "hard_cutoff",
]

_BLOCK = 512


@dataclass(frozen=True)
class DirichletPolynomial:
    """A finite sum a_1 f_1^{-it} + .. with strictly increasing integer frequencies.

    Attributes:
        freqs: ascending distinct positive int64 frequencies.
        coeffs: complex coefficients, same length.
    """

    freqs: np.ndarray = field(repr=False)
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=np.int64)
        coeffs = np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "coeffs", coeffs)
        if freqs.shape != coeffs.shape:
            raise DomainError("frequencies and coefficients must align")
        if len(freqs) and int(freqs.min()) < 1:
            raise DomainError("frequencies must be positive integers")
        if len(freqs) > 1:
            diffs = np.diff(freqs)
            if np.any(diffs == 0):
                dup = int(freqs[1:][diffs == 0][0])
                raise DomainError(f"duplicate frequency {dup} in polynomial")
            if np.any(diffs < 0):
                raise DomainError("frequencies must be strictly increasing")

    def __len__(self) -> int:
        return len(self.freqs)

    def evaluate(self, t: float) -> complex:
        """Value at one time point (test/oracle helper, O(N))."""
        phases = np.exp(-1j * t * np.log(self.freqs.astype(float)))
        return complex(np.sum(self.coeffs * phases))


@dataclass(frozen=True)
class MeanSquareResult:
    """Closed-form second moment of one polynomial over [T, 2T].

    Attributes:
        T: left endpoint of the window.
        exact: the integral.
        diagonal: T * sum |a_m|^2.
        offdiag: the pair-sum remainder (exact - diagonal).
        mv_majorant_coeff: sum m * |a_m|^2, the classical comparison weight.
    """

    T: float
    exact: float
    diagonal: float
    offdiag: float
    mv_majorant_coeff: float

    def validate(self, profile: Profile = DEFAULT) -> None:
        scale = abs(self.diagonal) + abs(self.offdiag) + 1.0
        if abs(self.exact - (self.diagonal + self.offdiag)) > 1e-9 * scale:
            raise NumericError("mean-square parts do not add up")
        if self.exact < -1e-9 * scale:
            raise NumericError(f"mean square came out negative: {self.exact}")


def exact_mean_square(
    poly: DirichletPolynomial,
    T: float,
    profile: Profile = DEFAULT,
    band: int | None = None,
) -> MeanSquareResult:
    """Integrate |poly(t)|^2 over [T, 2T] in closed form.

    With `band` set, off-diagonal pairs with |freq_k - freq_m| > band are
    skipped.  That is an APPROXIMATION for profiling large instances only;
    the default (band=None) evaluates every pair exactly.

    Raises:
        DomainError: for T <= 0 or a non-positive band.
        CapacityError: when the pair sum would exceed the configured size cap.
    """
    if T <= 0:
        raise DomainError(f"window start must be positive, got {T}")
    if band is not None and band < 1:
        raise DomainError(f"band must be a positive width, got {band}")
    n = len(poly)
    if n > profile.limits.mean_square_terms:
        raise CapacityError(
            f"polynomial length {n} exceeds mean-square cap "
            f"{profile.limits.mean_square_terms}"
        )
    if n == 0:
        return MeanSquareResult(T=T, exact=0.0, diagonal=0.0, offdiag=0.0, mv_majorant_coeff=0.0)
    a = poly.coeffs
    fr = poly.freqs.astype(float)
    mags = (a.real * a.real + a.imag * a.imag)
    diagonal = T * fsum_array(mags)
    mv_coeff = fsum_array(fr * mags)

    logs = np.log(fr)
    conj_a = np.conj(a)
    block_sums: list[complex] = []
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        delta = logs[None, :] - logs[start:stop, None]  # log(k/m) per (m-row, k-col)
        phase2 = np.exp(1j * (2.0 * T) * delta)
        phase1 = np.exp(1j * T * delta)
        rows = np.arange(start, stop)
        delta[rows - start, rows] = 1.0  # dodge 0/0 on the diagonal; zeroed below
        factor = (phase2 - phase1) / (1j * delta)
        factor[rows - start, rows] = 0.0
        if band is not None:
            gap = np.abs(poly.freqs[None, :] - poly.freqs[start:stop, None])
            factor[gap > band] = 0.0
        block = (a[start:stop, None] * conj_a[None, :]) * factor
        block_sums.append(complex(np.sum(block)))
    off = complex(
        math.fsum(b.real for b in block_sums),
        math.fsum(b.imag for b in block_sums),
    )
    scale = abs(diagonal) + abs(off) + 1.0
    if abs(off.imag) > 1e-9 * scale:
        raise NumericError(
            f"pair sum should be real; imaginary part {off.imag:.3e}",
            residual=abs(off.imag),
        )
    result = MeanSquareResult(
        T=float(T),
        exact=diagonal + off.real,
        diagonal=diagonal,
        offdiag=off.real,
        mv_majorant_coeff=mv_coeff,
    )
    result.validate(profile)
    return result


def mv_discrepancy(poly: DirichletPolynomial, T: float, profile: Profile = DEFAULT) -> float:
    """|off-diagonal| divided by sum m |a_m|^2.

    The classical comparison asserts this never exceeds 3*pi.

    Raises:
        DomainError: for the zero polynomial (majorant weight zero).
    """
    ms = exact_mean_square(poly, T, profile=profile)
    if ms.mv_majorant_coeff <= 0.0:
        raise DomainError("discrepancy ratio undefined for the zero polynomial")
    return abs(ms.offdiag) / ms.mv_majorant_coeff


# -- smoothed log-derivative polynomials -------------------------------------


def split_boundary(Y: float) -> int:
    """The head/tail split point floor((Y/2) * (log Y)**2)."""
    return int(math.floor((Y / 2.0) * math.log(Y) ** 2))


def hard_cutoff(Y: float, weight_floor: float, power: int = 1) -> int:
    """Largest m with exp(-power*m/Y) >= weight_floor."""
    return int(math.floor(Y * math.log(1.0 / weight_floor) / power))


@dataclass(frozen=True)
class SplitPolynomial:
    """Head and tail pieces of a smoothed log-derivative polynomial.

    Attributes:
        head: terms with m <= boundary.
        tail: terms with boundary < m <= cutoff.
        boundary: the split point.
        cutoff: the hard truncation point (weight floor).
    """

    head: DirichletPolynomial
    tail: DirichletPolynomial
    boundary: int
    cutoff: int


def truncated_tail_split(
    table,
    sigma0: float,
    Y: float,
    profile: Profile = DEFAULT,
) -> SplitPolynomial:
    """Split the smoothed coefficients Lambda_f(m) e^{-m/Y} m^{-sigma0}.

    Raises:
        DomainError: sigma0 outside (1/2, 1) or Y < 10.
        InsufficientTableError: table shorter than the hard truncation.
    """
    if not (0.5 < sigma0 < 1.0):
        raise DomainError(f"sigma0 must lie in (1/2, 1), got {sigma0}")
    if Y < 10.0:
        raise DomainError(f"smoothing scale must satisfy Y >= 10, got {Y}")
    cutoff = hard_cutoff(Y, profile.tol.weight_floor)
    table.require(cutoff, "smoothed polynomial")
    boundary = split_boundary(Y)
    support = table.lam_support
    keep = support <= cutoff
    m = support[keep].astype(float)
    lam = table.lam_values[keep]
    weights = np.exp(-m / Y) * m ** (-sigma0)
    coeffs = lam * weights
    in_head = support[keep] <= boundary
    head = DirichletPolynomial(freqs=support[keep][in_head], coeffs=coeffs[in_head])
    tail = DirichletPolynomial(freqs=support[keep][~in_head], coeffs=coeffs[~in_head])
    return SplitPolynomial(head=head, tail=tail, boundary=boundary, cutoff=cutoff)


def smoothed_logderiv_polynomial(
    table,
    sigma0: float,
    Y: float,
    profile: Profile = DEFAULT,
) -> DirichletPolynomial:
    """Head and tail merged back into one polynomial (ascending frequencies)."""
    parts = truncated_tail_split(table, sigma0, Y, profile=profile)
    return DirichletPolynomial(
        freqs=np.concatenate([parts.head.freqs, parts.tail.freqs]),
        coeffs=np.concatenate([parts.head.coeffs, parts.tail.coeffs]),
    )
