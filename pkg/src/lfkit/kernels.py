"""Scalar analytic kernels: Gamma, zeta, vertical-line and disc quadrature.

Provides:
    * ContourSpec, DiscSpec
    * complex_gamma   -- Lanczos evaluation with reflection
    * zeta_em         -- zeta and zeta' by Euler-Maclaurin summation
    * cahen_mellin_check        -- residual of e^{-x} against its Mellin integral
    * smoothed_series_vs_contour -- smoothed coefficient series vs contour pull
    * jensen_count, zero_count_bound -- disc averages of log|f| and zero caps

Key identity checks exercised here:

    e^{-x} = (1/2 pi i) int_{(c)} Gamma(w) x^{-w} dw          (c > 0),
    sum_m Lambda_f(m) m^{-s} e^{-m/Y}
        = -(1/2 pi i) int_{(2)} (L'/L)(s+w) Gamma(w) Y^w dw   (Re s >= 2).

Vertical integrals use the trapezoid rule; the integrands decay like
exp(-pi |v| / 2), so truncation at V = 40 and a few thousand nodes leave
errors far below the documented tolerances.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Profile
from .errors import (
    DegenerateCenterError,
    DomainError,
    NumericError,
    PoleError,
)
from .numutil import fsum_array, fsum_array_c

__all__ = [
    "ContourSpec",
    "DiscSpec",
    "IdentityCheck",
    "complex_gamma",
    "zeta_em",
    "mellin_contour",
    "cahen_mellin_check",
    "smoothed_series_vs_contour",
    "jensen_count",
    "zero_count_bound",
]


@dataclass(frozen=True)
class ContourSpec:
    """A vertical segment Re w = real_part, |Im w| <= half_length.

    Attributes:
        real_part: abscissa of the segment.
        half_length: V, the truncation height.
        nodes: number of trapezoid subintervals (so nodes + 1 sample points).
    """

    real_part: float
    half_length: float
    nodes: int

    def __post_init__(self):
        if self.half_length <= 0:
            raise DomainError(f"half_length must be positive, got {self.half_length}")
        if self.nodes < DEFAULT.limits.contour_nodes_min:
            raise DomainError(
                f"need at least {DEFAULT.limits.contour_nodes_min} nodes, got {self.nodes}"
            )

    def points(self) -> np.ndarray:
        v = np.linspace(-self.half_length, self.half_length, self.nodes + 1)
        return self.real_part + 1j * v

    @property
    def step(self) -> float:
        return 2.0 * self.half_length / self.nodes


@dataclass(frozen=True)
class DiscSpec:
    """A closed disc given by center and radius, with an angular sampling count.

    Attributes:
        center: disc center.
        radius: disc radius (> 0).
        angular_nodes: starting number of equally spaced boundary samples.
    """

    center: complex
    radius: float
    angular_nodes: int

    def __post_init__(self):
        if self.radius <= 0:
            raise DomainError(f"disc radius must be positive, got {self.radius}")
        if self.angular_nodes < DEFAULT.limits.disc_nodes_min:
            raise DomainError(
                f"need at least {DEFAULT.limits.disc_nodes_min} angular nodes, "
                f"got {self.angular_nodes}"
            )


# -- Gamma -------------------------------------------------------------------

# Lanczos g = 7, 9-term coefficient set (double precision workhorse).
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def complex_gamma(z: complex) -> complex:
    """Gamma(z) for complex z, accurate to ~1e-13 relative on the desk window.

    Raises:
        PoleError: at (numerically exact) nonpositive integers.
    """
    z = complex(z)
    if abs(z.imag) < 1e-12 and z.real <= 0.5:
        nearest = round(z.real)
        if nearest <= 0 and abs(z.real - nearest) <= 1e-12 * max(1.0, abs(z.real)):
            raise PoleError(f"Gamma pole at z = {nearest}")
    if z.real < 0.5:
        # Reflection: Gamma(z) Gamma(1-z) sin(pi z) = pi.
        return math.pi / (cmath.sin(math.pi * z) * complex_gamma(1.0 - z))
    w = z - 1.0
    acc = _LANCZOS_C[0]
    for i, c in enumerate(_LANCZOS_C[1:], start=1):
        acc = acc + c / (w + i)
    t = w + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (w + 0.5) * cmath.exp(-t) * acc


# -- zeta --------------------------------------------------------------------

# B_{2j} / (2j)! for j = 1..6 (corrections through B_12).
_EM_WEIGHTS = (
    1.0 / 12.0,                      # B2/2!
    -1.0 / 720.0,                    # B4/4!
    1.0 / 30240.0,                   # B6/6!
    -1.0 / 1209600.0,                # B8/8!
    1.0 / 47900160.0,                # B10/10!
    -691.0 / 1307674368000.0,        # B12/12!
)


def zeta_em(s: complex, derivative_order: int = 0) -> complex:
    """zeta(s) or zeta'(s) by Euler-Maclaurin with N = ceil(10 + |Im s|) terms.

    Contracted to 1e-9 absolute error for 1/2 <= Re s <= 4, |Im s| <= 2000;
    the implementation accepts the wider window Re s > 0, |Im s| <= 10000.

    Raises:
        PoleError: at s = 1.
        DomainError: outside the accepted window or for an unsupported
            derivative order.
    """
    s = complex(s)
    if derivative_order not in (0, 1):
        raise DomainError(f"derivative order must be 0 or 1, got {derivative_order}")
    if abs(s - 1.0) < 1e-12:
        raise PoleError("zeta has its pole at s = 1")
    if s.real <= 0.0 or abs(s.imag) > 10000.0:
        raise DomainError(f"s = {s} outside the supported window")
    N = int(math.ceil(10.0 + abs(s.imag)))
    k = np.arange(1, N, dtype=float)
    logk = np.log(k)
    powers = np.exp(-s * logk)
    logN = math.log(N)
    n_pow = cmath.exp(-s * logN)  # N^{-s}

    if derivative_order == 0:
        value = fsum_array_c(powers)
        value += n_pow * N / (s - 1.0) + 0.5 * n_pow
        rising = 1.0 + 0.0j
        for j, wgt in enumerate(_EM_WEIGHTS, start=1):
            # rising factorial s (s+1) .. (s + 2j - 2)
            lo = 2 * j - 3
            if j == 1:
                rising = s
            else:
                rising = rising * (s + lo) * (s + lo + 1)
            value += wgt * rising * n_pow * float(N) ** (1 - 2 * j)
        return value

    dvalue = fsum_array_c(-logk * powers)
    # d/ds [N^{1-s}/(s-1)] and d/ds [N^{-s}/2]
    n_pow1 = n_pow * N
    dvalue += -logN * n_pow1 / (s - 1.0) - n_pow1 / (s - 1.0) ** 2
    dvalue += -logN * 0.5 * n_pow
    rising = 1.0 + 0.0j
    harmonic = 0.0 + 0.0j
    for j, wgt in enumerate(_EM_WEIGHTS, start=1):
        lo = 2 * j - 3
        if j == 1:
            rising = s
            harmonic = 1.0 / s
        else:
            rising = rising * (s + lo) * (s + lo + 1)
            harmonic = harmonic + 1.0 / (s + lo) + 1.0 / (s + lo + 1)
        term = wgt * n_pow * float(N) ** (1 - 2 * j)
        dvalue += term * rising * (harmonic - logN)
    return dvalue


# -- vertical-line quadrature -------------------------------------------------


def mellin_contour(
    real_part: float = 2.0,
    nodes: int = 4000,
    target: float = 1e-6,
) -> ContourSpec:
    """A vertical segment tall enough that the Gamma tail sits below target/10."""
    V = max(40.0, (2.0 / math.pi) * math.log(10.0 / target))
    return ContourSpec(real_part=real_part, half_length=V, nodes=nodes)


def _trapezoid_line(values: np.ndarray, step: float) -> complex:
    """(1/2 pi) * trapezoid sum along a vertical segment."""
    weights = np.ones(len(values))
    weights[0] = weights[-1] = 0.5
    total = fsum_array_c(values * weights)
    return total * step / (2.0 * math.pi)


def cahen_mellin_check(
    x: float,
    contour: ContourSpec | None = None,
    profile: Profile = DEFAULT,
) -> float:
    """Residual of the exponential against its vertical-line Mellin integral.

    Raises:
        DomainError: for x <= 0 or a contour left of the imaginary axis.
    """
    if x <= 0:
        raise DomainError(f"the identity needs x > 0, got {x}")
    if contour is None:
        contour = mellin_contour(target=profile.tol.kernel_check)
    if contour.real_part <= 0:
        raise DomainError("the Mellin contour must have positive real part")
    w = contour.points()
    gamma_vals = np.array([complex_gamma(wk) for wk in w])
    integrand = gamma_vals * np.exp(-w * math.log(x))
    integral = _trapezoid_line(integrand, contour.step)
    return abs(integral - math.exp(-x))


@dataclass(frozen=True)
class IdentityCheck:
    """Two evaluations of the same quantity and their gap.

    Attributes:
        series_value: direct (series) side.
        contour_value: contour-integral side.
        residual: |series - contour|.
        tail_estimate: bound on the series truncation used on the contour side.
    """

    series_value: complex
    contour_value: complex
    residual: float
    tail_estimate: float


def _logderiv_tail_bound(degree: int, theta: float, limit: int, sigma: float) -> float:
    """Bound sum_{m > limit} |Lambda_f(m)| m^{-sigma} via |a_f(p^r)| <= n p^{r theta}."""
    q = sigma - theta
    if q <= 1.5:
        return math.inf
    M = float(limit)
    # integral of log(x) x^{-q} from M to infinity
    return degree * M ** (1.0 - q) * (math.log(M) * (q - 1.0) + 1.0) / (q - 1.0) ** 2


def smoothed_series_vs_contour(
    table,
    s: complex,
    Y: float,
    contour: ContourSpec | None = None,
    profile: Profile = DEFAULT,
) -> IdentityCheck:
    """Compare the smoothed coefficient series with its contour representation.

    The series side truncates where the smoothing weight drops below the
    configured floor; the contour side evaluates the coefficient series of
    the logarithmic derivative at s + w over the whole table.

    Raises:
        DomainError: for Re s < 2 or Y <= 0.
        InsufficientTableError: table shorter than the weight-floor cutoff.
        NumericError: when the table cannot push the contour-side series
            truncation below the identity tolerance; carries the tail bound.
    """
    from .meansquare import hard_cutoff  # local import to avoid a cycle

    s = complex(s)
    if s.real < 2.0:
        raise DomainError(f"identity check needs Re s >= 2, got {s}")
    if Y <= 0:
        raise DomainError(f"smoothing scale must be positive, got {Y}")
    if contour is None:
        contour = mellin_contour(target=profile.tol.contour_identity)
    cutoff = hard_cutoff(Y, profile.tol.weight_floor)
    table.require(cutoff, "smoothed series")

    support = table.lam_support.astype(float)
    lam = table.lam_values
    keep = support <= cutoff
    mk = support[keep]
    series = complex(
        math.fsum((lam[keep] * np.exp(-s * np.log(mk)) * np.exp(-mk / Y)).real.tolist()),
        math.fsum((lam[keep] * np.exp(-s * np.log(mk)) * np.exp(-mk / Y)).imag.tolist()),
    )

    # Contour side: G(z) = sum Lambda_f(m) m^{-z} over the full table.
    w = contour.points()
    gamma_vals = np.array([complex_gamma(wk) for wk in w])
    y_pow = np.exp(w * math.log(Y))
    logm = np.log(support)
    base = lam * np.exp(-(s + contour.real_part) * logm)
    g_vals = np.empty(len(w), dtype=complex)
    v = w.imag
    chunk = 256
    for start in range(0, len(w), chunk):
        stop = min(start + chunk, len(w))
        phases = np.exp(-1j * np.outer(v[start:stop], logm))
        g_vals[start:stop] = phases @ base

    sigma_min = s.real + contour.real_part
    tail = _logderiv_tail_bound(table.degree, table.theta, max(table.limit, 2), sigma_min)
    gamma_mass = fsum_array(np.abs(gamma_vals)) * contour.step / (2.0 * math.pi)
    contour_error = tail * (Y ** contour.real_part) * gamma_mass
    if not (contour_error <= profile.tol.contour_identity / 4.0):
        raise NumericError(
            f"series truncation at {table.limit} leaves contour-side tail "
            f"{contour_error:.3e}; extend the table",
            residual=contour_error,
        )
    integrand = g_vals * gamma_vals * y_pow
    contour_value = _trapezoid_line(integrand, contour.step)
    return IdentityCheck(
        series_value=series,
        contour_value=contour_value,
        residual=abs(series - contour_value),
        tail_estimate=contour_error,
    )


# -- Jensen discs --------------------------------------------------------------


def jensen_count(
    f,
    disc: DiscSpec,
    center_value: complex | None = None,
    profile: Profile = DEFAULT,
) -> float:
    """Average of log|f| on the disc boundary minus log|f(center)|.

    For holomorphic f this equals sum_j log(R / |z_j - center|) over the
    zeros z_j inside the disc.  Angular nodes double until two successive
    averages agree to the configured tolerance.

    Raises:
        DegenerateCenterError: when f vanishes at the center.
        NumericError: no convergence within the node budget, or a zero
            sitting on the sampled boundary.
    """
    fc = complex(f(disc.center))
    if abs(fc) < 1e-300:
        raise DegenerateCenterError("f vanishes at the disc center")
    log_center = math.log(abs(fc))

    def average(count: int) -> float:
        theta = 2.0 * math.pi * np.arange(count) / count
        points = disc.center + disc.radius * np.exp(1j * theta)
        vals = np.array([complex(f(z)) for z in points])
        mags = np.abs(vals)
        if np.any(mags < 1e-300):
            raise NumericError("f vanishes on a sampled boundary point")
        return fsum_array(np.log(mags)) / count

    count = disc.angular_nodes
    prev = average(count)
    while count <= profile.limits.jensen_nodes_max:
        count *= 2
        cur = average(count)
        if abs(cur - prev) < profile.tol.jensen:
            return cur - log_center
        prev = cur
    raise NumericError(
        f"disc average did not settle within {profile.limits.jensen_nodes_max} nodes",
        residual=abs(cur - prev),
    )


def zero_count_bound(jensen_value: float, radius: float, r_inner: float) -> int:
    """Cap on the number of zeros within r_inner given the disc average at radius.

    Raises:
        DomainError: unless 0 < r_inner < radius.
    """
    if not (0.0 < r_inner < radius):
        raise DomainError(
            f"need 0 < r_inner < radius, got r_inner={r_inner}, radius={radius}"
        )
    quotient = jensen_value / math.log(radius / r_inner)
    return max(0, int(math.floor(quotient + 1e-12)))
