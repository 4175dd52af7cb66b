"""Hecke coefficient algebra: local power tables, dense tables, relations.

Provides:
    * local_A_powers          -- A(p**k, 1, .., 1) for k = 0..kmax
    * LocalCoefficients       -- cached local algebra (powers, tuple values)
    * tuple_coefficient       -- A(p**k1, .., p**k_{n-1}) by Jacobi-Trudi
    * build_coefficient_table -- dense multiplicative table plus Lambda data
    * verify_hecke_relation   -- residual of the multiplicative convolution
    * dual_symmetry_check     -- residual of A(reversed) = conj(A)
    * power_sums_from_h       -- power sums read off the local generating series

Key identities: with h_k the complete homogeneous and e_j the elementary
symmetric functions of the local parameters,

    h_k = sum_{j=1}^{min(k,n)} (-1)**(j-1) e_j h_{k-j},        (local powers)
    A(p**k1, .., p**k_{n-1}) = det( h_{lam_i - i + j} ),       (tuple values)

where lam_i = k_i + k_{i+1} + .. + k_{n-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import prime_powers, sieve_primes, smallest_factor_table
from .config import DEFAULT, Profile
from .errors import CapacityError, DomainError, InsufficientTableError
from .forms import FormSpec
from .numutil import elementary_symmetric
from .satake import SatakeLocal, power_sum

__all__ = [
    "CoefficientTable",
    "TupleCoefficient",
    "RelationCheck",
    "local_A_powers",
    "LocalCoefficients",
    "tuple_coefficient",
    "build_coefficient_table",
    "verify_hecke_relation",
    "dual_symmetry_check",
    "power_sums_from_h",
]


def local_A_powers(s: SatakeLocal, kmax: int) -> np.ndarray:
    """Coefficients A(p**k, 1, .., 1) for k = 0..kmax at one prime.

    Raises:
        DomainError: for kmax < 0.
    """
    if kmax < 0:
        raise DomainError(f"kmax must be nonnegative, got {kmax}")
    n = s.degree
    e = elementary_symmetric(s.alphas)
    h = np.zeros(kmax + 1, dtype=complex)
    h[0] = 1.0
    for k in range(1, kmax + 1):
        acc = 0.0 + 0.0j
        for j in range(1, min(k, n) + 1):
            acc += (-1.0) ** (j - 1) * e[j] * h[k - j]
        h[k] = acc
    return h


def power_sums_from_h(h: np.ndarray, rmax: int) -> np.ndarray:
    """Power sums psi_1..psi_rmax recovered from the local power series.

    Uses the logarithmic-derivative recurrence k*h_k = sum_j psi_j h_{k-j},
    which touches only the series itself, so it cross-checks the recurrence
    used to build h against the direct power sums.
    """
    if rmax + 1 > len(h):
        raise DomainError("need h_0..h_rmax to recover rmax power sums")
    psi = np.zeros(rmax + 1, dtype=complex)
    for k in range(1, rmax + 1):
        acc = k * h[k]
        for j in range(1, k):
            acc -= psi[j] * h[k - j]
        psi[k] = acc
    return psi[1:]


def _h_extended(s: SatakeLocal, kmax: int) -> np.ndarray:
    """Power table in 80-bit arithmetic for the cancellation-prone checks."""
    n = s.degree
    e = elementary_symmetric(s.alphas).astype(np.clongdouble)
    h = np.zeros(kmax + 1, dtype=np.clongdouble)
    h[0] = 1.0
    for k in range(1, kmax + 1):
        acc = np.clongdouble(0.0)
        for j in range(1, min(k, n) + 1):
            acc += (-1.0) ** (j - 1) * e[j] * h[k - j]
        h[k] = acc
    return h


def _det_pivoted(mat: np.ndarray) -> np.clongdouble:
    """Determinant by partial-pivot elimination; keeps the extended dtype."""
    a = mat.copy()
    size = a.shape[0]
    value = np.clongdouble(1.0)
    for col in range(size):
        pivot = col + int(np.argmax(np.abs(a[col:, col])))
        if abs(a[pivot, col]) == 0.0:
            return np.clongdouble(0.0)
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            value = -value
        value *= a[col, col]
        a[col + 1 :, col:] -= np.outer(a[col + 1 :, col] / a[col, col], a[col, col:])
    return value


class LocalCoefficients:
    """Cached coefficient algebra of one local factor.

    Keeps the power table and previously computed tuple values so relation
    checks that revisit shifted exponent tuples stay cheap.  Determinants
    and relation sides run in extended precision: unitary tuple values can
    reach 1e7 where a double-precision identity check bottoms out near the
    1e-8 residual budget.
    """

    def __init__(self, s: SatakeLocal):
        self.s = s
        self.n = s.degree
        self._h = _h_extended(s, 8)
        self._schur: dict[tuple[int, ...], np.clongdouble] = {}

    def _h_ext(self, k: int) -> np.clongdouble:
        if k < 0:
            return np.clongdouble(0.0)
        if k >= len(self._h):
            self._h = _h_extended(self.s, max(k, 2 * len(self._h)))
        return self._h[k]

    def h(self, k: int) -> complex:
        return complex(self._h_ext(k))

    def _tuple_value_ext(self, exponents: tuple[int, ...]) -> np.clongdouble:
        exponents = tuple(int(k) for k in exponents)
        if len(exponents) != self.n - 1:
            raise DomainError(
                f"need {self.n - 1} exponents for degree {self.n}, got {len(exponents)}"
            )
        if any(k < 0 for k in exponents):
            raise DomainError(f"exponents must be nonnegative: {exponents}")
        cached = self._schur.get(exponents)
        if cached is not None:
            return cached
        ell = self.n - 1
        lam = [sum(exponents[i:]) for i in range(ell)]
        self._h_ext(lam[0] + ell)  # one growth step covers every matrix entry
        mat = np.empty((ell, ell), dtype=np.clongdouble)
        for i in range(ell):
            for j in range(ell):
                mat[i, j] = self._h_ext(lam[i] - (i + 1) + (j + 1))
        value = _det_pivoted(mat) if ell > 1 else mat[0, 0]
        self._schur[exponents] = value
        return value

    def tuple_value(self, exponents: tuple[int, ...]) -> complex:
        """A(p**k1, .., p**k_{n-1}) for the given exponent tuple."""
        return complex(self._tuple_value_ext(exponents))


@dataclass(frozen=True)
class TupleCoefficient:
    """One general Hecke eigenvalue at a prime power block.

    Attributes:
        p: the prime.
        exponents: (k_1, .., k_{n-1}) with value A(p**k1, .., p**k_{n-1}).
        value: the coefficient.
    """

    p: int
    exponents: tuple[int, ...]
    value: complex


def tuple_coefficient(s: SatakeLocal, exponents: tuple[int, ...]) -> TupleCoefficient:
    """General local Hecke eigenvalue via the determinant identity."""
    value = LocalCoefficients(s).tuple_value(tuple(exponents))
    return TupleCoefficient(p=s.p, exponents=tuple(int(k) for k in exponents), value=value)


@dataclass(frozen=True)
class RelationCheck:
    """Residual record of one multiplicative relation instance.

    Attributes:
        p, a: the relation is tested against m = p**a.
        exponents: the fixed tuple on the left side.
        lhs, rhs: both sides of the identity.
        residual: |lhs - rhs|.
        terms: number of summands on the right side.
    """

    p: int
    a: int
    exponents: tuple[int, ...]
    lhs: complex
    rhs: complex
    residual: float
    terms: int


def _compositions(total: int, parts: int, caps: tuple[int, ...] | None):
    """All nonnegative integer tuples of given length summing to total.

    caps, when given, bounds every entry except the last (which is free).
    """
    if parts == 1:
        if caps is None or total <= caps[0]:
            yield (total,)
        return
    cap = total if caps is None else min(total, caps[0])
    rest_caps = None if caps is None else caps[1:]
    for first in range(cap + 1):
        for rest in _compositions(total - first, parts - 1, rest_caps):
            yield (first, *rest)


def verify_hecke_relation(
    s: SatakeLocal,
    a: int,
    exponents: tuple[int, ...],
    algebra: LocalCoefficients | None = None,
) -> RelationCheck:
    """Check A(p**a,1,..,1) * A(tuple) against its convolution expansion.

    The right side runs over factorizations p**a = c_1 .. c_n with
    c_j | p**k_j for j <= n-1; the term replaces exponent k_j by
    k_j + g_{j-1} - g_j with g_0 = g_n (the free last part).

    Raises:
        DomainError: for a < 0 or an exponent tuple of the wrong shape.
    """
    if a < 0:
        raise DomainError(f"power exponent must be nonnegative, got {a}")
    alg = algebra if algebra is not None else LocalCoefficients(s)
    exponents = tuple(int(k) for k in exponents)
    n = alg.n
    lhs = alg._h_ext(a) * alg._tuple_value_ext(exponents)
    caps = (*exponents, a)  # entries 1..n-1 capped by divisibility, last free
    rhs = np.clongdouble(0.0)
    terms = 0
    for gamma in _compositions(a, n, caps):
        shifted = tuple(
            exponents[j] + (gamma[j - 1] if j > 0 else gamma[n - 1]) - gamma[j]
            for j in range(n - 1)
        )
        rhs += alg._tuple_value_ext(shifted)
        terms += 1
    return RelationCheck(
        p=s.p,
        a=a,
        exponents=exponents,
        lhs=complex(lhs),
        rhs=complex(rhs),
        residual=float(abs(lhs - rhs)),
        terms=terms,
    )


def dual_symmetry_check(
    s: SatakeLocal,
    exponents: tuple[int, ...],
    algebra: LocalCoefficients | None = None,
) -> float:
    """Residual |A(k_{n-1}, .., k_1) - conj(A(k_1, .., k_{n-1}))|."""
    alg = algebra if algebra is not None else LocalCoefficients(s)
    fwd = alg.tuple_value(tuple(exponents))
    rev = alg.tuple_value(tuple(reversed(tuple(exponents))))
    return abs(rev - fwd.conjugate())


# -- dense tables -----------------------------------------------------------


@dataclass(frozen=True)
class CoefficientTable:
    """Dense standard coefficients and von Mangoldt data of one form.

    Attributes:
        form_id: identifier of the generating form.
        degree: the form's degree.
        self_dual: copied from the form.
        theta: certified exponent with |alpha_p| <= p**theta.
        limit: inclusive coefficient range.
        A: complex array, A[m] = A(m, 1, .., 1); A[0] is unused.
        lam_support: ascending prime powers <= limit.
        lam_values: Lambda_f at the support points.
        lam_primes, lam_exponents: p and r with support point = p**r.
    """

    form_id: str
    degree: int
    self_dual: bool
    theta: float
    limit: int
    A: np.ndarray = field(repr=False)
    lam_support: np.ndarray = field(repr=False)
    lam_values: np.ndarray = field(repr=False)
    lam_primes: np.ndarray = field(repr=False)
    lam_exponents: np.ndarray = field(repr=False)

    def a_value(self, m: int) -> complex:
        if not (1 <= m <= self.limit):
            raise DomainError(f"m={m} outside table range 1..{self.limit}")
        return complex(self.A[m])

    def lambda_value(self, m: int) -> complex:
        if not (1 <= m <= self.limit):
            raise DomainError(f"m={m} outside table range 1..{self.limit}")
        idx = int(np.searchsorted(self.lam_support, m))
        if idx < len(self.lam_support) and self.lam_support[idx] == m:
            return complex(self.lam_values[idx])
        return 0.0 + 0.0j

    def require(self, limit: int, what: str) -> None:
        """Raise unless the table reaches the stated limit."""
        if self.limit < limit:
            raise InsufficientTableError(
                f"{what} needs coefficients up to {limit}, table stops at {self.limit}",
                required_limit=limit,
            )

    @classmethod
    def zero(cls, degree: int, limit: int) -> "CoefficientTable":
        """Degenerate table with A supported only at 1 and empty Lambda data."""
        A = np.zeros(limit + 1, dtype=complex)
        A[1] = 1.0
        empty_i = np.array([], dtype=np.int64)
        return cls(
            form_id=f"zero-{degree}",
            degree=degree,
            self_dual=True,
            theta=0.0,
            limit=limit,
            A=A,
            lam_support=empty_i,
            lam_values=np.array([], dtype=complex),
            lam_primes=empty_i,
            lam_exponents=empty_i,
        )


def build_coefficient_table(
    form: FormSpec,
    limit: int,
    profile: Profile = DEFAULT,
) -> CoefficientTable:
    """Multiplicative fill of A(m,1,..,1) for m <= limit plus Lambda data.

    Local powers come from the recurrence at each prime; composite values
    are products over prime power blocks, filled along ascending m through a
    smallest-factor table.  Lambda values go through the power-sum routine,
    which carries its own internal cross-check.

    Raises:
        CapacityError: when limit exceeds the dense-table cap.
        IngestionError: when an explicit form misses a needed prime.
    """
    limit = int(limit)
    if limit < 1:
        raise DomainError(f"table limit must be positive, got {limit}")
    if limit > profile.limits.table:
        raise CapacityError(
            f"table limit {limit} exceeds cap {profile.limits.table}"
        )
    A = np.zeros(limit + 1, dtype=complex)
    A[1] = 1.0
    empty_i = np.array([], dtype=np.int64)
    if limit < 2:
        return CoefficientTable(
            form_id=form.form_id,
            degree=form.degree,
            self_dual=form.self_dual,
            theta=form.theta_hint,
            limit=limit,
            A=A,
            lam_support=empty_i,
            lam_values=np.array([], dtype=complex),
            lam_primes=empty_i,
            lam_exponents=empty_i,
        )

    table = sieve_primes(limit, limits=profile.limits)
    explicit = form.explicit_primes
    if explicit is not None:
        missing = np.setdiff1d(table.primes, explicit)
        if len(missing):
            raise IngestionError(
                f"explicit form '{form.name}' has no data at prime {int(missing[0])} "
                f"(needed for tables up to {limit})"
            )
    alphas = form.alphas_matrix(table.primes, profile=profile)

    # Local power arrays; beyond sqrt(limit) only h_1 is ever used.
    h_by_prime: dict[int, np.ndarray] = {}
    locals_by_prime: dict[int, SatakeLocal] = {}
    for i, p in enumerate(table.primes):
        p = int(p)
        s = SatakeLocal(p=p, alphas=alphas[i])
        locals_by_prime[p] = s
        kmax = int(math.log(limit) / math.log(p) + 1e-9)
        h_by_prime[p] = local_A_powers(s, max(kmax, 1))

    spf = smallest_factor_table(limit)
    for m in range(2, limit + 1):
        p = int(spf[m])
        rest = m // p
        e = 1
        while rest % p == 0:
            rest //= p
            e += 1
        A[m] = A[rest] * h_by_prime[p][e]

    pp = prime_powers(limit, table)
    support = np.array([m for m, _, _ in pp], dtype=np.int64)
    pvals = np.array([p for _, p, _ in pp], dtype=np.int64)
    rvals = np.array([r for _, _, r in pp], dtype=np.int64)
    lam = np.empty(len(pp), dtype=complex)
    for i, (_, p, r) in enumerate(pp):
        lam[i] = math.log(p) * power_sum(locals_by_prime[p], r, profile=profile)

    return CoefficientTable(
        form_id=form.form_id,
        degree=form.degree,
        self_dual=form.self_dual,
        theta=form.theta_hint,
        limit=limit,
        A=A,
        lam_support=support,
        lam_values=lam,
        lam_primes=pvals,
        lam_exponents=rvals,
    )
