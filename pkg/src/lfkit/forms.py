"""Form descriptions: where local Satake data comes from.

Provides:
    * FormSpec with four sources: all-ones, random-unitary, ramanujan-delta,
      and explicit per-prime data
    * load_form          -- builtin "name:degree" strings or JSON files
    * tau_coefficients   -- exact integer q-expansion of the discriminant form

The discriminant expansion uses the cube of Euler's pentagonal-type series,

    eta(q)**3 = sum_k (-1)**k (2k+1) q**(k(k+1)/2),

raised to the 8th power by three truncated squarings.  Each squaring packs
the integer polynomial into one big integer (Kronecker substitution) so the
convolution runs inside GMP rather than in Python loops.
"""

from __future__ import annotations

import functools
import hashlib
import json
import math
import os
from dataclasses import dataclass

import gmpy2
import numpy as np

from .config import DEFAULT, Profile
from .errors import (
    CapacityError,
    DomainError,
    FormValidationError,
    IngestionError,
)
from .satake import SatakeLocal

__all__ = [
    "FormSpec",
    "AllOnes",
    "RandomUnitary",
    "RamanujanDelta",
    "Explicit",
    "load_form",
    "builtin_forms",
    "tau_coefficients",
    "delta_alpha_pair",
]


# -- exact tau expansion ----------------------------------------------------


def _pack(coeffs: list[int], width_bytes: int) -> gmpy2.mpz:
    buf = bytearray(len(coeffs) * width_bytes)
    for i, c in enumerate(coeffs):
        if c:
            buf[i * width_bytes : i * width_bytes + width_bytes] = c.to_bytes(
                width_bytes, "little"
            )
    return gmpy2.mpz(int.from_bytes(buf, "little"))


def _unpack(value: gmpy2.mpz, width_bytes: int, count: int) -> list[int]:
    # The product may carry more digits than we keep; size the buffer from
    # the value and read only the low `count` digits.
    as_int = int(value)
    total = max(count * width_bytes, (as_int.bit_length() + 7) // 8)
    buf = as_int.to_bytes(total, "little")
    return [
        int.from_bytes(buf[i * width_bytes : (i + 1) * width_bytes], "little")
        for i in range(count)
    ]


def _square_truncated(coeffs: list[int], limit_len: int) -> list[int]:
    """Coefficients of the square of an integer polynomial, truncated.

    Splits into nonnegative and nonpositive parts so the packed digits never
    wrap; the digit width covers the worst-case convolution coefficient.
    """
    n = len(coeffs)
    max_abs = max((abs(c) for c in coeffs), default=0)
    if max_abs == 0:
        return [0] * min(limit_len, 2 * n - 1)
    bound = max_abs * max_abs * n
    width_bytes = (bound.bit_length() + 8) // 8 + 1
    pos = [c if c > 0 else 0 for c in coeffs]
    neg = [-c if c < 0 else 0 for c in coeffs]
    out_len = min(limit_len, 2 * n - 1)
    pp = _pack(pos, width_bytes)
    nn = _pack(neg, width_bytes)
    sq_pos = _unpack(pp * pp, width_bytes, out_len)
    sq_neg = _unpack(nn * nn, width_bytes, out_len)
    cross = _unpack(pp * nn, width_bytes, out_len)
    return [a + b - 2 * c for a, b, c in zip(sq_pos, sq_neg, cross)]


def _eta3(limit_len: int) -> list[int]:
    out = [0] * limit_len
    k = 0
    while k * (k + 1) // 2 < limit_len:
        out[k * (k + 1) // 2] = (2 * k + 1) if k % 2 == 0 else -(2 * k + 1)
        k += 1
    return out


@functools.lru_cache(maxsize=4)
def _tau_bucket(bucket: int) -> tuple[int, ...]:
    series = _eta3(bucket)
    for _ in range(3):
        series = _square_truncated(series, bucket)
    # tau(m) is the coefficient of q**(m-1) in eta**24; prepend the unused 0 slot.
    return (0, *series)


def tau_coefficients(limit: int, profile: Profile = DEFAULT) -> tuple[int, ...]:
    """Exact integers tau(1..limit), index-aligned (entry 0 is unused).

    Raises:
        DomainError: for limit < 1.
        CapacityError: beyond the configured table cap.
    """
    limit = int(limit)
    if limit < 1:
        raise DomainError(f"tau table limit must be positive, got {limit}")
    if limit > profile.limits.tau:
        raise CapacityError(
            f"tau table limit {limit} exceeds cap {profile.limits.tau}"
        )
    bucket = 1024
    while bucket < limit:
        bucket *= 2
    return _tau_bucket(min(bucket, profile.limits.tau))[: limit + 1]


def delta_alpha_pair(p: int, tau_p: int) -> np.ndarray:
    """Unit-circle Satake pair for the discriminant form at p.

    The normalized eigenvalue a = tau(p like) / p**(11/2) satisfies |a| <= 2,
    so the pair is cos +- i sin with cos = a/2.
    """
    a = float(tau_p) / float(p) ** 5.5
    x = a / 2.0
    if abs(x) <= 1.0:
        y = math.sqrt(max(0.0, 1.0 - x * x))
        return np.array([complex(x, y), complex(x, -y)])
    # Unreachable for genuine discriminant data; kept for malformed feeds.
    y = math.sqrt(x * x - 1.0)
    return np.array([complex(x + y), complex(x - y)])


# -- local data sources -----------------------------------------------------


@dataclass(frozen=True)
class AllOnes:
    """Every Satake parameter equals 1 (coefficients become divisor counts)."""

    kind: str = "all-ones"


@dataclass(frozen=True)
class RandomUnitary:
    """Seeded conjugate-paired angles on the unit circle, one draw per prime."""

    seed: int
    kind: str = "random-unitary"


@dataclass(frozen=True)
class RamanujanDelta:
    """Normalized discriminant-form data from the exact tau expansion."""

    kind: str = "ramanujan-delta"


@dataclass(frozen=True)
class Explicit:
    """Curated per-prime parameters, typically loaded from a JSON file."""

    local: tuple[tuple[int, tuple[complex, ...]], ...]
    kind: str = "explicit"


Source = AllOnes | RandomUnitary | RamanujanDelta | Explicit


def _unitary_angles(seed: int, p: int, pairs: int) -> np.ndarray:
    digest = hashlib.blake2b(
        f"{seed}:{p}".encode(), digest_size=8 * max(pairs, 1)
    ).digest()
    words = np.frombuffer(digest[: 8 * pairs], dtype="<u8") if pairs else np.array([], dtype="<u8")
    return words.astype(np.float64) * (2.0 * np.pi / 2.0**64)


@dataclass(frozen=True)
class FormSpec:
    """A degree-n form described by a local data source.

    Attributes:
        name: short identifier used in report file names.
        degree: number of Satake parameters per prime (n >= 2).
        self_dual: whether the coefficient system is its own dual; all
            builtin sources are self-dual by construction.
        source: one of the four local data sources.
    """

    name: str
    degree: int
    self_dual: bool
    source: Source

    def __post_init__(self):
        if self.degree < 2:
            raise FormValidationError(
                f"form degree must be >= 2, got {self.degree}"
            )
        if isinstance(self.source, RamanujanDelta) and self.degree != 2:
            raise FormValidationError("the discriminant form has degree 2")

    @property
    def form_id(self) -> str:
        if isinstance(self.source, RandomUnitary):
            return f"{self.name}-{self.degree}-s{self.source.seed}"
        if isinstance(self.source, (AllOnes,)):
            return f"{self.name}-{self.degree}"
        return self.name

    @property
    def theta_hint(self) -> float:
        """Certified exponent with |alpha_p| <= p**theta_hint for all p."""
        if isinstance(self.source, Explicit):
            worst = 0.0
            for p, alphas in self.source.local:
                mags = np.abs(np.asarray(alphas, dtype=complex))
                worst = max(worst, float(np.max(np.log(np.maximum(mags, 1e-300)))) / math.log(p))
            return max(0.0, worst)
        return 0.0

    @property
    def explicit_primes(self) -> np.ndarray | None:
        if isinstance(self.source, Explicit):
            return np.array(sorted(p for p, _ in self.source.local), dtype=np.int64)
        return None

    def alphas_matrix(self, primes: np.ndarray, profile: Profile = DEFAULT) -> np.ndarray:
        """Satake parameters for each requested prime, shape (len(primes), degree)."""
        primes = np.asarray(primes, dtype=np.int64)
        n = self.degree
        if isinstance(self.source, AllOnes):
            return np.ones((len(primes), n), dtype=complex)
        if isinstance(self.source, RamanujanDelta):
            if len(primes) == 0:
                return np.zeros((0, n), dtype=complex)
            tau = tau_coefficients(int(primes.max()), profile=profile)
            out = np.empty((len(primes), 2), dtype=complex)
            for i, p in enumerate(primes):
                out[i] = delta_alpha_pair(int(p), tau[int(p)])
            return out
        if isinstance(self.source, RandomUnitary):
            out = np.empty((len(primes), n), dtype=complex)
            pairs = n // 2
            for i, p in enumerate(primes):
                theta = _unitary_angles(self.source.seed, int(p), pairs)
                vals = np.concatenate(
                    [np.exp(1j * theta), np.exp(-1j * theta)]
                    + ([np.ones(1)] if n % 2 else [])
                )
                out[i] = vals
            return out
        lookup = dict(self.source.local)
        out = np.empty((len(primes), n), dtype=complex)
        for i, p in enumerate(primes):
            entry = lookup.get(int(p))
            if entry is None:
                raise IngestionError(
                    f"explicit form '{self.name}' has no data at prime {int(p)}"
                )
            out[i] = np.asarray(entry, dtype=complex)
        return out

    def local(self, p: int, profile: Profile = DEFAULT) -> SatakeLocal:
        """Validated local Satake data at one prime."""
        alphas = self.alphas_matrix(np.array([p], dtype=np.int64), profile=profile)[0]
        s = SatakeLocal(p=int(p), alphas=alphas)
        s.validate(self_dual=self.self_dual, profile=profile)
        return s


# -- loading ----------------------------------------------------------------

_BUILTIN_KINDS = ("all-ones", "random-unitary", "ramanujan-delta", "delta")


def _parse_builtin(text: str, seed: int) -> FormSpec:
    parts = text.split(":")
    kind = parts[0]
    if kind not in _BUILTIN_KINDS:
        raise IngestionError(
            f"unknown form '{text}'; builtin kinds are {', '.join(_BUILTIN_KINDS)}"
        )
    if kind in ("delta", "ramanujan-delta"):
        if len(parts) > 1 and parts[1] not in ("", "2"):
            raise IngestionError("the discriminant form has degree 2")
        return FormSpec(name="delta", degree=2, self_dual=True, source=RamanujanDelta())
    if len(parts) < 2:
        raise IngestionError(f"form '{text}' needs a degree, e.g. '{kind}:3'")
    try:
        degree = int(parts[1])
    except ValueError as exc:
        raise IngestionError(f"bad degree in form '{text}'") from exc
    if kind == "all-ones":
        if len(parts) > 2:
            raise IngestionError(f"too many fields in form '{text}'")
        return FormSpec(name="all-ones", degree=degree, self_dual=True, source=AllOnes())
    if len(parts) > 3:
        raise IngestionError(f"too many fields in form '{text}'")
    if len(parts) == 3:
        try:
            seed = int(parts[2])
        except ValueError as exc:
            raise IngestionError(f"bad seed in form '{text}'") from exc
    return FormSpec(
        name="random-unitary",
        degree=degree,
        self_dual=True,
        source=RandomUnitary(seed=seed),
    )


def _complex_from_json(value, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise IngestionError(f"cannot read complex value at {where}: {value!r}")


def _load_form_file(path: str, profile: Profile) -> FormSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IngestionError(f"cannot open form file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise IngestionError(f"form file {path} is not valid JSON: {exc}") from exc
    for key in ("name", "degree", "source"):
        if key not in data:
            raise IngestionError(f"form file {path} is missing field '{key}'")
    name = str(data["name"])
    degree = data["degree"]
    if not isinstance(degree, int) or degree < 2:
        raise IngestionError(f"form file {path}: degree must be an integer >= 2")
    self_dual = bool(data.get("self_dual", True))
    src = data["source"]
    kind = src.get("type")
    if kind == "all-ones":
        return FormSpec(name=name, degree=degree, self_dual=self_dual, source=AllOnes())
    if kind == "random-unitary":
        return FormSpec(
            name=name,
            degree=degree,
            self_dual=self_dual,
            source=RandomUnitary(seed=int(src.get("seed", 1))),
        )
    if kind == "ramanujan-delta":
        return FormSpec(name=name, degree=degree, self_dual=self_dual, source=RamanujanDelta())
    if kind != "explicit":
        raise IngestionError(f"form file {path}: unknown source type {kind!r}")
    entries = src.get("primes")
    if not isinstance(entries, list) or not entries:
        raise IngestionError(f"form file {path}: explicit source needs a 'primes' list")
    local: list[tuple[int, tuple[complex, ...]]] = []
    seen: set[int] = set()
    for idx, item in enumerate(entries):
        if not isinstance(item, dict) or "p" not in item or "alphas" not in item:
            raise IngestionError(
                f"form file {path}: primes[{idx}] needs fields 'p' and 'alphas'"
            )
        try:
            p = int(item["p"])
        except (TypeError, ValueError) as exc:
            raise IngestionError(f"form file {path}: bad prime in primes[{idx}]") from exc
        if p < 2 or p in seen:
            raise IngestionError(f"form file {path}: bad or duplicate prime {p}")
        seen.add(p)
        entry = item["alphas"]
        if not isinstance(entry, list) or len(entry) != degree:
            raise FormValidationError(
                f"form '{name}': prime {p} needs exactly {degree} parameters"
            )
        alphas = tuple(
            _complex_from_json(v, f"prime {p}, slot {i}") for i, v in enumerate(entry)
        )
        local.append((p, alphas))
    form = FormSpec(
        name=name,
        degree=degree,
        self_dual=self_dual,
        source=Explicit(local=tuple(sorted(local))),
    )
    for p, alphas in form.source.local:
        s = SatakeLocal(p=p, alphas=np.asarray(alphas, dtype=complex))
        try:
            s.validate(self_dual=self_dual, profile=profile)
        except DomainError as exc:
            raise FormValidationError(
                f"form '{name}' fails validation at prime {p}: {exc}"
            ) from exc
    return form


def load_form(text: str, seed: int = 1, profile: Profile = DEFAULT) -> FormSpec:
    """Resolve a builtin form string or a JSON form file.

    Builtin syntax: "all-ones:3", "random-unitary:4" (seed from the seed
    argument) or "random-unitary:4:99" (embedded seed), "delta".

    Raises:
        IngestionError: unknown names, malformed files.
        FormValidationError: explicit data violating structural invariants.
    """
    if text.endswith(".json") or os.path.sep in text or os.path.exists(text):
        return _load_form_file(text, profile)
    return _parse_builtin(text, seed)


def builtin_forms(seed: int = 1) -> list[FormSpec]:
    """The default desk set: all-ones degrees 2 and 3, discriminant, one seeded unitary."""
    return [
        load_form("all-ones:2"),
        load_form("all-ones:3"),
        load_form("delta"),
        load_form(f"random-unitary:3:{seed}"),
    ]
