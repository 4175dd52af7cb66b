"""Small numeric helpers shared across modules.

Summation of table-derived quantities always runs in a fixed ascending
order with exact (``math.fsum``) accumulation, so repeated runs and
different worker counts reduce to bit-identical results.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np


def fsum_c(values: Iterable[complex]) -> complex:
    """Exactly-rounded sum of complex values (real and imaginary parts separately)."""
    vals = [complex(v) for v in values]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def fsum_array(values: np.ndarray) -> float:
    """Exactly-rounded sum of a real array in ascending index order."""
    return math.fsum(values.tolist())


def fsum_array_c(values: np.ndarray) -> complex:
    """Exactly-rounded sum of a complex array in ascending index order."""
    return complex(
        math.fsum(values.real.tolist()),
        math.fsum(values.imag.tolist()),
    )


def elementary_symmetric(values: np.ndarray) -> np.ndarray:
    """All elementary symmetric functions e_0..e_n of the given values.

    Computed by multiplying out prod(1 + v*x) one factor at a time, which is
    numerically benign for the short inputs used here (n <= ~10).
    """
    vals = np.asarray(values, dtype=complex)
    e = np.zeros(len(vals) + 1, dtype=complex)
    e[0] = 1.0
    for k, v in enumerate(vals, start=1):
        e[1 : k + 1] = e[1 : k + 1] + v * e[0:k]
    return e


def multiset_gap(a: np.ndarray, b: np.ndarray) -> float:
    """Distance between two complex multisets of equal size.

    Compares elementary symmetric functions, which agree exactly iff the
    multisets coincide; the result is the worst relative coefficient gap.
    This avoids fragile element-by-element matching near ties.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError("multisets must have equal size")
    ea = elementary_symmetric(a)
    eb = elementary_symmetric(b)
    scale = 1.0 + np.abs(ea) + np.abs(eb)
    return float(np.max(np.abs(ea - eb) / scale))


def rel_gap(x: float, y: float) -> float:
    """Symmetric relative gap |x-y| / max(1, |x|, |y|)."""
    return abs(x - y) / max(1.0, abs(x), abs(y))
