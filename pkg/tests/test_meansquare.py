import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfkit import (
    CapacityError,
    DirichletPolynomial,
    DomainError,
    exact_mean_square,
    hard_cutoff,
    mv_discrepancy,
    smoothed_logderiv_polynomial,
    split_boundary,
    truncated_tail_split,
)
from lfkit.errors import InsufficientTableError
from lfkit.meansquare import SplitPolynomial

from oracles import mean_square_quad


def random_poly(rng, max_terms=12, max_freq=600):
    count = int(rng.integers(1, max_terms + 1))
    freqs = np.sort(rng.choice(np.arange(1, max_freq), size=count, replace=False))
    coeffs = rng.uniform(-1, 1, count) + 1j * rng.uniform(-1, 1, count)
    return DirichletPolynomial(freqs=freqs.astype(np.int64), coeffs=coeffs)


# -- container ------------------------------------------------------------------


def test_polynomial_validation():
    with pytest.raises(DomainError):
        DirichletPolynomial(freqs=np.array([1, 1]), coeffs=np.array([1.0, 2.0]))
    with pytest.raises(DomainError):
        DirichletPolynomial(freqs=np.array([3, 2]), coeffs=np.array([1.0, 2.0]))
    with pytest.raises(DomainError):
        DirichletPolynomial(freqs=np.array([0]), coeffs=np.array([1.0]))
    with pytest.raises(DomainError):
        DirichletPolynomial(freqs=np.array([1, 2]), coeffs=np.array([1.0]))


def test_polynomial_evaluate():
    poly = DirichletPolynomial(freqs=np.array([2, 3]), coeffs=np.array([1.0, 2.0j]))
    t = 1.7
    expected = np.exp(-1j * t * math.log(2)) + 2j * np.exp(-1j * t * math.log(3))
    assert poly.evaluate(t) == pytest.approx(expected)


# -- exact second moment -----------------------------------------------------------


def test_single_term_mean_square():
    poly = DirichletPolynomial(freqs=np.array([7]), coeffs=np.array([2.0 - 1.0j]))
    ms = exact_mean_square(poly, 13.0)
    assert ms.exact == pytest.approx(13.0 * 5.0)
    assert ms.offdiag == 0.0


def test_two_term_closed_form():
    # |a|^2 T + cross terms with frequency gap log(3/2)
    a, b = 1.0 + 0.0j, -0.5 + 0.25j
    poly = DirichletPolynomial(freqs=np.array([2, 3]), coeffs=np.array([a, b]))
    T = 5.0
    d = math.log(3.0 / 2.0)
    cross = 2.0 * (a * np.conj(b) * (np.exp(1j * 2 * T * d) - np.exp(1j * T * d)) / (1j * d)).real
    expected = T * (abs(a) ** 2 + abs(b) ** 2) + cross
    ms = exact_mean_square(poly, T)
    assert ms.exact == pytest.approx(expected, rel=1e-12)


def test_mean_square_against_quadrature(rng):
    for _ in range(12):
        poly = random_poly(rng)
        T = float(rng.uniform(1.0, 40.0))
        ms = exact_mean_square(poly, T)
        ref = mean_square_quad(poly.freqs, poly.coeffs, T)
        assert ms.exact == pytest.approx(ref, rel=1e-8, abs=1e-10)
        ms.validate()


def test_diagonal_scales_linearly(rng):
    poly = random_poly(rng)
    d1 = exact_mean_square(poly, 10.0).diagonal
    d2 = exact_mean_square(poly, 20.0).diagonal
    assert d2 == pytest.approx(2.0 * d1, rel=1e-12)


def test_mean_square_homogeneity(rng):
    poly = random_poly(rng)
    scaled = DirichletPolynomial(freqs=poly.freqs, coeffs=3.0 * poly.coeffs)
    m1 = exact_mean_square(poly, 7.0).exact
    m9 = exact_mean_square(scaled, 7.0).exact
    assert m9 == pytest.approx(9.0 * m1, rel=1e-11)


def test_mean_square_nonnegative_property(rng):
    for _ in range(40):
        poly = random_poly(rng, max_terms=6, max_freq=50)
        T = float(rng.uniform(0.1, 100.0))
        assert exact_mean_square(poly, T).exact >= -1e-9


def test_empty_polynomial():
    poly = DirichletPolynomial(freqs=np.array([], dtype=np.int64), coeffs=np.array([], dtype=complex))
    ms = exact_mean_square(poly, 3.0)
    assert ms.exact == 0.0
    with pytest.raises(DomainError):
        mv_discrepancy(poly, 3.0)


def test_mean_square_input_checks(rng):
    poly = random_poly(rng)
    with pytest.raises(DomainError):
        exact_mean_square(poly, 0.0)
    with pytest.raises(DomainError):
        exact_mean_square(poly, 10.0, band=0)


def test_mean_square_term_cap(profile):
    count = profile.limits.mean_square_terms + 1
    poly = DirichletPolynomial(
        freqs=np.arange(1, count + 1, dtype=np.int64),
        coeffs=np.zeros(count, dtype=complex),
    )
    with pytest.raises(CapacityError):
        exact_mean_square(poly, 1.0)


def test_band_widens_to_exact(rng):
    poly = random_poly(rng, max_terms=10, max_freq=40)
    full = exact_mean_square(poly, 9.0)
    banded = exact_mean_square(poly, 9.0, band=100)  # wider than any gap
    assert banded.exact == pytest.approx(full.exact, rel=1e-12)
    narrow = exact_mean_square(poly, 9.0, band=1)
    # narrow band keeps the diagonal but drops distant pairs
    assert narrow.diagonal == pytest.approx(full.diagonal, rel=1e-12)


def test_blocked_pair_sum_crosses_blocks(rng):
    # more terms than one block so the block loop takes several passes
    count = 1200
    freqs = np.arange(1, count + 1, dtype=np.int64)
    coeffs = (rng.uniform(-1, 1, count) + 1j * rng.uniform(-1, 1, count)) / count
    poly = DirichletPolynomial(freqs=freqs, coeffs=coeffs)
    ms = exact_mean_square(poly, 2.0)
    ms.validate()
    assert ms.exact >= 0.0


# -- classical comparison -----------------------------------------------------------


def test_mv_discrepancy_random(rng):
    cap = 3.0 * math.pi
    worst = 0.0
    for _ in range(50):
        poly = random_poly(rng, max_terms=20, max_freq=1000)
        for T in (10.0, 100.0, 1000.0):
            worst = max(worst, mv_discrepancy(poly, T))
    assert worst <= cap


def test_mv_discrepancy_close_frequencies():
    # adjacent large frequencies stress the smallest log gaps
    poly = DirichletPolynomial(
        freqs=np.array([999, 1000]), coeffs=np.array([1.0 + 0j, 1.0 + 0j])
    )
    for T in (10.0, 100.0, 1000.0):
        assert mv_discrepancy(poly, T) <= 3.0 * math.pi


# -- smoothed log-derivative pieces ----------------------------------------------------


def test_split_boundary_values():
    assert split_boundary(10.0) == 26
    assert split_boundary(100.0) == 1060
    assert split_boundary(1000.0) == 23858


def test_hard_cutoff_values(profile):
    floor = profile.tol.weight_floor
    assert hard_cutoff(1000.0, floor) == 41446
    assert hard_cutoff(1000.0, floor, power=2) == 20723
    # the weight at the cutoff is still above the floor, one step later below
    Y = 50.0
    cut = hard_cutoff(Y, floor)
    assert math.exp(-cut / Y) >= floor
    assert math.exp(-(cut + 1) / Y) < floor


def test_truncated_tail_split_structure(table_ao2_small):
    parts = truncated_tail_split(table_ao2_small, 0.6, 100.0)
    assert isinstance(parts, SplitPolynomial)
    assert parts.boundary == split_boundary(100.0)
    assert parts.cutoff == hard_cutoff(100.0, 1e-18)
    assert np.all(parts.head.freqs <= parts.boundary)
    assert np.all(parts.tail.freqs > parts.boundary)
    assert np.all(parts.tail.freqs <= parts.cutoff)
    # weights: Lambda_f(m) e^{-m/Y} m^{-sigma0}
    m = 8
    lam = table_ao2_small.lambda_value(m)
    expected = lam * math.exp(-m / 100.0) * m ** (-0.6)
    idx = int(np.searchsorted(parts.head.freqs, m))
    assert parts.head.coeffs[idx] == pytest.approx(expected, rel=1e-12)


def test_truncated_tail_split_domain(table_ao2_small):
    with pytest.raises(DomainError):
        truncated_tail_split(table_ao2_small, 0.4, 100.0)
    with pytest.raises(DomainError):
        truncated_tail_split(table_ao2_small, 0.6, 5.0)
    with pytest.raises(InsufficientTableError):
        truncated_tail_split(table_ao2_small, 0.6, 10_000.0)


def test_merged_polynomial_matches_split(table_ao2_small):
    merged = smoothed_logderiv_polynomial(table_ao2_small, 0.75, 60.0)
    parts = truncated_tail_split(table_ao2_small, 0.75, 60.0)
    assert len(merged) == len(parts.head) + len(parts.tail)
    assert np.array_equal(
        merged.freqs, np.concatenate([parts.head.freqs, parts.tail.freqs])
    )
    # prime-power support only
    assert 6 not in merged.freqs
    assert 8 in merged.freqs
