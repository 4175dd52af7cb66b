import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfkit import (
    CapacityError,
    CoefficientTable,
    DomainError,
    InsufficientTableError,
    SatakeLocal,
    build_coefficient_table,
    dual_symmetry_check,
    load_form,
    local_A_powers,
    tuple_coefficient,
    verify_hecke_relation,
)
from lfkit.coeffs import LocalCoefficients, power_sums_from_h

from oracles import ordered_factorizations, schur_bialternant

from test_satake import conjugation_closed_alphas, unit_product_alphas


# -- local power series --------------------------------------------------------


def test_all_ones_powers_are_divisor_counts():
    for n in range(2, 7):
        s = SatakeLocal(p=2, alphas=np.ones(n, dtype=complex))
        h = local_A_powers(s, 20)
        for k in range(21):
            expected = math.comb(k + n - 1, n - 1)
            assert h[k].real == pytest.approx(expected, rel=1e-12)
            assert abs(h[k].imag) < 1e-9


def test_powers_match_geometric_series():
    # degree 2 with alphas (a, 1/a): h_k = (a^{k+1} - a^{-k-1}) / (a - 1/a)
    a = 0.8 * cmath.exp(0.3j)
    s = SatakeLocal(p=3, alphas=np.array([a, 1.0 / a]))
    h = local_A_powers(s, 12)
    for k in range(13):
        expected = (a ** (k + 1) - a ** -(k + 1)) / (a - 1.0 / a)
        assert h[k] == pytest.approx(expected, abs=1e-12)


def test_powers_rejects_negative_kmax():
    s = SatakeLocal(p=2, alphas=np.array([1j, -1j]))
    with pytest.raises(DomainError):
        local_A_powers(s, -1)


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_power_sums_from_h_newton(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 7))
    alphas = unit_product_alphas(rng, n)
    s = SatakeLocal(p=2, alphas=alphas)
    h = local_A_powers(s, 10)
    psi = power_sums_from_h(h, 10)
    for r in range(1, 11):
        assert psi[r - 1] == pytest.approx(complex(np.sum(alphas**r)), abs=1e-9)


# -- tuple coefficients ----------------------------------------------------------


def test_tuple_value_matches_bialternant():
    rng = np.random.default_rng(5)
    for n in (2, 3, 4, 5):
        alphas = unit_product_alphas(rng, n)
        alg = LocalCoefficients(SatakeLocal(p=2, alphas=alphas))
        for exps in [(1,), (2,), (0, 1), (1, 1), (2, 3), (1, 0, 2)]:
            if len(exps) != n - 1:
                continue
            # partition lambda_i = sum of exponents from slot i on
            lam = tuple(sum(exps[i:]) for i in range(n - 1))
            expected = schur_bialternant(alphas, lam)
            assert alg.tuple_value(exps) == pytest.approx(expected, abs=1e-9)


def test_tuple_value_basis_cases():
    rng = np.random.default_rng(9)
    alphas = unit_product_alphas(rng, 3)
    alg = LocalCoefficients(SatakeLocal(p=5, alphas=alphas))
    assert alg.tuple_value((0, 0)) == pytest.approx(1.0 + 0.0j, abs=1e-12)
    # slot-1 eigenvalue is e_1, slot-2 eigenvalue is e_2
    e1 = complex(np.sum(alphas))
    e2 = complex(alphas[0] * alphas[1] + alphas[0] * alphas[2] + alphas[1] * alphas[2])
    assert alg.tuple_value((1, 0)) == pytest.approx(e1, abs=1e-12)
    assert alg.tuple_value((0, 1)) == pytest.approx(e2, abs=1e-12)


def test_tuple_value_shape_errors():
    alg = LocalCoefficients(SatakeLocal(p=2, alphas=np.array([1j, -1j])))
    with pytest.raises(DomainError):
        alg.tuple_value((1, 2))
    with pytest.raises(DomainError):
        alg.tuple_value((-1,))


def test_tuple_coefficient_wrapper():
    s = SatakeLocal(p=7, alphas=np.ones(3, dtype=complex))
    tc = tuple_coefficient(s, (2, 1))
    assert tc.p == 7
    assert tc.exponents == (2, 1)
    # all-ones degree 3: A(p^2, p) = s_{(3,1)}(1,1,1) = 15 tableaux
    assert tc.value == pytest.approx(15.0 + 0.0j, abs=1e-10)


# -- multiplicative relations -----------------------------------------------------


def test_hecke_relation_residuals_random_unitary():
    rng = np.random.default_rng(17)
    for n in (2, 3, 4):
        alphas = conjugation_closed_alphas(rng, n)
        s = SatakeLocal(p=3, alphas=alphas)
        alg = LocalCoefficients(s)
        for a in range(4):
            for exps in [(0,) * (n - 1), (1,) * (n - 1), (2,) + (0,) * (n - 2)]:
                chk = verify_hecke_relation(s, a, exps, algebra=alg)
                assert chk.residual <= 1e-9
                assert chk.terms >= 1


def test_hecke_relation_gl2_explicit():
    # degree 2 the relation specializes to A(p)A(p^k) = A(p^{k+1}) + A(p^{k-1})
    rng = np.random.default_rng(23)
    alphas = unit_product_alphas(rng, 2)
    s = SatakeLocal(p=11, alphas=alphas)
    alg = LocalCoefficients(s)
    for k in range(1, 6):
        lhs = alg.h(1) * alg.h(k)
        rhs = alg.h(k + 1) + alg.h(k - 1)
        assert lhs == pytest.approx(rhs, abs=1e-12)
        chk = verify_hecke_relation(s, 1, (k,), algebra=alg)
        assert chk.residual < 1e-12


def test_hecke_relation_rejects_negative_power():
    s = SatakeLocal(p=2, alphas=np.array([1j, -1j]))
    with pytest.raises(DomainError):
        verify_hecke_relation(s, -1, (1,))


def test_dual_symmetry_self_dual_forms():
    rng = np.random.default_rng(31)
    for n in (3, 4, 5):
        s = SatakeLocal(p=7, alphas=conjugation_closed_alphas(rng, n))
        alg = LocalCoefficients(s)
        for exps in [(1,) + (0,) * (n - 2), (2, 1) + (0,) * (n - 3), (1,) * (n - 1)]:
            assert dual_symmetry_check(s, exps, algebra=alg) < 1e-9


def test_dual_symmetry_detects_asymmetry():
    # unit product but far from conjugation closed
    a = 1.5 * cmath.exp(0.4j)
    b = cmath.exp(1.9j)
    s = SatakeLocal(p=2, alphas=np.array([a, b, 1.0 / (a * b)]))
    assert dual_symmetry_check(s, (2, 0)) > 1e-3


# -- dense tables -------------------------------------------------------------------


def test_table_all_ones_is_divisor_table(table_ao2_small):
    t = table_ao2_small
    for m in (1, 2, 12, 60, 1024, 4999):
        assert t.a_value(m).real == pytest.approx(ordered_factorizations(m, 2), rel=1e-12)
    assert t.form_id == "all-ones-2"
    assert t.degree == 2


def test_table_multiplicativity(table_delta_small):
    t = table_delta_small
    for a, b in [(2, 3), (4, 9), (8, 5), (25, 49), (11, 13)]:
        assert t.a_value(a * b) == pytest.approx(
            t.a_value(a) * t.a_value(b), abs=1e-10
        )


def test_table_lambda_support(table_ao2_small):
    t = table_ao2_small
    assert t.lambda_value(6) == 0.0
    assert t.lambda_value(1) == 0.0
    # all-ones degree n: Lambda_f(p^r) = n log p
    assert t.lambda_value(8) == pytest.approx(2.0 * math.log(2), abs=1e-12)
    assert t.lambda_value(97) == pytest.approx(2.0 * math.log(97), abs=1e-12)
    support = t.lam_support
    assert list(support) == sorted(support)
    assert np.all(t.lam_primes**t.lam_exponents == support)


def test_table_lambda_delta(table_delta_small):
    t = table_delta_small
    # Lambda_f(p) = log p * a(p) for degree 2
    for p in (2, 3, 101):
        assert t.lambda_value(p) == pytest.approx(
            math.log(p) * t.a_value(p), abs=1e-10
        )
    # Lambda_f(p^2) = log p * (a(p)^2 - 2) on the unit circle pair
    a2 = t.a_value(2)
    assert t.lambda_value(4) == pytest.approx(math.log(2) * (a2 * a2 - 2.0), abs=1e-10)


def test_table_range_checks(table_ao2_small):
    t = table_ao2_small
    with pytest.raises(DomainError):
        t.a_value(0)
    with pytest.raises(DomainError):
        t.a_value(t.limit + 1)
    with pytest.raises(InsufficientTableError):
        t.require(t.limit + 1, "test")
    t.require(t.limit, "test")


def test_table_caps():
    form = load_form("all-ones:2")
    with pytest.raises(CapacityError):
        build_coefficient_table(form, 20_000_000)
    with pytest.raises(DomainError):
        build_coefficient_table(form, 0)


def test_zero_table():
    t = CoefficientTable.zero(3, 100)
    assert t.a_value(1) == 1.0
    assert t.a_value(50) == 0.0
    assert t.lambda_value(8) == 0.0


def test_table_matches_local_powers(unitary3):
    t = build_coefficient_table(unitary3, 200)
    alg = LocalCoefficients(unitary3.local(2))
    for k in (1, 2, 3, 5, 7):
        assert t.a_value(2**k) == pytest.approx(alg.h(k), abs=1e-10)
