import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nestedshells.errors import NotCoprime
from nestedshells.exactnum import (ONE, TAU, TAU_CONJ, ZERO, CycInt, QTau, QTauExt, cyc5_abs2,
                                   cyc_apply_t, cyclotomic_poly, decimal_str, euler_phi, exact_str,
                                   galois_conj, galois_sigma, parse_qtau, qtau_cmp)

TAU_F = (1 + math.sqrt(5)) / 2

small = st.integers(min_value=-50, max_value=50)
fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
qtaus = st.builds(QTau, fracs, fracs)


def test_defining_relation():
    assert TAU * TAU == TAU + ONE
    assert qtau_cmp(TAU * TAU, TAU + 1) == 0


def test_ordering_examples():
    assert qtau_cmp(TAU, ONE) == 1
    assert qtau_cmp(TAU_CONJ, ZERO) == -1
    assert TAU_CONJ == 1 - TAU


def test_galois_examples():
    assert galois_conj(TAU) == 1 - TAU
    assert galois_conj(QTau(Fraction(3, 7))) == QTau(Fraction(3, 7))


@given(qtaus)
def test_conjugation_is_involution(u):
    assert galois_conj(galois_conj(u)) == u


@given(qtaus, qtaus, qtaus)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a


@given(qtaus)
def test_inverse(u):
    if u == ZERO:
        with pytest.raises(ZeroDivisionError):
            u.inverse()
    else:
        assert u * u.inverse() == ONE


@settings(max_examples=2000)
@given(small, small, small, small)
def test_order_matches_float(a, b, c, d):
    u, v = QTau(a, b), QTau(c, d)
    fu, fv = a + b * TAU_F, c + d * TAU_F
    if abs(fu - fv) > 1e-9:
        assert qtau_cmp(u, v) == (1 if fu > fv else -1)
    assert float(u) == pytest.approx(fu)


def test_order_near_ties():
    # consecutive Fibonacci ratios approach tau from alternating sides
    fib = [1, 1]
    for _ in range(60):
        fib.append(fib[-1] + fib[-2])
    for k in range(2, 60):
        approx = QTau(Fraction(fib[k + 1], fib[k]))
        expected = -1 if k % 2 == 0 else 1
        assert qtau_cmp(approx, TAU) == expected


def test_exact_string_round_trip():
    for u in (QTau(3, -2), QTau(0, 1), QTau(Fraction(-1, 2), Fraction(5, 3)), QTau(7)):
        assert parse_qtau(exact_str(u)) == u
    assert exact_str(QTau(3, -2)) == "3 - 2·tau"
    assert decimal_str(TAU, 7) == "1.618034"


def test_extension_arithmetic():
    d = QTau(3, -1)
    s = QTauExt(0, 1, d)
    assert s * s == QTauExt(d, 0, d)
    # (3 - tau)(tau + 2) = 5
    assert d * (TAU + 2) == QTau(5)


def test_cyclotomic_polynomials():
    assert cyclotomic_poly(5) == (1, 1, 1, 1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)
    assert cyclotomic_poly(8) == (1, 0, 0, 0, 1)
    assert [euler_phi(n) for n in (5, 7, 8, 12)] == [4, 6, 4, 4]


def test_cycint_equality_uses_relation():
    # 1 + xi + ... + xi^4 = 0 in Z[xi_5]
    assert CycInt(5, [1, 1, 1, 1, 1]) == CycInt(5, [0])
    assert CycInt(12, [0, 0, 0, 0, 1]) == CycInt(12, [-1, 0, 1])  # xi^4 = xi^2 - 1


def test_t_identity_and_coprimality():
    x = CycInt(7, [1, -2, 0, 3])
    assert cyc_apply_t(1, 0, x) == x
    with pytest.raises(NotCoprime):
        cyc_apply_t(2, 1, CycInt(8, [1]))


@pytest.mark.parametrize("n", [5, 7, 8, 12])
def test_composition_law_exhaustive(n):
    x = CycInt(n, [(3 * j * j + 1) % 5 - 2 for j in range(n)])
    units = [m for m in range(1, n) if math.gcd(m, n) == 1]
    inner = {(mp, lp): cyc_apply_t(mp, lp, x) for mp in units for lp in range(n)}
    for m in units:
        for l in range(n):
            for (mp, lp), y in inner.items():
                assert cyc_apply_t(m, l, y) == cyc_apply_t(m * mp % n, (m * lp + l) % n, x)


def test_composition_example_n7():
    x = CycInt(7, [2, 0, 1, -1, 0, 4])
    assert cyc_apply_t(2, 1, cyc_apply_t(3, 2, x)) == cyc_apply_t(6, 5, x)


@pytest.mark.parametrize("n", [5, 7, 8, 12])
def test_inverse_map(n):
    x = CycInt(n, list(range(n)))
    for m in (k for k in range(1, n) if math.gcd(k, n) == 1):
        mi = pow(m, -1, n)
        for l in range(n):
            assert cyc_apply_t(mi, -mi * l % n, cyc_apply_t(m, l, x)) == x


@pytest.mark.parametrize("n", [5, 7, 8, 12])
def test_galois_fixes_rationals(n):
    r = CycInt(n, [7])
    for m in (k for k in range(1, n) if math.gcd(k, n) == 1):
        assert galois_sigma(m, r) == r


@given(st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_cyc5_modulus_matches_float(coeffs):
    x = CycInt(5, coeffs)
    assert float(cyc5_abs2(x)) == pytest.approx(abs(complex(x)) ** 2, abs=1e-9)


def test_immutable():
    with pytest.raises(AttributeError):
        TAU.a = 3
