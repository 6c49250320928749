"""Homogeneous polynomials and linear forms, rational and eps-valued."""

import random
from fractions import Fraction
from math import comb, factorial

import pytest

from waring import EpsScalar, HomoPoly, LinearForm, falling_factorial, monomials_of_degree
from conftest import F, esc, lf, mono, rand_poly


def test_falling_factorial_values():
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(7, 0) == 1
    assert falling_factorial(4, 4) == factorial(4)
    assert falling_factorial(3, 1) == 3


def test_monomials_of_degree_enumeration():
    for n in range(1, 4):
        for d in range(0, 5):
            ms = monomials_of_degree(n, d)
            assert len(ms) == comb(n + d - 1, d)
            assert len(set(ms)) == len(ms)
            assert all(len(m) == n and sum(m) == d for m in ms)


def test_homopoly_construction_and_access():
    f = HomoPoly(2, 2, {(2, 0): F(1), (1, 1): F(0), (0, 2): F(-3)})
    assert f.coeff((1, 1)) == 0
    assert f.coeff((0, 2)) == -3
    assert len(f) == 2
    assert f.monomials() == ((2, 0), (0, 2))  # graded-lex, largest first
    assert not f.is_zero
    assert HomoPoly.zero(3, 4).is_zero


def test_homopoly_rejects_bad_terms():
    with pytest.raises(ValueError):
        HomoPoly(2, 2, {(1, 0): F(1)})  # wrong total degree
    with pytest.raises(ValueError):
        HomoPoly(2, 2, {(1, 1, 0): F(1)})  # wrong arity


def test_homopoly_ring_ops():
    x = HomoPoly.variable(2, 0)
    y = HomoPoly.variable(2, 1)
    f = (x + y) * (x + y)
    assert f == mono(2, (2, 0)) + mono(2, (1, 1), 2) + mono(2, (0, 2))
    assert f - f == HomoPoly.zero(2, 2)
    assert f.scale(F(1, 2)).coeff((1, 1)) == 1
    with pytest.raises(ValueError):
        x + mono(2, (2, 0))  # degree mismatch


def test_homopoly_differentiate():
    f = mono(2, (3, 0)) + mono(2, (1, 2))  # x^3 + x y^2
    assert f.differentiate(0) == mono(2, (2, 0), 3) + mono(2, (0, 2))
    assert f.differentiate(1, 2) == mono(2, (1, 0), 2)
    assert f.differentiate(1, 3).is_zero


def test_homopoly_substitute_linear():
    f = mono(2, (2, 0))  # x^2
    g = f.substitute_linear([[F(1), F(1)], [F(0), F(1)]])  # x -> x + y
    assert g == mono(2, (2, 0)) + mono(2, (1, 1), 2) + mono(2, (0, 2))


def test_homopoly_used_vars_and_var_windows():
    f = mono(3, (2, 0, 1))
    assert f.used_vars() == (0, 2)
    g = mono(2, (2, 0)).extend_vars(4)
    assert g.nvars == 4 and g.coeff((2, 0, 0, 0)) == 1
    assert g.take_vars(2) == mono(2, (2, 0))
    with pytest.raises(ValueError):
        f.take_vars(2)  # drops a used variable


def test_homopoly_restrict_zero():
    f = mono(3, (1, 1, 1)) + mono(3, (3, 0, 0))
    assert f.restrict_zero([1]) == mono(3, (3, 0, 0))
    assert f.restrict_zero([0]).is_zero


def test_homopoly_eps_lift_and_limit():
    f = mono(2, (2, 0)) + mono(2, (0, 2), 3)
    lifted = f.lift_to_eps()
    assert lifted.limit_at_zero() == f
    g = lifted.scale(EpsScalar.eps(1)) + mono(2, (1, 1)).lift_to_eps()
    assert g.min_valuation() == (0, (1, 1))
    assert g.limit_at_zero() == mono(2, (1, 1))


def test_linearform_power_binomial():
    form = lf(F(1), F(2))
    p = form.power(3)
    assert p == (
        mono(2, (3, 0))
        + mono(2, (2, 1), 6)
        + mono(2, (1, 2), 12)
        + mono(2, (0, 3), 8)
    )
    assert form.to_poly() == mono(2, (1, 0)) + mono(2, (0, 1), 2)


def test_linearform_eps_power():
    form = lf(EpsScalar.one(), EpsScalar.eps())
    p = form.power(2)
    assert p.limit_at_zero() == mono(2, (2, 0))
    assert p.coeff((1, 1)) == EpsScalar.eps() * 2


def test_linearform_parallel_and_scale():
    assert lf(F(2), F(4)).is_parallel(lf(F(1), F(2)))
    assert not lf(F(1), F(1)).is_parallel(lf(F(1), F(2)))
    assert not lf(F(1), F(0)).is_parallel(lf(F(0), F(1)))
    doubled = lf(F(1), F(2)).scale(F(2))
    assert doubled.coefs == (F(2), F(4))


def test_linearform_substitute_matches_poly_substitution():
    rng = random.Random(3)
    rows = [[F(rng.randint(-3, 3)) for _ in range(3)] for _ in range(3)]
    form = lf(F(1), F(-2), F(3))
    d = 3
    lhs = form.substitute(rows).power(d)
    rhs = form.power(d).substitute_linear(rows)
    assert lhs == rhs


def test_linearform_restrict_and_windows():
    form = lf(F(0), F(1), F(2))
    assert form.restrict_zero([1]).coefs == (F(0), F(0), F(2))
    assert form.restrict_zero([1, 2]) is None
    assert form.extend_vars(4).coefs == (F(0), F(1), F(2), F(0))
    assert lf(F(1), F(0)).take_vars(1).coefs == (F(1),)
    with pytest.raises(ValueError):
        form.take_vars(2)


def test_linearform_variable_and_derivative():
    v = LinearForm.variable(3, 1)
    assert v.coefs == (F(0), F(1), F(0))
    assert lf(F(2), F(5)).derivative(1) == F(5)


def test_linearform_rejects_degenerate_input():
    with pytest.raises(ValueError):
        LinearForm(())
    with pytest.raises(ValueError):
        LinearForm((F(0), F(0)))
    # mixed scalar kinds are lifted to eps uniformly, never left mixed
    form = LinearForm((F(1), esc((0, 1))))
    assert not form.is_rational
    assert all(isinstance(c, EpsScalar) for c in form.coefs)


def test_substitute_roundtrip_random():
    rng = random.Random(23)
    for _ in range(20):
        n = rng.randint(1, 3)
        d = rng.randint(1, 4)
        f = rand_poly(rng, n, d)
        # a random unimodular-ish upper triangular change of variables
        rows = [
            [F(1) if i == j else (F(rng.randint(-2, 2)) if j > i else F(0)) for j in range(n)]
            for i in range(n)
        ]
        inv = _invert_unitriangular(rows)
        assert f.substitute_linear(rows).substitute_linear(inv) == f


def _invert_unitriangular(rows):
    n = len(rows)
    inv = [[F(1) if i == j else F(0) for j in range(n)] for i in range(n)]
    for i in range(n - 1, -1, -1):
        for j in range(i + 1, n):
            s = sum(rows[i][k] * inv[k][j] for k in range(i + 1, n))
            inv[i][j] = -s
    return inv
