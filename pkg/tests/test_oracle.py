"""Rank oracles (catalecticant, binary-form algorithm) and family generators."""

import random
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest
import sympy

from waring import (
    EpsScalar,
    HomoPoly,
    catalecticant_bound,
    check_border,
    gen_family,
    gen_multibase,
    gen_osculating,
    gen_random,
    gen_tangent,
    is_local,
    monomial_upper,
    sylvester_rank,
    verify_waring,
)
from conftest import F, mono, rand_poly


# -- catalecticant ----------------------------------------------------------


def test_catalecticant_frozen_values():
    x2y = mono(2, (2, 1))
    assert catalecticant_bound(x2y, 0) == 1
    assert catalecticant_bound(x2y, 1) == 2
    assert catalecticant_bound(x2y, 2) == 2
    assert catalecticant_bound(x2y, 3) == 1

    xyz = mono(3, (1, 1, 1))
    assert catalecticant_bound(xyz, 1) == 3
    assert catalecticant_bound(xyz, 2) == 3

    fermat = mono(3, (3, 0, 0)) + mono(3, (0, 3, 0)) + mono(3, (0, 0, 3))
    assert catalecticant_bound(fermat, 1) == 3

    assert catalecticant_bound(mono(2, (2, 2)), 2) == 3
    assert catalecticant_bound(mono(2, (4, 0)) + mono(2, (1, 3)), 2) == 3

    # a pure power has every catalecticant of rank one
    pw = mono(2, (4, 0)) + mono(2, (3, 1), 4) + mono(2, (2, 2), 6) + mono(2, (1, 3), 4) + mono(2, (0, 4))
    for s in range(5):
        assert catalecticant_bound(pw, s) == 1


def test_catalecticant_validation():
    with pytest.raises(ValueError):
        catalecticant_bound(HomoPoly.zero(2, 2), 1)
    with pytest.raises(ValueError):
        catalecticant_bound(mono(2, (2, 0)), 3)


def sympy_catalecticant_rank(f, s):
    """Independent reimplementation straight from sympy differentiation."""
    syms = sympy.symbols(f"v0:{f.nvars}")
    expr = sympy.Integer(0)
    for m, c in f.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for t, e in zip(syms, m):
            term *= t**e
        expr += term

    def monos(deg):
        out = []
        for picks in combinations_with_replacement(range(f.nvars), deg):
            e = [0] * f.nvars
            for i in picks:
                e[i] += 1
            out.append(tuple(e))
        return out

    cols = monos(f.degree - s)
    rows = []
    for alpha in monos(s):
        g = expr
        for t, o in zip(syms, alpha):
            for _ in range(o):
                g = sympy.diff(g, t)
        gp = sympy.Poly(g, *syms) if g != 0 else None
        row = []
        for m in cols:
            if gp is None:
                row.append(0)
            else:
                row.append(gp.coeff_monomial(sympy.prod(t**e for t, e in zip(syms, m))))
        rows.append(row)
    return sympy.Matrix(rows).rank()


def test_catalecticant_matches_sympy_on_random_forms():
    rng = random.Random(47)
    for _ in range(12):
        n = rng.randint(2, 3)
        d = rng.randint(2, 4)
        f = rand_poly(rng, n, d, height=5)
        for s in range(d + 1):
            assert catalecticant_bound(f, s) == sympy_catalecticant_rank(f, s)


# -- binary-form rank algorithm ---------------------------------------------


def test_sylvester_frozen_classics():
    assert sylvester_rank(mono(2, (3, 0))) == (1, 1)
    assert sylvester_rank(mono(2, (2, 1))) == (3, 2)
    assert sylvester_rank(mono(2, (3, 0)) + mono(2, (0, 3))) == (2, 2)
    assert sylvester_rank(mono(2, (2, 2))) == (3, 3)
    # square-free kernel form: rank s on the nose
    assert sylvester_rank(mono(2, (4, 0)) + mono(2, (1, 3))) == (3, 3)
    # kernel form with a repeated root: rank jumps to d + 2 - s
    assert sylvester_rank(mono(2, (3, 2))) == (4, 3)


def test_sylvester_monomials_closed_form():
    for a in range(1, 6):
        for b in range(1, 6):
            if a + b > 7:
                continue
            wr, bwr = sylvester_rank(mono(2, (a, b)))
            assert wr == max(a, b) + 1
            assert bwr == min(a, b) + 1


def test_sylvester_linear_form():
    assert sylvester_rank(mono(2, (1, 0)) + mono(2, (0, 1), 2)) == (1, 1)


def test_sylvester_validation():
    with pytest.raises(ValueError):
        sylvester_rank(mono(3, (1, 1, 1)))
    with pytest.raises(ValueError):
        sylvester_rank(HomoPoly.zero(2, 3))


def test_sylvester_scaling_invariance():
    rng = random.Random(53)
    for _ in range(10):
        f = rand_poly(rng, 2, rng.randint(2, 6), height=7)
        assert sylvester_rank(f) == sylvester_rank(f.scale(F(3, 7)))


# -- generators -------------------------------------------------------------


def test_gen_tangent_is_first_order_osculating():
    f1, B1 = gen_tangent(5)
    f2, B2 = gen_osculating(5, 1)
    assert f1 == f2 and B1 == B2
    assert f1 == mono(2, (4, 1))
    assert B1.rank() == 2


def test_gen_osculating_certificates():
    for d, j in [(4, 2), (5, 2), (6, 3)]:
        f, B = gen_osculating(d, j)
        assert f == mono(2, (d - j, j))
        assert B.rank() == j + 1
        out = check_border(B, f)
        assert out.ok and out.q == 1
        # divided-difference weights sum to zero for j >= 1
        total = EpsScalar.zero()
        for w, _ in B.summands:
            total = total + w
        assert total.is_zero
        assert is_local(B) is not None


def test_gen_osculating_validation():
    with pytest.raises(ValueError):
        gen_osculating(3, 0)
    with pytest.raises(ValueError):
        gen_osculating(3, 3)
    with pytest.raises(ValueError):
        gen_osculating(1, 1)


def test_gen_multibase_certificates():
    for d in (2, 5):
        f, B = gen_multibase(d)
        assert B.rank() == 4
        assert f.coeff((d - 1, 0, 1, 0)) == d
        assert f.coeff((0, d - 1, 0, 1)) == d
        assert check_border(B, f).ok
        assert is_local(B) is None


def test_gen_random_is_deterministic_and_verified():
    f1, B1 = gen_random(3, 3, 4, seed=12)
    f2, B2 = gen_random(3, 3, 4, seed=12)
    assert f1 == f2 and B1 == B2
    f3, _ = gen_random(3, 3, 4, seed=13)
    assert f3 != f1
    for seed in range(25):
        f, B = gen_random(2, 4, 3, seed=seed)
        assert not f.is_zero
        assert B.rank() == 3
        out = check_border(B, f)
        assert out.ok


def test_gen_random_respects_the_advertised_shapes():
    for seed in range(10):
        _, B = gen_random(3, 5, 4, seed=seed)
        for w, form in B.summands:
            # weights are a single term c * eps^v with v in [-2, 2]; for
            # negative v the eps power sits in the denominator canonically
            assert len(w.num.pairs()) == 1
            assert len(w.den.pairs()) == 1
            assert -2 <= w.valuation() <= 2
            _, c = w.laurent_lead()
            assert abs(c.numerator) <= 9 and c.denominator <= 9
            for c in form.coefs:
                if c.is_zero:
                    continue
                assert c.is_polynomial
                assert c.num.degree() <= 2
                for _, coeff in c.num.pairs():
                    assert abs(coeff.numerator) <= 9 and coeff.denominator <= 9


def test_gen_random_validation():
    with pytest.raises(ValueError):
        gen_random(0, 3, 2)
    with pytest.raises(ValueError):
        gen_random(2, 0, 2)
    with pytest.raises(ValueError):
        gen_random(2, 3, 0)


def test_gen_family_dispatch():
    assert gen_family("tangent", d=3) == gen_tangent(3)
    assert gen_family("osculating", d=5, j=2) == gen_osculating(5, 2)
    assert gen_family("multibase", d=4) == gen_multibase(4)
    assert gen_family("random", d=3, nvars=2, rank=2, seed=7) == gen_random(2, 3, 2, seed=7)
    with pytest.raises(ValueError):
        gen_family("tangent")
    with pytest.raises(ValueError):
        gen_family("osculating", d=5)
    with pytest.raises(ValueError):
        gen_family("random", d=3)
    with pytest.raises(ValueError):
        gen_family("cubature", d=3)


# -- monomial decompositions ------------------------------------------------


def test_monomial_upper_xz2():
    W = monomial_upper((1, 0, 2))
    assert W.rank() == 3
    assert verify_waring(W, mono(3, (1, 0, 2)))
    forms = {form.coefs for _, form in W.summands}
    assert forms == {(F(1), F(0), F(0)), (F(1), F(0), F(1)), (F(1), F(0), F(-1))}


def test_monomial_upper_various():
    cases = [(3,), (0, 2), (2, 3), (1, 1, 1), (0, 1, 0, 2)]
    for exps in cases:
        W = monomial_upper(exps)
        assert verify_waring(W, mono(len(exps), exps))


def test_monomial_upper_pure_power_is_rank_one():
    W = monomial_upper((0, 4, 0))
    assert W.rank() == 1
    assert W.summands[0][1].coefs == (F(0), F(1), F(0))


def test_monomial_upper_validation():
    with pytest.raises(ValueError):
        monomial_upper((0, 0))
    with pytest.raises(ValueError):
        monomial_upper((1, -1))
    with pytest.raises(ValueError):
        monomial_upper(())
