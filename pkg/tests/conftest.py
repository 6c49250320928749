"""Shared builders and invariant checkers for the test suite."""

from fractions import Fraction

from waring import (
    BorderDecomposition,
    EpsPoly,
    EpsScalar,
    HomoPoly,
    LinearForm,
    check_border,
    diagonalize,
    is_local,
    normalize_border,
    staircase_check,
)
from waring.linalg import rat_inverse


def F(a, b=1):
    return Fraction(a, b)


def eps(k=1):
    return EpsScalar.eps(k)


def epoly(*pairs):
    """EpsPoly from (exponent, coefficient) pairs."""
    return EpsPoly({e: Fraction(c) for e, c in pairs})


def esc(*pairs):
    """Polynomial EpsScalar from (exponent, coefficient) pairs."""
    return EpsScalar.from_poly(epoly(*pairs))


def lf(*coefs):
    return LinearForm(tuple(coefs))


def mono(nvars, exps, c=1):
    return HomoPoly.monomial(nvars, tuple(exps), Fraction(c))


def rand_poly(rng, nvars, degree, height=9):
    """Nonzero random homogeneous polynomial with small integer coefficients."""
    from waring.poly import monomials_of_degree

    while True:
        terms = {}
        for m in monomials_of_degree(nvars, degree):
            if rng.random() < 0.5:
                continue
            c = rng.randint(-height, height)
            if c:
                terms[m] = Fraction(c)
        if terms:
            return HomoPoly(nvars, degree, terms)


def assert_staircase_invariants(f, B):
    """Diagonalize and assert every structural property, returning the result.

    Checked here on top of staircase_check itself: the first pivot valuation
    is zero and the valuations are monotone, the change of variables is a
    unit at eps = 0 with an exactly invertible value, the transformed
    expansion equals the original one composed with the transform, the
    transformed certificate still proves the transformed limit, and a local
    certificate stays local.
    """
    D = diagonalize(B, f)
    staircase_check(D)

    qs = [q for _, q in D.pivots]
    assert qs[0] == 0
    assert all(a <= b for a, b in zip(qs, qs[1:]))
    assert 1 <= D.p <= min(B.rank(), B.nvars)

    assert D.transform.is_unit_at_zero()
    rat_inverse(D.base_change)  # raises if singular
    ident = [[Fraction(1 if i == j else 0) for j in range(B.nvars)] for i in range(B.nvars)]
    prod = [
        [sum(D.base_change[i][k] * D.base_change_inv[k][j] for k in range(B.nvars))
         for j in range(B.nvars)]
        for i in range(B.nvars)
    ]
    assert prod == ident

    # diagonalize works on the normalized certificate; up to summand order
    # the transformed expansion is its expansion composed with the transform
    normalized = normalize_border(B).expand()
    transformed = D.decomposition.expand()
    assert transformed == normalized.substitute_linear(D.transform.rows)

    out = check_border(D.decomposition, D.limit)
    assert out.ok
    assert D.limit == f.substitute_linear(D.base_change)

    if is_local(B) is not None:
        assert is_local(D.decomposition) is not None
    return D
