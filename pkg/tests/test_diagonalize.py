"""Staircase diagonalization over the valuation ring and derivative certificates."""

import pytest

from waring import (
    BorderDecomposition,
    EpsScalar,
    InvariantError,
    LinearForm,
    NoPivotError,
    ZeroDerivativeError,
    check_border,
    derivative_decomposition,
    diagonalize,
    dvr_reduce_step,
    falling_factorial,
    substitute_perturbation,
    verify_border,
)
from waring.diagonal import Pivot
from waring.oracle import gen_multibase, gen_random, gen_tangent
from conftest import F, assert_staircase_invariants, eps, esc, lf, mono


def test_reduce_step_picks_minimal_valuation_first():
    cands = [lf(EpsScalar.one(), eps(1)), lf(EpsScalar.one(), EpsScalar.zero())]
    idx, val, red = dvr_reduce_step(cands, [])
    assert (idx, val) == (0, 0)
    assert red.coefs == cands[0].coefs


def test_reduce_step_cancels_against_a_pivot():
    first = lf(EpsScalar.one(), eps(1))
    p1 = Pivot(0, 0, tuple(first.coefs), (F(1), F(0)))
    idx, val, red = dvr_reduce_step([lf(EpsScalar.one(), EpsScalar.zero())], [p1])
    assert (idx, val) == (0, 1)
    assert red.coefs == (EpsScalar.zero(), -eps(1))


def test_reduce_step_exhausted():
    first = lf(EpsScalar.one(), eps(1))
    p1 = Pivot(0, 0, tuple(first.coefs), (F(1), F(0)))
    p2 = Pivot(1, 1, (EpsScalar.zero(), -eps(1)), (F(0), F(-1)))
    with pytest.raises(NoPivotError):
        dvr_reduce_step([lf(EpsScalar.one(), EpsScalar.zero())], [p1, p2])


def test_diagonalize_tangent_staircase():
    f, B = gen_tangent(3)
    D = assert_staircase_invariants(f, B)
    assert D.pivots == ((0, 0), (1, 1))
    assert D.p == 2
    assert sorted(D.perm) == [0, 1]


def test_diagonalize_multibase_keeps_two_bases():
    f, B = gen_multibase(5)
    D = assert_staircase_invariants(f, B)
    assert D.p == 4
    assert [q for _, q in D.pivots] == [0, 0, 1, 1]


def test_diagonalize_rejects_empty_or_mismatched():
    f, B = gen_tangent(3)
    with pytest.raises(ValueError):
        diagonalize(BorderDecomposition(2, 3, ()), f)
    with pytest.raises(ValueError):
        diagonalize(B, mono(3, (2, 1, 0)))


def test_diagonalize_cancelling_pair_still_finds_a_pivot():
    # two copies of the same form cancel in the expansion, but the first one
    # is a perfectly good pivot; against the zero target this verifies as exact
    from waring import HomoPoly

    B = BorderDecomposition(
        2, 2, ((F(1), LinearForm.variable(2, 0)), (F(-1), LinearForm.variable(2, 0))),
    )
    D = diagonalize(B, HomoPoly.zero(2, 2))
    assert D.p == 1
    assert D.limit.is_zero


def test_diagonalize_random_corpus_invariants():
    shapes = [(2, 3, 3), (3, 3, 4), (2, 4, 2), (3, 4, 5), (4, 3, 4)]
    count = 0
    for nvars, degree, rank in shapes:
        for seed in range(6):
            f, B = gen_random(nvars, degree, rank, seed=seed)
            assert_staircase_invariants(f, B)
            count += 1
    assert count == 30


def test_substitute_perturbation_keeps_the_limit():
    f, B = gen_tangent(3)
    D = diagonalize(B, f)
    tail = lf(EpsScalar.zero(), eps(2))
    D2 = substitute_perturbation(D, 0, tail)
    assert D2.limit == D.limit
    assert check_border(D2.decomposition, D2.limit).ok
    assert D2.pivots == D.pivots
    # the composed transform is the original times the elementary move
    assert D2.transform.rows[0][1] == D.transform.rows[0][1] - eps(2) * D.transform.rows[1][1]


def test_substitute_perturbation_rejects_unit_tails():
    f, B = gen_tangent(3)
    D = diagonalize(B, f)
    with pytest.raises(ValueError):
        substitute_perturbation(D, 0, lf(EpsScalar.zero(), EpsScalar.one()))
    with pytest.raises(ValueError):
        substitute_perturbation(D, 7, lf(EpsScalar.zero(), eps(2)))


def test_derivative_of_pure_power():
    B = BorderDecomposition(1, 4, ((F(1), LinearForm.variable(1, 0)),))
    f = mono(1, (4,))
    D = diagonalize(B, f)
    out = derivative_decomposition(D, 0, 1)
    assert out.rank() == 1
    w, form = out.summands[0]
    assert w == EpsScalar.from_rational(4)
    assert out.degree == 3
    assert check_border(out, mono(1, (3,), 4)).ok


def test_derivative_tangent_single_summand():
    # d/dy of x^2 y keeps only the summand whose form involves y
    f, B = gen_tangent(3)
    D = diagonalize(B, f)
    out = derivative_decomposition(D, 1, 1)
    assert out.rank() <= D.decomposition.rank() - 1
    target = D.limit.differentiate(1)
    assert check_border(out, target).ok
    # the weights carry the falling factorial (d)_order
    assert falling_factorial(3, 1) == 3


def test_derivative_zero_raises_typed_error():
    f, B = gen_tangent(3)
    D = diagonalize(B, f)
    with pytest.raises(ZeroDerivativeError):
        derivative_decomposition(D, 1, 2)  # y^2-derivative of x^2 y


def test_derivative_absent_variable_is_a_zero_derivative():
    f, B = gen_tangent(3)
    f3 = f.extend_vars(3)
    B3 = B.extend_vars(3)
    D = diagonalize(B3, f3)
    assert D.p == 2
    with pytest.raises(ZeroDerivativeError):
        derivative_decomposition(D, 2, 1)


def test_derivative_argument_validation():
    f, B = gen_tangent(3)
    D = diagonalize(B, f)
    with pytest.raises(ValueError):
        derivative_decomposition(D, 0, 0)
    with pytest.raises(ValueError):
        derivative_decomposition(D, 0, 3)
    with pytest.raises(ValueError):
        derivative_decomposition(D, -1, 1)


def test_derivative_counts_and_targets_on_random_corpus():
    checked = 0
    for nvars, degree, rank in [(2, 3, 3), (3, 4, 4), (3, 3, 5)]:
        for seed in range(5):
            f, B = gen_random(nvars, degree, rank, seed=seed)
            D = diagonalize(B, f)
            r = D.decomposition.rank()
            d = D.decomposition.degree
            for var in range(D.p):
                for order in range(1, min(3, d)):
                    try:
                        out = derivative_decomposition(D, var, order)
                    except ZeroDerivativeError:
                        continue
                    assert out.rank() <= r - var
                    target = D.limit.differentiate(var, order)
                    assert check_border(out, target).ok
                    checked += 1
    assert checked > 20
