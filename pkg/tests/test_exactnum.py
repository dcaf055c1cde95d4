from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from toricstab.exactnum import (AlgebraicNumber, alg_compare, count_roots, factor_rational,
                                isolate_real_roots, peval, pmul)
from toricstab.latlin import charpoly

import oracles


def sqrt(n):
    return isolate_real_roots([-n, 0, 1])[1]


def test_isolate_x2_minus_2():
    lo, hi = isolate_real_roots([-2, 0, 1])
    assert lo.min_poly == (-2, 0, 1) and hi.min_poly == (-2, 0, 1)
    a, b = lo.isolating_interval
    assert -2 <= a < b <= -1
    a, b = hi.isolating_interval
    assert 1 <= a < b <= 2


def test_isolate_mixed_no_charpoly():
    roots = isolate_real_roots([-11, -1, 1])
    assert [round(float(r), 3) for r in roots] == [-2.854, 3.854]
    three_root5 = 3 * sqrt(5)
    assert alg_compare(roots[1], (1 + three_root5) / 2) == 0
    assert alg_compare(roots[0], (1 - three_root5) / 2) == 0


def test_isolate_neg_trace_charpoly():
    cp = charpoly([[3, 1, 0], [1, -2, 1], [0, 1, -2]])
    roots = isolate_real_roots(cp)
    assert [round(float(r), 4) for r in roots] == [-3.0855, -1.1142, 3.1997]


def test_roots_sorted_and_disjoint():
    roots = isolate_real_roots(pmul([-2, 0, 1], [-3, 0, 1]))
    assert [round(float(r), 6) for r in roots] == [-1.732051, -1.414214, 1.414214, 1.732051]
    boxes = [r.isolating_interval for r in roots]
    assert all(boxes[i][1] < boxes[i + 1][0] for i in range(len(boxes) - 1))


def test_repeated_root_isolated_once():
    roots = isolate_real_roots(pmul([-1, 1], pmul([-1, 1], [2, 1])))
    assert [r.as_fraction() for r in roots] == [-2, 1]


def test_compare_sqrt2_three_halves():
    assert alg_compare(sqrt(2), Fraction(3, 2)) == -1


def test_compare_abs_mu2_with_one():
    mu2 = (1 - 3 * sqrt(5)) / 2
    assert alg_compare(abs(mu2), 1) == 1


def test_compare_conjugates():
    r = 3 * sqrt(5)
    assert alg_compare((1 + r) / 2, (1 - r) / 2) == 1


def test_equal_expressions_compare_equal():
    assert alg_compare(sqrt(2) * sqrt(2), 2) == 0
    assert alg_compare(sqrt(8), 2 * sqrt(2)) == 0


def test_division_by_zero_expression():
    with pytest.raises(ZeroDivisionError):
        sqrt(2) / (sqrt(2) - sqrt(2))


def test_degree_five_factoring_path():
    p = pmul([-2, 0, 1], [-1, 0, 0, 1])       # (x^2-2)(x^3-1) has a rational root
    q = [-2, 0, 0, 0, 0, 1]                     # x^5 - 2, irreducible
    assert sorted(f for f, _ in factor_rational(q)) == [[-2, 0, 0, 0, 0, 1]]
    assert len(isolate_real_roots(p)) == 3
    (r,) = isolate_real_roots(q)
    assert abs(float(r) - 2 ** 0.2) < 1e-12


polys = st.lists(st.integers(-9, 9), min_size=2, max_size=7).filter(lambda c: c[-1] != 0)


@given(polys)
def test_root_count_matches_sturm_oracle(coeffs):
    assert len(isolate_real_roots(coeffs)) == oracles.sturm_count(coeffs)


@given(polys)
def test_isolated_roots_are_roots(coeffs):
    for r in isolate_real_roots(coeffs):
        lo, hi = r.isolating_interval
        if lo == hi:
            assert peval(coeffs, lo) == 0
        else:
            assert count_roots(list(r.min_poly), lo, hi) == 1


small_alg = st.builds(lambda n, a, b: a + b * sqrt(n), st.sampled_from([2, 3, 5, 7]),
                      st.integers(-4, 4), st.integers(-3, 3))


@given(small_alg, small_alg)
def test_compare_antisymmetric(x, y):
    assert alg_compare(x, y) == -alg_compare(y, x)


@given(small_alg, small_alg, small_alg)
def test_compare_transitive(x, y, z):
    if alg_compare(x, y) <= 0 and alg_compare(y, z) <= 0:
        assert alg_compare(x, z) <= 0


@given(small_alg, small_alg)
def test_refinement_keeps_comparison(x, y):
    before = alg_compare(x, y)
    x2 = x.refined().refined() if isinstance(x, AlgebraicNumber) else x
    assert alg_compare(x2, y) == before


@given(small_alg, small_alg)
def test_compare_agrees_with_floats_when_separated(x, y):
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9:
        assert alg_compare(x, y) == (1 if fx > fy else -1)
