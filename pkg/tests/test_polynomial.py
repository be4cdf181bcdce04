"""Exact polynomial arithmetic and root isolation.

Root-location oracles are constructed: polynomials built from known
rational roots via from_roots, so every count and every isolation box has
a ground truth to compare against.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from optima.polynomial import (
    Polynomial1D,
    cauchy_root_bound,
    count_roots_interval,
    count_roots_ray,
    count_roots_total,
    from_roots,
    isolate_roots_interval,
    nonneg_on_interval,
    nonneg_on_ray,
    nonpos_on_ray,
    poly_gcd,
    squarefree_decomposition,
    sturm_chain,
)


def poly(*ints):
    return Polynomial1D(tuple(Fraction(c) for c in ints))


def test_count_roots_constructed():
    # (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
    p = poly(6, -7, 0, 1)
    assert count_roots_total(p) == 3
    assert count_roots_interval(p, Fraction(0), Fraction(5, 2)) == 2
    assert count_roots_ray(p, Fraction(0)) == 2


def test_count_roots_interval_is_half_open():
    p = from_roots([Fraction(1), Fraction(3)])
    # (a, b] convention: root at b counts, root at a must be excluded by the caller
    assert count_roots_interval(p, Fraction(0), Fraction(3)) == 2
    assert count_roots_interval(p, Fraction(1, 2), Fraction(1)) == 1
    with pytest.raises(ValueError):
        count_roots_interval(p, Fraction(1), Fraction(3))


def test_from_roots_and_isolation():
    roots = [Fraction(-2), Fraction(1, 3), Fraction(5)]
    p = from_roots(roots)
    boxes = isolate_roots_interval(p, Fraction(-10), Fraction(10))
    assert len(boxes) == 3
    for (lo, hi), r in zip(sorted(boxes), roots):
        assert lo < r <= hi


def test_squarefree_decomposition_multiplicities():
    # (x - 2)^2 (x + 1): q1 = x + 1, q2 = x - 2
    p = from_roots([Fraction(2), Fraction(2), Fraction(-1)])
    parts = squarefree_decomposition(p)
    assert [q.degree for q in parts] == [1, 1]
    assert parts[0](Fraction(-1)) == 0
    assert parts[1](Fraction(2)) == 0


def test_sign_conditions_on_ray():
    # -(x - 1)^2 (x + 1) <= 0 for x >= -1 but is not nonnegative there
    p = from_roots([Fraction(1), Fraction(1), Fraction(-1)])
    neg = -p
    assert nonpos_on_ray(neg, Fraction(-1))
    assert not nonneg_on_ray(neg, Fraction(-1))
    # x^2 + 1 > 0 everywhere
    assert nonneg_on_ray(poly(1, 0, 1), Fraction(-100))
    # odd leading term eventually dominates
    assert not nonneg_on_ray(poly(10, 0, 0, -1), Fraction(0))


def test_nonneg_on_interval_with_touching_root():
    # (x - 1/2)^2 >= 0 on [0, 1] with equality allowed at the touch
    p = from_roots([Fraction(1, 2), Fraction(1, 2)])
    assert nonneg_on_interval(p, Fraction(0), Fraction(1))
    assert not nonneg_on_interval(-p, Fraction(0), Fraction(1))


def test_cauchy_bound_contains_roots():
    p = poly(6, -7, 0, 1)
    assert cauchy_root_bound(p) >= 3


def test_sturm_chain_degrees_strictly_decrease():
    chain = sturm_chain(poly(-1, 0, 0, 0, 1))  # x^4 - 1
    degs = [len(cs) - 1 for cs in chain]
    assert degs[0] == 4
    assert all(a > b for a, b in zip(degs, degs[1:]))


def test_poly_gcd_of_shared_factor():
    a = from_roots([Fraction(1), Fraction(4)])
    b = from_roots([Fraction(1), Fraction(-7)])
    g = poly_gcd(a, b)
    assert g.degree == 1
    assert g(Fraction(1)) == 0


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(min_value=-6, max_value=6), min_size=1, max_size=5))
def test_sturm_count_matches_construction(roots):
    p = from_roots([Fraction(r) for r in sorted(roots)])
    assert count_roots_total(p) == len(roots)
    lo = Fraction(-13, 2)  # half-integer endpoint can never coincide with an integer root
    inside = sum(1 for r in roots if lo < r <= 3)
    assert count_roots_interval(p, lo, Fraction(3)) == inside


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=-9, max_value=9), min_size=3, max_size=6))
def test_root_isolation_boxes_disjoint(coeffs):
    if all(c == 0 for c in coeffs[1:]):
        coeffs = coeffs + [1]
    p = Polynomial1D(tuple(Fraction(c) for c in coeffs))
    if p.degree < 1 or p(Fraction(-20)) == 0:
        return
    boxes = isolate_roots_interval(p, Fraction(-20), Fraction(20))
    for (a1, b1), (a2, b2) in zip(sorted(boxes), sorted(boxes)[1:]):
        assert b1 <= a2
    for lo, hi in boxes:
        assert count_roots_interval(p, lo, hi) == 1
