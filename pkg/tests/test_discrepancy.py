"""Exact discrepancy against brute-force oracles, point generation, and the
equidistribution reports."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primeud.discrepancy import (
    equidistribution_report,
    extreme_discrepancy,
    fractional_parts,
    joint_weyl_test,
    star_discrepancy,
    ud_along_ap,
)
from primeud.hardy import HardyExpr
from primeud.literals import parse_expr


def star_brute_force(points):
    """O(N^2) oracle: evaluate the empirical-CDF deviation at both limits of
    every jump; counts directly, no sorting."""
    pts = np.asarray(points, dtype=np.float64)
    N = len(pts)
    best = 0.0
    for b in pts:
        less = float(np.count_nonzero(pts < b))
        leq = float(np.count_nonzero(pts <= b))
        best = max(best, abs(less / N - b), abs(leq / N - b))
    return best


def extreme_brute_force(points):
    """Enumerate all interval limit types over candidate endpoints."""
    pts = np.asarray(points, dtype=np.float64)
    N = len(pts)
    cands = sorted(set([0.0, 1.0] + list(pts)))
    best = 0.0
    for a in cands:
        for b in cands:
            if b < a:
                continue
            for a_in in (True, False):
                for b_in in (True, False):
                    sel = ((pts > a) | (a_in & (pts == a))) & (
                        (pts < b) | (b_in & (pts == b))
                    )
                    cnt = float(np.count_nonzero(sel))
                    best = max(best, abs(cnt / N - (b - a)))
    return best


# -- star discrepancy --------------------------------------------------------------


def test_star_single_midpoint():
    assert star_discrepancy([0.5]) == pytest.approx(0.5)


def test_star_uniform_grid():
    for N in (1, 5, 100):
        grid = np.arange(N) / N
        assert star_discrepancy(grid) == pytest.approx(1.0 / N)


def test_star_lower_bound_invariant(rng):
    for _ in range(20):
        N = int(rng.integers(1, 300))
        pts = rng.random(N)
        assert star_discrepancy(pts) >= 1.0 / (2.0 * N) - 1e-15


def test_star_matches_brute_force_random(rng):
    for _ in range(20):
        N = int(rng.integers(1, 500))
        pts = rng.random(N)
        assert abs(star_discrepancy(pts) - star_brute_force(pts)) <= 1e-12


@settings(max_examples=150, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=0.9999999, allow_nan=False),
                min_size=1, max_size=60))
def test_star_matches_brute_force_property(pts):
    assert abs(star_discrepancy(pts) - star_brute_force(pts)) <= 1e-12


def test_star_validates_inputs():
    with pytest.raises(ValueError):
        star_discrepancy([])
    with pytest.raises(ValueError):
        star_discrepancy([0.2, 1.0])
    with pytest.raises(ValueError):
        star_discrepancy([-0.1])


# -- extreme discrepancy -------------------------------------------------------------


def test_extreme_single_point_is_one():
    # a vanishing interval around the point holds all the mass, so the
    # two-sided sup for one point is 1 (and the D <= 2 D* sandwich is tight)
    assert extreme_discrepancy([0.5]) == pytest.approx(1.0)


def test_extreme_uniform_grid():
    for N in (2, 10, 50):
        grid = np.arange(N) / N
        assert extreme_discrepancy(grid) <= 2.0 / N + 1e-12


def test_extreme_sandwich_random(rng):
    for _ in range(30):
        N = int(rng.integers(1, 120))
        pts = rng.random(N)
        d_star = star_discrepancy(pts)
        d = extreme_discrepancy(pts)
        assert d_star - 1e-12 <= d <= 2.0 * d_star + 1e-12


def test_extreme_matches_brute_force(rng):
    for _ in range(15):
        N = int(rng.integers(1, 40))
        pts = np.round(rng.random(N), 3)
        assert abs(extreme_discrepancy(pts) - extreme_brute_force(pts)) <= 1e-12


def test_extreme_cap():
    with pytest.raises(ValueError):
        extreme_discrepancy(np.random.default_rng(0).random(10_001))


# -- point generation -----------------------------------------------------------------


def test_fractional_parts_identity_integers():
    sample = fractional_parts(parse_expr("x"), 1, "integers", 50)
    assert np.all(sample.points == 0.0)
    assert sample.boundary_events == 50


def test_fractional_parts_half_primes(table100k):
    sample = fractional_parts(parse_expr("1/2*x"), 1, "primes", 100, table100k)
    # all odd primes land at 1/2; p = 2 lands at 0
    assert sample.points[0] == 0.0
    assert np.all(sample.points[1:] == 0.5)


def test_fractional_parts_decreasing_star(table2m):
    expr = parse_expr("x^(3/2)")
    stars = {}
    for N in (1_000, 100_000):
        pts = fractional_parts(expr, 1, "primes", N, table2m)
        stars[N] = star_discrepancy(pts.points)
    assert stars[100_000] < stars[1_000] / 2.0


def test_fractional_parts_needs_table():
    with pytest.raises(ValueError):
        fractional_parts(parse_expr("x"), 1, "primes", 10, None)


def test_fractional_parts_insufficient_table(table100k):
    with pytest.raises(ValueError):
        fractional_parts(parse_expr("x"), 1, "primes", 10_000, table100k)


# -- reports -----------------------------------------------------------------------------


def test_report_et_bound_dominates_star(table100k, rng):
    for literal in ("x^(1/2)", "x^(3/2)", "log"):
        rep = equidistribution_report(parse_expr(literal), 1, "primes", 2_000,
                                      table100k)
        assert rep.et_bound >= rep.star
        assert len(rep.weyl_moduli) == 10
        assert rep.N == 2_000


def test_report_carries_extreme_or_sandwich(table100k):
    rep = equidistribution_report(parse_expr("x^(1/2)"), 1, "primes", 500,
                                  table100k, with_extreme=True)
    assert rep.extreme is not None
    assert rep.star <= rep.extreme <= 2 * rep.star + 1e-12


def test_ud_along_ap_examples(table2m):
    rep3 = ud_along_ap(parse_expr("x^(1/2)"), 1, 4, 1, 1_000, table2m)
    rep4 = ud_along_ap(parse_expr("x^(1/2)"), 1, 4, 1, 10_000, table2m)
    assert rep4.star < rep3.star


def test_ud_along_ap_zero_expr(table100k):
    rep = ud_along_ap(HardyExpr.zero(), 1, 4, 1, 100, table100k)
    assert rep.star == pytest.approx(1.0)


def test_ud_along_ap_trivial_modulus_matches_primes(table100k):
    rep_ap = ud_along_ap(parse_expr("x^(1/2)"), 1, 1, 1, 2_000, table100k)
    rep = equidistribution_report(parse_expr("x^(1/2)"), 1, "primes", 2_000,
                                  table100k)
    assert rep_ap.star == rep.star


def test_ud_along_ap_gcd_validation(table100k):
    with pytest.raises(ValueError):
        ud_along_ap(parse_expr("x^(1/2)"), 1, 4, 2, 100, table100k)


# -- joint frequency tests -----------------------------------------------------------------


def test_joint_weyl_detects_dependence(table100k):
    res = joint_weyl_test(
        family=[parse_expr("x^(1/2)"), parse_expr("2*x^(1/2)")],
        poly_part=[],
        lattice_vectors=[(2, -1)],
        N=2_000,
        domain="primes",
        table=table100k,
    )
    assert res.max_modulus == pytest.approx(1.0)


def test_joint_weyl_independent_family(table2m):
    res = joint_weyl_test(
        family=[parse_expr("x^(1/2)")],
        poly_part=[parse_expr("sqrt(2)*x")],
        lattice_vectors=[(1, 0), (0, 1), (1, 1)],
        N=100_000,
        domain="primes",
        table=table2m,
    )
    assert res.max_modulus < 0.05
    assert len(res.per_vector) == 3


def test_joint_weyl_rejects_zero_vector(table100k):
    with pytest.raises(ValueError):
        joint_weyl_test([parse_expr("x^(1/2)")], [], [(0,)], 100,
                        "primes", table100k)
