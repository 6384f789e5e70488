"""Finite recurrence models: floor sequences, mean averages, exact overlap
volumes, difference-set scans, filters, and spectral probes."""

from fractions import Fraction

import mpmath
import numpy as np
import pytest

from primeud.corpus import (
    GOLDEN_FRAC,
    lattice_corpus,
    spectral_corpus,
    spectral_generators,
    torus_corpus,
    unitary_corpus,
)
from primeud.ergodic import (
    Box,
    DiagonalUnitarySystem,
    LatticeSet,
    SequenceSpec,
    SpectralMeasure,
    TorusSystem,
    ergodic_average,
    fcplus_probe,
    filtered_recurrence,
    index_vectors,
    lattice_recurrence_scan,
    prime_index_sequence,
    residue_indicator_check,
    torus_recurrence_average,
)
from primeud.literals import parse_expr

mpmath.mp.dps = 50


# -- index sequences -------------------------------------------------------------


def test_identity_sequence(table100k):
    d, _ = prime_index_sequence([parse_expr("x")], 5, table100k)
    assert list(d.ravel()) == [2, 3, 5, 7, 11]


def test_sqrt_floor_first_prime(table100k):
    d, _ = prime_index_sequence([parse_expr("x^(1/2)")], 1, table100k)
    assert d[0, 0] == 1  # floor(sqrt 2)


def test_floors_match_bigfloat_oracle(table2m):
    # oracle applies the same near-integer tie-break at 50 digits; every one
    # of the first 10^4 values must agree exactly
    n = 10_000
    d, _ = prime_index_sequence([parse_expr("x^(3/2)")], n, table2m)
    ps = table2m.first(n)
    for i in range(n):
        p = int(ps[i])
        v = mpmath.power(p, mpmath.mpf(3) / 2)
        near = mpmath.nint(v)
        fl = int(near) if abs(v - near) < mpmath.mpf("1e-9") else int(mpmath.floor(v))
        assert int(d[i, 0]) == fl, p


def test_polynomial_coordinates_with_shift(table100k):
    spec = SequenceSpec(poly_degree=2, shift=+1)
    d, _ = index_vectors(spec, 3, table100k)
    assert list(d[0]) == [3, 9]    # p = 2
    assert list(d[1]) == [4, 16]   # p = 3
    assert list(d[2]) == [6, 36]   # p = 5


def test_linear_map_composition(table100k):
    spec = SequenceSpec(exprs=(parse_expr("x"),), poly_degree=1, shift=-1,
                        L=((1, 1), (1, -1)))
    d, _ = index_vectors(spec, 2, table100k)
    # coordinates are (p-1, [p]); L maps to (sum, difference)
    assert list(d[0]) == [3, -1]
    assert list(d[1]) == [5, -1]


def test_spec_validation():
    with pytest.raises(ValueError):
        SequenceSpec(poly_degree=1, shift=2)
    with pytest.raises(ValueError):
        SequenceSpec()


def test_spec_wrong_L_width_raises(table100k):
    spec = SequenceSpec(exprs=(parse_expr("x"),), L=((1, 1),))
    with pytest.raises(ValueError):
        index_vectors(spec, 3, table100k)


def test_overflow_guard(table2m):
    spec = SequenceSpec(poly_degree=4, shift=0)
    with pytest.raises(OverflowError):
        index_vectors(spec, 100_000, table2m)


# -- diagonal unitary averages ------------------------------------------------------


def test_all_invariant_system_exact(table100k):
    sysm = DiagonalUnitarySystem(frequencies=np.zeros((3, 2)),
                                 f=np.array([1 + 0j, 0.5j, -0.25 + 0.1j]))
    res = ergodic_average(sysm, (parse_expr("x^(1/2)"), parse_expr("x^(1/3)")),
                          1_000, table100k)
    assert res.deviation == 0.0
    assert np.array_equal(res.average, sysm.f)


def test_golden_average_decreases(table2m):
    sysm = DiagonalUnitarySystem(frequencies=np.array([[GOLDEN_FRAC]]),
                                 f=np.array([1 + 0j]))
    r3 = ergodic_average(sysm, (parse_expr("x^(1/2)"),), 1_000, table2m)
    r5 = ergodic_average(sysm, (parse_expr("x^(1/2)"),), 100_000, table2m)
    assert abs(r5.average[0]) < abs(r3.average[0])
    assert r5.deviation < 0.05


def test_mixed_system_projection_fixed(table2m):
    sysm = DiagonalUnitarySystem(frequencies=np.array([[0.0], [GOLDEN_FRAC]]),
                                 f=np.array([1 + 0j, 1 + 0j]))
    res = ergodic_average(sysm, (parse_expr("x^(3/2)"),), 50_000, table2m)
    assert res.average[0] == 1 + 0j
    assert res.projection[1] == 0j
    assert abs(res.average[1]) < 0.05


def test_unitary_corpus_deviation_trend(table2m):
    for name, sysm, exprs in unitary_corpus():
        devs = [ergodic_average(sysm, exprs, N, table2m).deviation
                for N in (1_000, 10_000, 100_000)]
        # non-increasing up to 10% slack, and small at the end
        assert devs[1] <= devs[0] * 1.1, name
        assert devs[2] <= devs[1] * 1.1, name
        assert devs[2] < 0.05, name


def test_ergodic_average_validates(table100k):
    sysm = DiagonalUnitarySystem(frequencies=np.zeros((1, 2)),
                                 f=np.array([1 + 0j]))
    with pytest.raises(ValueError):
        ergodic_average(sysm, (parse_expr("x"),), 100, table100k)


def test_frequency_validation():
    with pytest.raises(ValueError):
        DiagonalUnitarySystem(frequencies=np.array([[1.5]]), f=np.array([1 + 0j]))
    with pytest.raises(ValueError):
        DiagonalUnitarySystem(frequencies=np.zeros((2, 1)), f=np.array([1 + 0j]))


# -- torus recurrence -----------------------------------------------------------------


def test_zero_rotation_gives_full_measure(table100k):
    sysm = TorusSystem(alphas=np.array([[0.0]]),
                       boxes=(Box((0,), (Fraction(1, 2),)),))
    spec = SequenceSpec(exprs=(parse_expr("x^(3/2)"),))
    res = torus_recurrence_average(sysm, spec, 200, table100k)
    assert res.average == pytest.approx(0.5)
    assert res.margin == pytest.approx(0.25)


def test_full_torus_margin_zero(table100k):
    sysm = TorusSystem(alphas=np.array([[GOLDEN_FRAC]]),
                       boxes=(Box((0,), (Fraction(1),)),))
    spec = SequenceSpec(exprs=(parse_expr("x^(3/2)"),))
    res = torus_recurrence_average(sysm, spec, 200, table100k)
    assert res.average == pytest.approx(1.0)
    assert res.margin == pytest.approx(0.0)


def test_interval_recurrence_finite_slack(table100k):
    sysm = TorusSystem(alphas=np.array([[GOLDEN_FRAC]]),
                       boxes=(Box((0,), (Fraction(1, 2),)),))
    spec = SequenceSpec(exprs=(parse_expr("x^(3/2)"),))
    res = torus_recurrence_average(sysm, spec, 9_000, table100k)
    assert res.margin >= -0.01


def test_torus_corpus_margins_at_1e4(table2m):
    for name, sysm, spec in torus_corpus():
        res = torus_recurrence_average(sysm, spec, 10_000, table2m)
        assert res.margin >= -0.02, name


def test_exact_measure_and_disjointness():
    boxes = (Box((0,), (Fraction(1, 3),)), Box((Fraction(1, 2),), (Fraction(3, 4),)))
    sysm = TorusSystem(alphas=np.array([[0.1]]), boxes=boxes)
    assert sysm.mu_A == Fraction(7, 12)
    with pytest.raises(ValueError):
        TorusSystem(alphas=np.array([[0.1]]),
                    boxes=(Box((0,), (Fraction(1, 2),)),
                           Box((Fraction(1, 4),), (Fraction(3, 4),))))


def test_wraparound_overlap_volume(table100k):
    # one box, rotation shifting across the 0/1 seam: overlap must match the
    # circle-arc formula length max(0, 1/2 - s) + wrap part
    sysm = TorusSystem(alphas=np.array([[0.75]]),
                       boxes=(Box((0,), (Fraction(1, 2),)),))
    spec = SequenceSpec(exprs=(parse_expr("x"),))  # psi = p
    res = torus_recurrence_average(sysm, spec, 1, table100k)
    # p = 2: shift = 1.5 mod 1 = 0.5 -> A and A - 0.5 are disjoint half-circles
    assert res.average == pytest.approx(0.0)


def test_dimension_mismatch_rejected(table100k):
    sysm = TorusSystem(alphas=np.array([[0.1]]),
                       boxes=(Box((0,), (Fraction(1, 2),)),))
    spec = SequenceSpec(exprs=(parse_expr("x"), parse_expr("x^(1/2)")))
    with pytest.raises(ValueError):
        torus_recurrence_average(sysm, spec, 10, table100k)


# -- lattice scans -------------------------------------------------------------------


def test_everything_set_hits_always(table100k):
    E = LatticeSet(period=(1,), mask=np.array([True]))
    spec = SequenceSpec(exprs=(parse_expr("x^(3/2)"),))
    res = lattice_recurrence_scan(E, spec, 500, table100k)
    assert res.hit_density == 1.0


def test_multiples_of_five(table2m):
    E = LatticeSet(period=(5,), mask=np.array([True] + [False] * 4))
    spec = SequenceSpec(exprs=(parse_expr("x^(3/2)"),))
    res = lattice_recurrence_scan(E, spec, 10_000, table2m)
    assert abs(res.hit_density - 0.2) < 0.02
    assert res.hit_density >= res.dstar_sq - 0.02


def test_parity_shift_hits(table100k):
    # d_n = p_n + 1 is even for every odd prime
    E = LatticeSet(period=(2,), mask=np.array([True, False]))
    spec = SequenceSpec(poly_degree=1, shift=+1)
    res = lattice_recurrence_scan(E, spec, 1_000, table100k)
    assert res.hit_density >= 0.999


def test_difference_mask_block():
    E = LatticeSet(period=(4,), mask=np.array([True, True, False, False]))
    diff = E.difference_mask()
    # differences of {0, 1} mod 4 are {0, 1, 3}
    assert list(diff) == [True, True, False, True]


def test_lattice_corpus_margins(table2m):
    for name, E, spec in lattice_corpus():
        res = lattice_recurrence_scan(E, spec, 10_000, table2m)
        assert res.hit_density >= res.dstar_sq - 0.02, name


# -- filtered recurrence -----------------------------------------------------------------


def test_filter_r1_is_identity(table100k):
    E = LatticeSet(period=(5,), mask=np.array([True] + [False] * 4))
    spec = SequenceSpec(exprs=(parse_expr("x^(3/2)"),))
    plain = lattice_recurrence_scan(E, spec, 5_000, table100k)
    filt = filtered_recurrence(E, 1, spec, 5_000, table100k)
    assert filt.relative_density == 1.0
    assert filt.average == pytest.approx(plain.hit_density)


def test_filter_parity_keeps_odd_primes(table100k):
    spec = SequenceSpec(poly_degree=1, shift=+1)
    E = LatticeSet(period=(2,), mask=np.array([True, False]))
    res = filtered_recurrence(E, 2, spec, 1_000, table100k)
    assert res.relative_density >= 0.999


def test_filter_r6_product_prediction(table2m):
    # coordinates ((p+1), [sqrt p]): 6 | p+1 has density 1/phi(6) = 1/2 and
    # 6 | [sqrt p] has limiting density 1/6, independently
    spec = SequenceSpec(poly_degree=1, shift=+1, exprs=(parse_expr("x^(1/2)"),))
    E = LatticeSet(period=(2, 2), mask=np.eye(2, dtype=bool))
    res = filtered_recurrence(E, 6, spec, 10_000, table2m)
    predicted = (1.0 / 2.0) * (1.0 / 6.0)
    assert abs(res.relative_density - predicted) < 0.02
    assert res.valid


def test_filter_empty_flagged(table100k):
    # d_n = p_n is never divisible by 4 beyond p = 2
    spec = SequenceSpec(exprs=(parse_expr("x"),))
    E = LatticeSet(period=(2,), mask=np.array([True, False]))
    res = filtered_recurrence(E, 10**6, spec, 100, table100k)
    assert not res.valid
    assert res.average is None and res.margin is None


def test_filtered_torus_stays_near_reference(table2m):
    sysm = TorusSystem(alphas=np.array([[GOLDEN_FRAC]]),
                       boxes=(Box((0,), (Fraction(1, 2),)),))
    spec = SequenceSpec(exprs=(parse_expr("x^(3/2)"),))
    for r in (2, 3, 6):
        res = filtered_recurrence(sysm, r, spec, 10_000, table2m)
        assert res.valid
        assert res.average >= res.reference_sq - 0.02, r


# -- spectral probes ------------------------------------------------------------------------


def test_point_mass_probe(table100k):
    sigma = SpectralMeasure(k=1, atoms=(((Fraction(0),), 1.0),))
    spec = SequenceSpec(poly_degree=1, shift=+1)
    res = fcplus_probe(sigma, spec, 2_000, table100k)
    assert res.mass_at_zero == 1.0
    assert res.final_tail_max == pytest.approx(1.0)


def test_lebesgue_probe(table100k):
    sigma = SpectralMeasure(k=1, ac_table=(((0,), 1.0 + 0j),))
    spec = SequenceSpec(poly_degree=1, shift=+1)
    res = fcplus_probe(sigma, spec, 2_000, table100k)
    assert res.mass_at_zero == 0.0
    assert res.final_tail_max == pytest.approx(0.0)


def test_mixed_atom_probe(table100k):
    sigma = SpectralMeasure(k=1, atoms=(((Fraction(0),), 0.5),
                                        ((Fraction(1, 3),), 0.5)))
    spec = SequenceSpec(poly_degree=1, shift=+1)
    res = fcplus_probe(sigma, spec, 9_000, table100k)
    assert res.final_tail_max >= 0.5
    assert res.mass_at_zero <= res.final_tail_max + 0.01


def test_spectral_corpus_tail_dominates_mass(table2m):
    for mname, sigma in spectral_corpus():
        for gname, spec in spectral_generators(sigma.k):
            res = fcplus_probe(sigma, spec, 10_000, table2m)
            assert res.mass_at_zero <= res.final_tail_max + 0.01, (mname, gname)


def test_measure_validation():
    with pytest.raises(ValueError):
        SpectralMeasure(k=1)
    with pytest.raises(ValueError):
        SpectralMeasure(k=1, atoms=(((Fraction(0),), -1.0),))
    with pytest.raises(ValueError):
        SpectralMeasure(k=2, atoms=(((Fraction(0),), 1.0),))


# -- residue indicator -----------------------------------------------------------------------


def test_residue_indicator_trivial_modulus():
    res = residue_indicator_check(1, 1, 42)
    assert res.direct == 1 and res.agrees


def test_residue_indicator_example():
    res = residue_indicator_check(5, 2, 7)
    assert res.direct == 1
    assert res.agrees


def test_residue_indicator_random(rng):
    for _ in range(1_000):
        q = int(rng.integers(1, 101))
        b = int(rng.integers(1, q + 1))
        n = int(rng.integers(1, 10**9))
        res = residue_indicator_check(q, b, n)
        assert res.agrees


def test_residue_indicator_validates():
    with pytest.raises(ValueError):
        residue_indicator_check(5, 6, 7)
