import math
import random
from fractions import Fraction

import numpy as np
import pytest

from polyrec.intset import IntegerSet, generate_set
from polyrec.polyfam import (IntPolynomial, PolynomialFamily,
                             check_difference_identity, check_lift_implication,
                             coefficient_analysis, lift_construction,
                             shift_range)


def test_polynomial_parse_and_evaluate():
    p = IntPolynomial.parse("2,0,-1")
    assert p.degree == 3
    assert p.evaluate(3) == 2 * 3 - 27
    assert p(0) == 0  # zero constant term always
    assert str(p) == "2,0,-1"


def test_polynomial_rejects_zero_leading_coefficient():
    with pytest.raises(ValueError):
        IntPolynomial((1, 0))
    with pytest.raises(ValueError):
        IntPolynomial(())


def test_evaluate_is_exact_on_big_inputs():
    p = IntPolynomial((0, 0, 7))
    n = 10 ** 8
    assert p.evaluate(n) == 7 * n ** 3  # would overflow float64


def test_family_shape_helpers():
    fam = PolynomialFamily.parse(["1", "0,1", "1,1"])
    assert fam.size == 3
    assert fam.common_degree_bound == 2
    assert not fam.equal_degrees
    assert fam.coefficient_rows() == ((1, 0), (0, 1), (1, 1))


def test_shift_range_square_family():
    fam = PolynomialFamily.parse(["0,1"])
    sr = shift_range(fam, 10000, 0.04)
    assert sr.m == 20
    assert not sr.adjusted
    assert sr.max_abs_value == 400


def test_shift_range_shrinks_for_larger_coefficients():
    fam = PolynomialFamily.parse(["0,10"])
    sr = shift_range(fam, 10000, 0.04)
    assert sr.m == 6
    assert sr.adjusted
    assert sr.m_nominal == 20
    assert sr.max_abs_value == 360


def test_shift_range_scan_guarantee_holds_randomized():
    rng = random.Random(3)
    for _ in range(50):
        k = rng.randint(1, 3)
        coeffs = [rng.randint(-9, 9) for _ in range(k - 1)] + [rng.choice([-5, -1, 1, 5])]
        fam = PolynomialFamily((IntPolynomial(tuple(coeffs)),))
        n = rng.randint(500, 50000)
        eps = rng.choice([0.01, 0.05, 0.2])
        try:
            sr = shift_range(fam, n, eps)
        except ValueError:
            continue
        bound = Fraction(eps) * n
        assert all(abs(p.evaluate(x)) <= bound
                   for p in fam.members for x in range(1, sr.m + 1))
        # maximality: the next shift would break the bound (or the nominal cap)
        if sr.adjusted:
            assert any(abs(p.evaluate(sr.m + 1)) > bound for p in fam.members)


def test_shift_range_error_names_minimal_ambient():
    fam = PolynomialFamily.parse(["0,10"])
    with pytest.raises(ValueError) as err:
        shift_range(fam, 20, 0.01)
    assert "smallest admissible n is 1000" in str(err.value)


def test_difference_identity_small_cases():
    # j=2, d=3: both sides are 2! * 3^2 = 18; j=5, d=2: 5! * 2^5 = 3840.
    chk = check_difference_identity(2, 11, 3)
    assert chk.equal and chk.rhs == 18
    chk = check_difference_identity(5, -4, 2)
    assert chk.equal and chk.rhs == 3840


def test_difference_identity_randomized():
    rng = random.Random(17)
    for _ in range(60):
        j = rng.randint(0, 10)
        x = rng.randint(-10 ** 6, 10 ** 6)
        d = rng.randint(-10 ** 6, 10 ** 6)
        chk = check_difference_identity(j, x, d)
        assert chk.equal, (j, x, d, chk.lhs, chk.rhs)


def test_coefficient_analysis_dependent_family():
    fam = PolynomialFamily.parse(["1,1", "1,-1", "2"])
    cm = coefficient_analysis(fam)
    assert cm.rank == 2
    assert cm.independent_rows == (0, 1)
    assert cm.dependent_rows == (2,)
    assert cm.dependency == ((Fraction(1), Fraction(1)),)


def test_coefficient_analysis_full_rank():
    fam = PolynomialFamily.parse(["1", "0,1", "0,0,1"])
    cm = coefficient_analysis(fam)
    assert cm.rank == 3
    assert cm.dependent_rows == ()


def test_coefficient_analysis_rank_matches_float_rank():
    rng = random.Random(4)
    for _ in range(40):
        ell = rng.randint(1, 4)
        k = rng.randint(1, 4)
        rows = []
        for _ in range(ell):
            row = [rng.randint(-3, 3) for _ in range(k)]
            if not any(row):
                row[rng.randrange(k)] = 1
            # make it a legal polynomial: nonzero leading coefficient
            deg = max(i for i, c in enumerate(row) if c != 0)
            rows.append(IntPolynomial(tuple(row[:deg + 1])))
        fam = PolynomialFamily(tuple(rows))
        cm = coefficient_analysis(fam)
        want = np.linalg.matrix_rank(np.array(fam.coefficient_rows(), dtype=float))
        assert cm.rank == want
        # certificates reconstruct each dependent row exactly
        mat = fam.coefficient_rows()
        for drow, cert in zip(cm.dependent_rows, cm.dependency):
            rebuilt = [
                sum(c * mat[i][col] for c, i in zip(cert, cm.independent_rows))
                for col in range(len(mat[0]))
            ]
            assert tuple(rebuilt) == mat[drow]


def test_lift_full_set_is_maximal():
    a = IntegerSet(10, tuple(range(1, 11)))
    fam = PolynomialFamily.parse(["1"])
    lift = lift_construction(a, fam, 10)
    assert lift.required_multiple == 1
    assert lift.first_stage_count == 10
    assert len(lift.points) == 10
    assert lift.density == Fraction(10, 21)
    # every lifted point lands in A after the offset, by construction
    for (b,) in lift.points:
        assert b + lift.offset[0] in a


def test_lift_with_dependent_row():
    a = generate_set("random", 40, density=0.6, seed=5)
    fam = PolynomialFamily.parse(["1,1", "1,-1", "2"])
    lift = lift_construction(a, fam, 80)
    assert lift.required_multiple == 2
    assert len(lift.points) > 0
    rows = coefficient_analysis(fam).rows
    for b in lift.points:
        for row, off in zip(rows, lift.offset):
            val = sum(c * x for c, x in zip(row, b)) + off
            assert val in a
    report = check_lift_implication(lift, a, fam)
    assert report.ok
    assert report.violations == ()


def test_lift_implication_randomized():
    rng = random.Random(11)
    for trial in range(8):
        n = rng.randint(20, 60)
        a = generate_set("random", n, density=rng.uniform(0.4, 0.8), seed=trial)
        if a.size == 0:
            continue
        fam = PolynomialFamily.parse(["1", "0,1"])
        lift = lift_construction(a, fam, n)
        report = check_lift_implication(lift, a, fam)
        assert report.ok, f"implication failed at trial {trial}"


def test_lift_guards():
    a = IntegerSet(10, (1, 2))
    fam = PolynomialFamily.parse(["1"])
    with pytest.raises(ValueError):
        lift_construction(a, fam, 5)  # below ambient * multiple
    big = IntegerSet(1000, (1,))
    with pytest.raises(ValueError):
        lift_construction(big, fam, 1000)  # ambient beyond desk scale
