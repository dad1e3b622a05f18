import random
from fractions import Fraction
from itertools import combinations
from math import gcd

import pytest

from nilbott.exact import (
    GaussRat,
    IntMatrix,
    det,
    rank,
    smith_normal_form,
    solve_fixed_lattice,
    solve_rational,
    xgcd,
)


def snf_checked(m):
    d, u, v = smith_normal_form(m)
    assert u * m * v == IntMatrix.diagonal(d, rows=m.rows, cols=m.cols)
    assert abs(det(u)) == 1
    assert abs(det(v)) == 1
    for i in range(len(d) - 1):
        if d[i] == 0:
            assert d[i + 1] == 0
        else:
            assert d[i + 1] % d[i] == 0
    assert all(x >= 0 for x in d)
    return d


def test_snf_column_two():
    # coker of the transpose map on Z is the order-2 group
    assert snf_checked(IntMatrix([[2], [0]])) == [2]


def test_snf_identity():
    assert snf_checked(IntMatrix.identity(3)) == [1, 1, 1]


def test_snf_2468():
    # gcd of entries 2, |det| = 8, so the second factor is 4
    assert snf_checked(IntMatrix([[2, 4], [6, 8]])) == [2, 4]


def determinantal_divisors(m):
    """Independent oracle: d_1 ... d_i = gcd of all i x i minors."""
    out = []
    r = min(m.rows, m.cols)
    for size in range(1, r + 1):
        g = 0
        for rows in combinations(range(m.rows), size):
            for cols in combinations(range(m.cols), size):
                sub = IntMatrix(
                    [[m.entries[i][j] for j in cols] for i in rows]
                )
                g = gcd(g, det(sub))
        out.append(abs(g))
    return out


def test_snf_random_against_minor_gcds():
    rng = random.Random(20240517)
    for _ in range(500):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = IntMatrix(
            [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]
        )
        d = snf_checked(m)
        divisors = determinantal_divisors(m)
        prod = 1
        for i, di in enumerate(d):
            prod *= di
            assert prod == divisors[i]


def test_coker_rank_matches_rational_rank():
    rng = random.Random(99)
    for _ in range(200):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = IntMatrix(
            [[rng.randint(-5, 5) for _ in range(cols)] for _ in range(rows)]
        )
        d = snf_checked(m)
        assert sum(1 for x in d if x) == rank(m)


def test_fixed_lattice_examples():
    assert solve_fixed_lattice([IntMatrix.diagonal([1, -1, 1])]) == 2
    assert solve_fixed_lattice([IntMatrix.identity(3)]) == 3
    assert solve_fixed_lattice([IntMatrix.diagonal([1, -1, -1])]) == 1


def test_fixed_lattice_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_fixed_lattice([IntMatrix.identity(2), IntMatrix.identity(3)])


def test_gaussrat_basics():
    z = GaussRat(Fraction(1, 2), Fraction(-3, 4))
    assert z.conj().conj() == z
    assert z.norm_sq() == Fraction(1, 4) + Fraction(9, 16)
    assert (z * z.inverse()) == GaussRat(1)
    assert GaussRat(3, 4).norm_sq() == 25
    assert GaussRat(Fraction(3, 5), Fraction(4, 5)).is_unit()


def test_gaussrat_antisymmetry():
    # Im(conj(z) w) = -Im(conj(w) z), the twist behind the nil group law
    rng = random.Random(7)
    for _ in range(100):
        z = GaussRat(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                     Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
        w = GaussRat(Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
                     Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
        assert (z.conj() * w).im == -(w.conj() * z).im


def test_xgcd():
    for a, b in [(12, 18), (-5, 7), (0, 0), (0, -4), (35, 21)]:
        x, y, g = xgcd(a, b)
        assert x * a + y * b == g
        assert g == gcd(a, b)


def test_solve_rational():
    a = [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(0)]]
    assert solve_rational(a, [Fraction(3), Fraction(0)]) == [Fraction(3, 2), 0]
    assert solve_rational(a, [Fraction(3), Fraction(1)]) is None
