import random
from fractions import Fraction

import pytest
import sympy

from connection import (
    FormalMeromorphicConnection,
    Lattice,
    Verdict,
    apply,
    gauge,
    monodromy_orders,
    monodromy_rotation_numbers,
    residue,
    saturate,
    trivial_connection,
)
from errors import DimensionMismatch, LatticeError, NotInvertible, NotSaturated
from series_core import SeriesMatrix, TruncatedSeries, char_poly, rational_roots

N = 10


def t(valuation, coefficients, precision=N):
    return TruncatedSeries("t", valuation, coefficients, precision)


def diagonal_connection(residues, precision=N):
    diagonal = [TruncatedSeries.monomial("t", -1, r, precision) for r in residues]
    labels = [f"e{i}" for i in range(len(residues))]
    return FormalMeromorphicConnection(labels, SeriesMatrix.diagonal(diagonal, precision))


def cusp():
    return diagonal_connection([Fraction(-1, 6), Fraction(1, 6)])


def irregular(precision=N):
    return FormalMeromorphicConnection(["e"], SeriesMatrix([[TruncatedSeries.monomial("t", -2, 1, precision)]]))


def random_vector(rng, n, precision=N):
    return [t(rng.randint(-1, 2), [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(5)], precision)
            for _ in range(n)]


def random_connection(rng, n):
    entries = [[t(-rng.randint(0, 2), [rng.randint(-3, 3) for _ in range(6)]) for _ in range(n)] for _ in range(n)]
    return FormalMeromorphicConnection([f"e{i}" for i in range(n)], SeriesMatrix(entries))


def random_gauge(rng, n):
    return SeriesMatrix([
        [t(0, [1 if i == j else 0] + [rng.randint(-2, 2) for _ in range(5)]) for j in range(n)]
        for i in range(n)
    ])


def roots_of(matrix):
    return rational_roots(char_poly(matrix))[0]


# -- apply / gauge ---------------------------------------------------------

def test_trivial_connection_is_the_derivative():
    result = apply(trivial_connection(N), [t(1, [1])])
    assert result[0].terms() == {0: 1}


def test_apply_cusp_connection():
    result = apply(cusp(), [TruncatedSeries.one("t", N), TruncatedSeries.zero("t", N)])
    assert result[0].terms() == {-1: Fraction(-1, 6)}
    assert result[1].is_zero()


def test_apply_zero_vector():
    rng = random.Random(53)
    connection = random_connection(rng, 3)
    assert all(x.is_zero() for x in apply(connection, [TruncatedSeries.zero("t", N)] * 3))


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        apply(cusp(), [TruncatedSeries.one("t", N)])


def test_leibniz_identity():
    rng = random.Random(59)
    for _ in range(500):
        connection = random_connection(rng, 2)
        v = random_vector(rng, 2)
        scalar = random_vector(rng, 1)[0]
        lhs = apply(connection, [scalar * x for x in v])
        action = apply(connection, v)
        rhs = [scalar.derivative() * x + scalar * a for x, a in zip(v, action)]
        assert all(a.agrees_with(b) for a, b in zip(lhs, rhs))


def test_gauge_by_identity():
    connection = cusp()
    gauged = gauge(connection, SeriesMatrix.identity(2, "t", N))
    assert gauged.matrix.agrees_with(connection.matrix)


def test_gauge_by_t_on_trivial_connection():
    gauged = gauge(trivial_connection(N), SeriesMatrix([[t(1, [1])]]))
    assert gauged.matrix[0, 0].terms() == {-1: 1}


def test_gauge_round_trip():
    rng = random.Random(61)
    for _ in range(20):
        connection = random_connection(rng, 2)
        g = random_gauge(rng, 2)
        back = gauge(gauge(connection, g), g.inverse())
        assert back.matrix.agrees_with(connection.matrix)


def test_gauge_covariance():
    rng = random.Random(67)
    for _ in range(50):
        connection = random_connection(rng, 2)
        g = random_gauge(rng, 2)
        w = random_vector(rng, 2)
        transported = g.inverse().apply(apply(connection, g.apply(w)))
        direct = apply(gauge(connection, g), w)
        assert all(a.agrees_with(b) for a, b in zip(direct, transported))


def test_gauge_needs_invertible_matrix():
    zero = TruncatedSeries.zero("t", N)
    with pytest.raises(NotInvertible):
        gauge(cusp(), SeriesMatrix([[zero, zero], [zero, zero]]))


# -- lattices --------------------------------------------------------------

def test_lattice_echelon_form_and_membership():
    lattice = Lattice([[t(0, [1]), t(0, [1])], [t(0, [0]), t(1, [1])]])
    assert lattice.pivot_valuations == [0, 1]
    assert lattice.contains([t(0, [1]), t(0, [1, 1])])
    assert not lattice.contains([t(0, [0, 0]), t(0, [1])])
    coordinates = lattice.coordinates([t(0, [2]), t(0, [2, 3])])
    assert coordinates[0].terms() == {0: 2}
    assert coordinates[1].terms() == {0: 3}


def test_lattice_sum_and_equality():
    standard = Lattice.standard(2, N)
    bigger = standard.sum([[t(-1, [1]), TruncatedSeries.zero("t", N)]])
    assert bigger.pivot_valuations == [-1, 0]
    assert bigger.contains_lattice(standard)
    assert not standard.contains_lattice(bigger)
    assert standard.equals(Lattice([[t(0, [1]), t(0, [0, 1])], [TruncatedSeries.zero("t", N), t(0, [1])]]))


def test_rank_deficient_generators():
    with pytest.raises(LatticeError):
        Lattice([[t(0, [1]), t(0, [1])], [t(0, [2]), t(0, [2])]])


# -- saturation ------------------------------------------------------------

def test_logarithmic_connection_is_saturated_at_step_zero():
    result = saturate(diagonal_connection([Fraction(2, 7), Fraction(-3, 5)]))
    assert result.verdict is Verdict.REGULAR
    assert result.steps == 0


def test_double_pole_is_irregular():
    for precision in (10, 20):
        result = saturate(irregular(precision))
        assert result.verdict is Verdict.IRREGULAR
        assert result.steps <= 1 + 2
        assert result.valuations == [0, -1]


def test_cusp_connection_regular_with_standard_lattice():
    result = saturate(cusp())
    assert result.verdict is Verdict.REGULAR
    assert result.lattice.equals(Lattice.standard(2, N))


def test_saturation_is_idempotent():
    connection = FormalMeromorphicConnection(["a", "b"], SeriesMatrix([
        [TruncatedSeries.zero("t", N), TruncatedSeries.monomial("t", -2, 1, N)],
        [TruncatedSeries.zero("t", N), TruncatedSeries.zero("t", N)],
    ]))
    first = saturate(connection)
    assert first.verdict is Verdict.REGULAR
    assert first.steps >= 1
    again = saturate(connection, first.lattice)
    assert again.verdict is Verdict.REGULAR
    assert again.steps == 0
    assert again.lattice.equals(first.lattice)


# -- residues and monodromy --------------------------------------------------

def test_residue_examples():
    result = saturate(cusp())
    assert residue(cusp(), result.lattice) == sympy.diag(sympy.Rational(-1, 6), sympy.Rational(1, 6))

    trivial = trivial_connection(N)
    assert residue(trivial, saturate(trivial).lattice).is_zero_matrix

    cubic = diagonal_connection([Fraction(-2, 3), Fraction(-1, 3)])
    assert residue(cubic, Lattice.standard(2, N)) == sympy.diag(sympy.Rational(-2, 3), sympy.Rational(-1, 3))


def test_residue_requires_saturated_lattice():
    with pytest.raises(NotSaturated):
        residue(irregular(), Lattice.standard(1, N))


def test_residue_spectrum_under_constant_gauge():
    g = SeriesMatrix([[t(0, [1]), t(0, [1])], [TruncatedSeries.zero("t", N), t(0, [2])]])
    gauged = gauge(cusp(), g)
    result = saturate(gauged)
    assert result.verdict is Verdict.REGULAR
    assert roots_of(residue(gauged, result.lattice)) == [Fraction(-1, 6), Fraction(1, 6)]


def test_residue_spectrum_shifts_by_integers():
    g = SeriesMatrix.diagonal([t(1, [1]), t(2, [1])])
    gauged = gauge(cusp(), g)
    result = saturate(gauged)
    assert result.verdict is Verdict.REGULAR
    assert roots_of(residue(gauged, result.lattice)) == [Fraction(5, 6), Fraction(13, 6)]


def test_rotation_numbers():
    assert monodromy_rotation_numbers(sympy.diag(sympy.Rational(-1, 6), sympy.Rational(1, 6))) == \
        [Fraction(1, 6), Fraction(5, 6)]
    assert monodromy_rotation_numbers(sympy.zeros(1, 1)) == [0]
    assert monodromy_rotation_numbers(sympy.diag(sympy.Rational(-2, 3), sympy.Rational(-1, 3))) == \
        [Fraction(1, 3), Fraction(2, 3)]


def test_monodromy_orders():
    assert monodromy_orders([Fraction(1, 6), Fraction(5, 6)]) == [6, 6]
    assert monodromy_orders([Fraction(0)]) == [1]
