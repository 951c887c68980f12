import random
from fractions import Fraction

import pytest
import sympy

from errors import MixedVariable, NonSquare, NotInvertible
from series_core import (
    MultiPoly,
    SeriesMatrix,
    TruncatedSeries,
    char_poly,
    format_rational,
    poly_partial,
    rational_matrix,
    rational_roots,
    series_derivative,
    series_invert,
    series_mul,
)

XY = ("x", "y")


def T(valuation, coefficients, precision, variable="t"):
    return TruncatedSeries(variable, valuation, coefficients, precision)


def random_series(rng, variable="t"):
    valuation = rng.randint(-2, 2)
    length = rng.randint(1, 6)
    coefficients = [rng.choice([c for c in range(-4, 5) if c])] + [
        Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(length - 1)
    ]
    return T(valuation, coefficients, valuation + length, variable)


def random_poly(rng, variables=XY, terms=4, degree=3):
    return MultiPoly(variables, {
        tuple(rng.randint(0, degree) for _ in variables): Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        for _ in range(terms)
    })


# -- TruncatedSeries ---------------------------------------------------------

def test_mul_telescoping_units():
    product = series_mul(T(1, [1], 5), T(-1, [1, 1], 5))
    assert product.valuation == 0
    assert product.terms() == {0: 1, 1: 1}
    assert product.precision == 4


def test_mul_zero_absorbs():
    product = series_mul(TruncatedSeries.zero("t", 5), TruncatedSeries.one("t", 5))
    assert product.is_zero()
    assert product.precision == 5


def test_mul_geometric_identity():
    product = series_mul(T(0, [1, 1], 5), T(0, [1, -1, 1, -1, 1], 5))
    assert product.terms() == {0: 1}
    assert product.precision == 5


def test_invert_one_minus_t():
    inverse = series_invert(T(0, [1, -1], 6))
    assert inverse.coefficients == tuple(Fraction(1) for _ in range(6))
    assert (inverse * T(0, [1, -1], 6)) == TruncatedSeries.one("t", 6)


def test_invert_monomial():
    inverse = series_invert(T(1, [1], 5))
    assert inverse.valuation == -1
    assert inverse.terms() == {-1: 1}


def test_invert_zero_raises():
    with pytest.raises(NotInvertible):
        series_invert(TruncatedSeries.zero("t", 4))


def test_derivative_examples():
    assert series_derivative(T(2, [1], 5)).terms() == {1: 2}
    assert series_derivative(T(2, [1], 5)).precision == 4
    assert series_derivative(T(-1, [1], 5)).terms() == {-2: -1}
    assert series_derivative(T(0, [3, 0, 0, 5], 5)).terms() == {2: 15}


def test_zero_series_reports_precision_as_valuation():
    zero = T(2, [0, 0], 7)
    assert zero.is_zero()
    assert zero.valuation == 7


def test_mixed_variables_rejected():
    with pytest.raises(MixedVariable):
        series_mul(T(0, [1], 3, "t"), T(0, [1], 3, "s"))
    with pytest.raises(MixedVariable):
        T(0, [1], 3, "t") + T(0, [1], 3, "s")


def test_coefficient_beyond_precision_raises():
    with pytest.raises(ValueError):
        T(0, [1, 2], 2).coefficient(2)


def test_ring_axioms_on_random_series():
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = random_series(rng), random_series(rng), random_series(rng)
        assert ((a * b) * c).agrees_with(a * (b * c))
        assert (a * (b + c)).agrees_with(a * b + a * c)
        assert (a + b).agrees_with(b + a)


def test_invert_is_two_sided_inverse():
    rng = random.Random(11)
    for _ in range(200):
        a = random_series(rng)
        inverse = series_invert(a)
        for product in (a * inverse, inverse * a):
            assert product.precision == a.precision - a.valuation
            assert product.agrees_with(TruncatedSeries.one("t", 50))


def test_product_rule():
    rng = random.Random(13)
    for _ in range(200):
        a, b = random_series(rng), random_series(rng)
        lhs = series_derivative(a * b)
        rhs = series_derivative(a) * b + a * series_derivative(b)
        assert lhs.agrees_with(rhs)


def test_shift_and_truncate():
    a = T(0, [1, 2, 3], 3)
    assert a.shift(2).terms() == {2: 1, 3: 2, 4: 3}
    assert a.shift(2).precision == 5
    assert a.truncate(2).terms() == {0: 1, 1: 2}
    with pytest.raises(ValueError):
        a.truncate(4)


# -- MultiPoly -------------------------------------------------------------

def test_poly_partial_examples():
    x, y = MultiPoly.variable(XY, 0), MultiPoly.variable(XY, 1)
    assert poly_partial(x ** 2 + y ** 3, 0) == 2 * x
    assert poly_partial(x ** 2 + y ** 3, 1) == 3 * y ** 2
    t55 = x ** 5 + y ** 5 + x ** 2 * y ** 2
    assert poly_partial(t55, 0) == 5 * x ** 4 + 2 * x * y ** 2


def test_poly_ring_axioms():
    rng = random.Random(3)
    for _ in range(100):
        a, b, c = random_poly(rng), random_poly(rng), random_poly(rng)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == MultiPoly.zero(XY)


def test_poly_never_stores_zero():
    p = MultiPoly(XY, {(1, 0): 1, (0, 1): 0})
    assert len(p) == 1
    assert (p - p).is_zero()


def test_antiderivative_inverts_partial():
    rng = random.Random(5)
    for _ in range(50):
        p = random_poly(rng)
        assert p.antiderivative(1).partial(1) == p


def test_poly_str():
    x, y = MultiPoly.variable(XY, 0), MultiPoly.variable(XY, 1)
    assert str(x ** 2 - y * Fraction(1, 2) + 3) == "3 - 1/2*y + x^2"


# -- matrices --------------------------------------------------------------

def test_char_poly_examples():
    lam = ("lambda",)
    p = char_poly(rational_matrix([[Fraction(-1, 6), 0], [0, Fraction(1, 6)]]))
    assert p == MultiPoly(lam, {(2,): 1, (0,): Fraction(-1, 36)})
    assert rational_roots(p)[0] == [Fraction(-1, 6), Fraction(1, 6)]

    p = char_poly([[0]])
    assert p == MultiPoly(lam, {(1,): 1})
    assert rational_roots(p)[0] == [0]

    p = char_poly([[0, 1], [0, 0]])
    assert p == MultiPoly(lam, {(2,): 1})
    assert rational_roots(p)[0] == [0, 0]


def test_char_poly_non_square():
    with pytest.raises(NonSquare):
        char_poly(rational_matrix([[1, 2]]))


def test_rational_roots_keeps_irreducible_cofactor():
    lam = ("lambda",)
    p = MultiPoly(lam, {(3,): 1, (1,): -2})  # lambda^3 - 2 lambda
    roots, cofactor = rational_roots(p)
    assert roots == [0]
    assert cofactor == MultiPoly(lam, {(2,): 1, (0,): -2})


def test_cayley_hamilton():
    rng = random.Random(17)
    for _ in range(20):
        rows = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(3)] for _ in range(3)]
        m = rational_matrix(rows)
        p = char_poly(m)
        total = sympy.zeros(3, 3)
        for (k,), c in p.items():
            total += sympy.Rational(c.numerator, c.denominator) * m ** k
        assert total.is_zero_matrix


def test_series_matrix_inverse():
    rng = random.Random(19)
    for _ in range(10):
        entries = [
            [T(0, [1 if i == j else 0] + [rng.randint(-3, 3) for _ in range(4)], 5) for j in range(3)]
            for i in range(3)
        ]
        m = SeriesMatrix(entries)
        product = m * m.inverse()
        assert product.agrees_with(SeriesMatrix.identity(3, "t", 5))


def test_series_matrix_determinant_of_diagonal():
    s = "s"
    diagonal = [T(1, [Fraction(5, 6)], 10, s), T(1, [Fraction(7, 6)], 10, s)]
    det = SeriesMatrix.diagonal(diagonal).determinant()
    assert det.valuation == 2
    assert det.coefficient(2) == Fraction(35, 36)


def test_singular_series_matrix_not_invertible():
    zero = TruncatedSeries.zero("t", 4)
    one = TruncatedSeries.one("t", 4)
    with pytest.raises(NotInvertible):
        SeriesMatrix([[one, one], [zero, zero]]).inverse()


def test_coefficient_matrix_is_exact():
    m = SeriesMatrix([[T(0, [1, Fraction(1, 2)], 3), T(1, [2], 3)]])
    assert m.coefficient_matrix(1) == sympy.Matrix([[sympy.Rational(1, 2), 2]])


def test_format_rational():
    assert format_rational(Fraction(5, 6)) == "5/6"
    assert format_rational(3) == "3/1"
    assert format_rational(sympy.Rational(-1, 6)) == "-1/6"
