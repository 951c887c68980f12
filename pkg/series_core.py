"""
Exact arithmetic foundation.

Rationals are ``fractions.Fraction``; multivariate polynomials, truncated
power/Laurent series in one tagged formal variable ("t" or "s") and dense
matrices over those series live here. Rational matrices are exact
``sympy.Matrix`` objects; characteristic polynomials and their factorisation
over Q are delegated to sympy.
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import sympy

from errors import DimensionMismatch, MixedVariable, NonSquare, NotInvertible

logger = logging.getLogger(__name__)

Rational = Fraction
Exponent = Tuple[int, ...]

SERIES_VARIABLES = ("t", "s")
CHAR_POLY_VARIABLE = "lambda"


def to_rational(value) -> Fraction:
    """Coerce ints, Fractions, rational strings and sympy rationals to Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, sympy.Basic) and value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def to_sympy_rational(value) -> sympy.Rational:
    q = to_rational(value)
    return sympy.Rational(q.numerator, q.denominator)


def format_rational(value) -> str:
    """Serialise a rational as 'p/q' (integers included)"""
    q = to_rational(value)
    return f"{q.numerator}/{q.denominator}"


def format_monomial(variables: Sequence[str], exponent: Exponent) -> str:
    factors = []
    for name, e in zip(variables, exponent):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors) if factors else "1"


def _is_scalar(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


# ---------------------------------------------------------------------------
# Multivariate polynomials over Q
# ---------------------------------------------------------------------------

class MultiPoly:
    """Exact polynomial over Q: a finite map exponent vector -> nonzero rational."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: Sequence[str], terms: Optional[Dict[Exponent, object]] = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        cleaned: Dict[Exponent, Fraction] = {}
        for exponent, coefficient in (terms or {}).items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != n:
                raise ValueError(f"exponent {exponent} does not match {n} variables")
            if any(e < 0 for e in exponent):
                raise ValueError(f"negative exponent in {exponent}")
            cleaned[exponent] = cleaned.get(exponent, Fraction(0)) + to_rational(coefficient)
        self._terms = {e: c for e, c in cleaned.items() if c}

    @classmethod
    def _wrap(cls, variables: Tuple[str, ...], terms: Dict[Exponent, Fraction]) -> "MultiPoly":
        # terms must already be clean (no zeros, correct length)
        poly = cls.__new__(cls)
        poly.variables = variables
        poly._terms = terms
        return poly

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls._wrap(tuple(variables), {})

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def monomial(cls, variables: Sequence[str], exponent: Exponent, coefficient=1) -> "MultiPoly":
        return cls(variables, {tuple(exponent): coefficient})

    @classmethod
    def variable(cls, variables: Sequence[str], index: int) -> "MultiPoly":
        variables = tuple(variables)
        exponent = tuple(1 if k == index else 0 for k in range(len(variables)))
        return cls._wrap(variables, {exponent: Fraction(1)})

    # -- inspection ---------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(self._terms.items())

    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def monomials(self) -> List[Exponent]:
        return sorted(self._terms, key=lambda e: (sum(e), tuple(-x for x in e)))

    def coefficient(self, exponent: Exponent) -> Fraction:
        return self._terms.get(tuple(exponent), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial"""
        return max((sum(e) for e in self._terms), default=-1)

    def order(self) -> Optional[int]:
        """Lowest total degree of a term (None for zero)"""
        return min((sum(e) for e in self._terms), default=None)

    def homogeneous_part(self, degree: int) -> "MultiPoly":
        return MultiPoly._wrap(self.variables, {e: c for e, c in self._terms.items() if sum(e) == degree})

    def truncated(self, degree_bound: int) -> "MultiPoly":
        """Drop every term of total degree above degree_bound"""
        return MultiPoly._wrap(self.variables, {e: c for e, c in self._terms.items() if sum(e) <= degree_bound})

    def __len__(self):
        return len(self._terms)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError(f"variable lists differ: {self.variables} vs {other.variables}")
            return other
        if _is_scalar(other):
            return MultiPoly.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            value = terms.get(e, 0) + c
            if value:
                terms[e] = value
            else:
                terms.pop(e, None)
        return MultiPoly._wrap(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._wrap(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, factor) -> "MultiPoly":
        factor = to_rational(factor)
        if not factor:
            return MultiPoly.zero(self.variables)
        return MultiPoly._wrap(self.variables, {e: c * factor for e, c in self._terms.items()})

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly._wrap(self.variables, {e: c for e, c in terms.items() if c})

    __rmul__ = __mul__

    def mul_truncated(self, other: "MultiPoly", degree_bound: int) -> Tuple["MultiPoly", bool]:
        """Product without terms above degree_bound, and whether any were dropped"""
        other = self._coerce(other)
        dropped = False
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            for e2, c2 in other._terms.items():
                if d1 + sum(e2) > degree_bound:
                    dropped = True
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return MultiPoly._wrap(self.variables, {e: c for e, c in terms.items() if c}), dropped

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial exponents must be non-negative integers")
        result = MultiPoly.constant(self.variables, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def mul_monomial(self, exponent: Exponent, coefficient=1) -> "MultiPoly":
        coefficient = to_rational(coefficient)
        if not coefficient:
            return MultiPoly.zero(self.variables)
        return MultiPoly._wrap(
            self.variables,
            {tuple(a + b for a, b in zip(e, exponent)): c * coefficient for e, c in self._terms.items()},
        )

    def partial(self, index: int) -> "MultiPoly":
        """Exact partial derivative with respect to variables[index]"""
        if not 0 <= index < self.nvars:
            raise IndexError(f"variable index {index} out of range for {self.variables}")
        terms = {}
        for e, c in self._terms.items():
            if e[index]:
                lowered = e[:index] + (e[index] - 1,) + e[index + 1:]
                terms[lowered] = c * e[index]
        return MultiPoly._wrap(self.variables, terms)

    def antiderivative(self, index: int) -> "MultiPoly":
        """Term-by-term primitive with respect to variables[index], zero constant of integration"""
        if not 0 <= index < self.nvars:
            raise IndexError(f"variable index {index} out of range for {self.variables}")
        terms = {}
        for e, c in self._terms.items():
            raised = e[:index] + (e[index] + 1,) + e[index + 1:]
            terms[raised] = c / (e[index] + 1)
        return MultiPoly._wrap(self.variables, terms)

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other):
        if _is_scalar(other):
            other = MultiPoly.constant(self.variables, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        return hash((self.variables, frozenset(self._terms.items())))

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in self.monomials():
            c = self._terms[e]
            mono = format_monomial(self.variables, e)
            magnitude = abs(c)
            if mono == "1":
                body = str(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{magnitude}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"MultiPoly({self.variables!r}, {str(self)!r})"


def poly_partial(p: MultiPoly, i: int) -> MultiPoly:
    return p.partial(i)


# ---------------------------------------------------------------------------
# Truncated power / Laurent series
# ---------------------------------------------------------------------------

class TruncatedSeries:
    """
    sum_{k=v}^{N-1} c_k X^k + O(X^N) with X the tagged variable.

    Nonzero series store the dense coefficient list [c_v, ..., c_{N-1}] with
    c_v != 0. The zero series stores no coefficients; its valuation is
    reported as its precision.
    """

    __slots__ = ("variable", "valuation", "coefficients", "precision")

    def __init__(self, variable: str, valuation: int, coefficients: Iterable, precision: int):
        if variable not in SERIES_VARIABLES:
            raise ValueError(f"series variable must be one of {SERIES_VARIABLES}, got {variable!r}")
        coeffs = [to_rational(c) for c in coefficients]
        coeffs = coeffs[:max(0, precision - valuation)]
        lead = 0
        while lead < len(coeffs) and not coeffs[lead]:
            lead += 1
        coeffs = coeffs[lead:]
        valuation += lead

        self.variable = variable
        self.precision = precision
        if coeffs:
            coeffs.extend([Fraction(0)] * (precision - valuation - len(coeffs)))
            self.valuation = valuation
            self.coefficients = tuple(coeffs)
        else:
            self.valuation = precision
            self.coefficients = ()

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, variable: str, precision: int) -> "TruncatedSeries":
        return cls(variable, precision, (), precision)

    @classmethod
    def constant(cls, variable: str, value, precision: int) -> "TruncatedSeries":
        return cls(variable, 0, [value], precision)

    @classmethod
    def one(cls, variable: str, precision: int) -> "TruncatedSeries":
        return cls.constant(variable, 1, precision)

    @classmethod
    def monomial(cls, variable: str, exponent: int, coefficient, precision: int) -> "TruncatedSeries":
        return cls(variable, exponent, [coefficient], precision)

    @classmethod
    def from_terms(cls, variable: str, terms: Dict[int, object], precision: int) -> "TruncatedSeries":
        """Build from a sparse map exponent -> coefficient"""
        live = {k: to_rational(c) for k, c in terms.items() if k < precision and c}
        if not live:
            return cls.zero(variable, precision)
        low = min(live)
        return cls(variable, low, [live.get(k, 0) for k in range(low, precision)], precision)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, k: int) -> Fraction:
        if k >= self.precision:
            raise ValueError(f"coefficient of {self.variable}^{k} is beyond precision {self.precision}")
        if self.is_zero() or k < self.valuation:
            return Fraction(0)
        return self.coefficients[k - self.valuation]

    def terms(self) -> Dict[int, Fraction]:
        return {self.valuation + i: c for i, c in enumerate(self.coefficients) if c}

    @property
    def leading_coefficient(self) -> Fraction:
        if self.is_zero():
            raise NotInvertible("the zero series has no leading coefficient")
        return self.coefficients[0]

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "TruncatedSeries"):
        if other.variable != self.variable:
            raise MixedVariable(f"cannot combine series in {self.variable!r} and {other.variable!r}")

    def _lift(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        if _is_scalar(other):
            return TruncatedSeries.constant(self.variable, other, self.precision)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        precision = min(self.precision, other.precision)
        low = min(self.valuation, other.valuation)
        if low >= precision:
            return TruncatedSeries.zero(self.variable, precision)
        return TruncatedSeries(
            self.variable,
            low,
            [self.coefficient(k) + other.coefficient(k) for k in range(low, precision)],
            precision,
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.variable, self.valuation, [-c for c in self.coefficients], self.precision)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, factor) -> "TruncatedSeries":
        factor = to_rational(factor)
        return TruncatedSeries(self.variable, self.valuation, [c * factor for c in self.coefficients], self.precision)

    def __mul__(self, other):
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        precision = min(self.precision + other.valuation, other.precision + self.valuation)
        if self.is_zero() or other.is_zero():
            return TruncatedSeries.zero(self.variable, precision)
        valuation = self.valuation + other.valuation
        length = precision - valuation
        a, b = self.coefficients, other.coefficients
        product = []
        for k in range(length):
            acc = Fraction(0)
            for i in range(k + 1):
                if a[i] and b[k - i]:
                    acc += a[i] * b[k - i]
            product.append(acc)
        return TruncatedSeries(self.variable, valuation, product, precision)

    __rmul__ = __mul__

    def invert(self) -> "TruncatedSeries":
        if self.is_zero():
            raise NotInvertible(f"the zero series O({self.variable}^{self.precision}) is not invertible")
        a = self.coefficients
        length = len(a)
        inv_lead = 1 / a[0]
        b = [inv_lead]
        for k in range(1, length):
            acc = Fraction(0)
            for i in range(1, k + 1):
                if a[i]:
                    acc += a[i] * b[k - i]
            b.append(-acc * inv_lead)
        return TruncatedSeries(self.variable, -self.valuation, b, length - self.valuation)

    def __truediv__(self, other):
        if _is_scalar(other):
            return self.scale(Fraction(1) / to_rational(other))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self * other.invert()

    def derivative(self) -> "TruncatedSeries":
        if self.is_zero():
            return TruncatedSeries.zero(self.variable, self.precision - 1)
        v = self.valuation
        return TruncatedSeries(
            self.variable,
            v - 1,
            [(v + i) * c for i, c in enumerate(self.coefficients)],
            self.precision - 1,
        )

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by X^k"""
        if self.is_zero():
            return TruncatedSeries.zero(self.variable, self.precision + k)
        return TruncatedSeries(self.variable, self.valuation + k, self.coefficients, self.precision + k)

    def truncate(self, precision: int) -> "TruncatedSeries":
        if precision > self.precision:
            raise ValueError(f"cannot raise precision from {self.precision} to {precision}")
        return TruncatedSeries(self.variable, self.valuation, self.coefficients, precision)

    # -- comparison / display ----------------------------------------------

    def agrees_with(self, other: "TruncatedSeries", precision: Optional[int] = None) -> bool:
        """Equality of all coefficients below the common precision"""
        self._check(other)
        bound = min(self.precision, other.precision)
        if precision is not None:
            bound = min(bound, precision)
        low = min(self.valuation, other.valuation)
        return all(self.coefficient(k) == other.coefficient(k) for k in range(low, bound))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.precision == other.precision
            and self.valuation == other.valuation
            and self.coefficients == other.coefficients
        )

    def __hash__(self):
        return hash((self.variable, self.precision, self.valuation, self.coefficients))

    def __str__(self):
        x = self.variable
        parts = []
        for k, c in sorted(self.terms().items()):
            if k == 0:
                mono = ""
            elif k == 1:
                mono = x
            else:
                mono = f"{x}^{k}"
            magnitude = abs(c)
            if not mono:
                body = str(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{magnitude}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        parts.append(("+", f"O({x}^{self.precision})"))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"TruncatedSeries({self.variable!r}, {str(self)!r})"


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    return a.invert()


def series_derivative(a: TruncatedSeries) -> TruncatedSeries:
    return a.derivative()


# ---------------------------------------------------------------------------
# Matrices over truncated series
# ---------------------------------------------------------------------------

class SeriesMatrix:
    """Dense matrix of TruncatedSeries sharing one variable tag."""

    __slots__ = ("variable", "rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[TruncatedSeries]]):
        grid = tuple(tuple(row) for row in entries)
        if not grid or not grid[0]:
            raise DimensionMismatch("a series matrix needs at least one row and one column")
        cols = len(grid[0])
        if any(len(row) != cols for row in grid):
            raise DimensionMismatch("rows of a series matrix must have equal length")
        variable = grid[0][0].variable
        for row in grid:
            for entry in row:
                if entry.variable != variable:
                    raise MixedVariable(f"matrix mixes {variable!r} and {entry.variable!r} entries")
        self.variable = variable
        self.rows = len(grid)
        self.cols = cols
        self.entries = grid

    @classmethod
    def zeros(cls, rows: int, cols: int, variable: str, precision: int) -> "SeriesMatrix":
        zero = TruncatedSeries.zero(variable, precision)
        return cls([[zero] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n: int, variable: str, precision: int) -> "SeriesMatrix":
        one = TruncatedSeries.one(variable, precision)
        zero = TruncatedSeries.zero(variable, precision)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, diagonal: Sequence[TruncatedSeries], precision: Optional[int] = None) -> "SeriesMatrix":
        variable = diagonal[0].variable
        if precision is None:
            precision = min(d.precision for d in diagonal)
        zero = TruncatedSeries.zero(variable, precision)
        n = len(diagonal)
        return cls([[diagonal[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[TruncatedSeries]]) -> "SeriesMatrix":
        if not columns:
            raise DimensionMismatch("no columns given")
        rows = len(columns[0])
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(rows)])

    # -- inspection ---------------------------------------------------------

    def __getitem__(self, index: Tuple[int, int]) -> TruncatedSeries:
        i, j = index
        return self.entries[i][j]

    def column(self, j: int) -> List[TruncatedSeries]:
        return [self.entries[i][j] for i in range(self.rows)]

    def row(self, i: int) -> List[TruncatedSeries]:
        return list(self.entries[i])

    @property
    def precision(self) -> int:
        return min(entry.precision for row in self.entries for entry in row)

    def min_valuation(self) -> Optional[int]:
        values = [entry.valuation for row in self.entries for entry in row if not entry.is_zero()]
        return min(values, default=None)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def coefficient_matrix(self, k: int) -> sympy.Matrix:
        """Exact rational matrix of the X^k coefficients"""
        return sympy.Matrix(self.rows, self.cols, lambda i, j: to_sympy_rational(self.entries[i][j].coefficient(k)))

    # -- arithmetic ---------------------------------------------------------

    def _same_shape(self, other: "SeriesMatrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(f"shapes {self.rows}x{self.cols} and {other.rows}x{other.cols} differ")
        if self.variable != other.variable:
            raise MixedVariable(f"cannot combine matrices in {self.variable!r} and {other.variable!r}")

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._same_shape(other)
        return SeriesMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._same_shape(other)
        return SeriesMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)])

    def __neg__(self):
        return SeriesMatrix([[-a for a in row] for row in self.entries])

    def __mul__(self, other):
        if isinstance(other, SeriesMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
            if self.variable != other.variable:
                raise MixedVariable(f"cannot multiply matrices in {self.variable!r} and {other.variable!r}")
            return SeriesMatrix([
                [_dot(self.entries[i], other.column(j)) for j in range(other.cols)]
                for i in range(self.rows)
            ])
        if isinstance(other, TruncatedSeries) or _is_scalar(other):
            return SeriesMatrix([[a * other for a in row] for row in self.entries])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, TruncatedSeries) or _is_scalar(other):
            return SeriesMatrix([[other * a for a in row] for row in self.entries])
        return NotImplemented

    def apply(self, vector: Sequence[TruncatedSeries]) -> List[TruncatedSeries]:
        """Matrix times column vector"""
        if len(vector) != self.cols:
            raise DimensionMismatch(f"vector of length {len(vector)} does not match {self.cols} columns")
        return [_dot(row, vector) for row in self.entries]

    def derivative(self) -> "SeriesMatrix":
        return SeriesMatrix([[a.derivative() for a in row] for row in self.entries])

    def shift(self, k: int) -> "SeriesMatrix":
        return SeriesMatrix([[a.shift(k) for a in row] for row in self.entries])

    def transpose(self) -> "SeriesMatrix":
        return SeriesMatrix([self.column(j) for j in range(self.cols)])

    def truncate(self, precision: int) -> "SeriesMatrix":
        return SeriesMatrix([[a.truncate(min(precision, a.precision)) for a in row] for row in self.entries])

    def inverse(self) -> "SeriesMatrix":
        """Gauss-Jordan inverse over the Laurent series field, pivoting on minimal valuation"""
        if not self.is_square():
            raise NonSquare(f"cannot invert a {self.rows}x{self.cols} matrix")
        n = self.rows
        top = max(entry.precision for row in self.entries for entry in row)
        a = [list(row) for row in self.entries]
        b = [list(row) for row in SeriesMatrix.identity(n, self.variable, top).entries]
        for c in range(n):
            pivot = _pivot_row(a, c, c)
            if pivot is None:
                raise NotInvertible(f"column {c} has no invertible pivot at the available precision")
            a[c], a[pivot] = a[pivot], a[c]
            b[c], b[pivot] = b[pivot], b[c]
            inv = a[c][c].invert()
            a[c] = [x * inv for x in a[c]]
            b[c] = [x * inv for x in b[c]]
            for r in range(n):
                if r == c:
                    continue
                factor = a[r][c]
                if factor.is_zero():
                    continue
                a[r] = [x - factor * y for x, y in zip(a[r], a[c])]
                b[r] = [x - factor * y for x, y in zip(b[r], b[c])]
        return SeriesMatrix(b)

    def determinant(self) -> TruncatedSeries:
        if not self.is_square():
            raise NonSquare(f"no determinant for a {self.rows}x{self.cols} matrix")
        n = self.rows
        a = [list(row) for row in self.entries]
        det = TruncatedSeries.one(self.variable, max(entry.precision for row in a for entry in row))
        for c in range(n):
            pivot = _pivot_row(a, c, c)
            if pivot is None:
                return TruncatedSeries.zero(self.variable, self.precision)
            if pivot != c:
                a[c], a[pivot] = a[pivot], a[c]
                det = -det
            det = det * a[c][c]
            inv = a[c][c].invert()
            for r in range(c + 1, n):
                factor = a[r][c]
                if factor.is_zero():
                    continue
                ratio = factor * inv
                a[r] = [x - ratio * y for x, y in zip(a[r], a[c])]
        return det

    # -- comparison / display ----------------------------------------------

    def agrees_with(self, other: "SeriesMatrix", precision: Optional[int] = None) -> bool:
        self._same_shape(other)
        return all(
            a.agrees_with(b, precision)
            for r1, r2 in zip(self.entries, other.entries)
            for a, b in zip(r1, r2)
        )

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"SeriesMatrix([{body}])"


def _dot(row: Sequence[TruncatedSeries], column: Sequence[TruncatedSeries]) -> TruncatedSeries:
    total = None
    for a, b in zip(row, column):
        term = a * b
        total = term if total is None else total + term
    return total


def _pivot_row(grid: List[List[TruncatedSeries]], column: int, start: int) -> Optional[int]:
    best, best_valuation = None, None
    for r in range(start, len(grid)):
        entry = grid[r][column]
        if entry.is_zero():
            continue
        if best_valuation is None or entry.valuation < best_valuation:
            best, best_valuation = r, entry.valuation
    return best


# ---------------------------------------------------------------------------
# Rational matrices, characteristic polynomials, rational roots
# ---------------------------------------------------------------------------

def rational_matrix(rows: Sequence[Sequence[object]]) -> sympy.Matrix:
    """Exact sympy matrix from nested rows of ints/Fractions"""
    return sympy.Matrix([[to_sympy_rational(x) for x in row] for row in rows])


def matrix_to_fractions(matrix: sympy.Matrix) -> List[List[Fraction]]:
    return [[to_rational(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def char_poly(matrix) -> MultiPoly:
    """Monic characteristic polynomial det(lambda*I - M) of a rational matrix"""
    if not isinstance(matrix, sympy.MatrixBase):
        matrix = rational_matrix(matrix)
    if matrix.rows != matrix.cols:
        raise NonSquare(f"characteristic polynomial needs a square matrix, got {matrix.rows}x{matrix.cols}")
    lam = sympy.Symbol(CHAR_POLY_VARIABLE)
    coefficients = matrix.charpoly(lam).all_coeffs()
    degree = len(coefficients) - 1
    return MultiPoly(
        (CHAR_POLY_VARIABLE,),
        {(degree - k,): to_rational(sympy.nsimplify(c)) for k, c in enumerate(coefficients)},
    )


def rational_roots(polynomial: MultiPoly) -> Tuple[List[Fraction], MultiPoly]:
    """
    Rational roots (sorted, with multiplicity) of a univariate polynomial and
    the monic product of its non-linear irreducible factors over Q.
    """
    if polynomial.nvars != 1:
        raise ValueError("rational_roots expects a univariate polynomial")
    variables = polynomial.variables
    if polynomial.degree() <= 0:
        return [], MultiPoly.constant(variables, 1)
    lam = sympy.Symbol(variables[0])
    poly = sympy.Poly.from_dict(
        {e: to_sympy_rational(c) for e, c in polynomial.items()}, lam, domain=sympy.QQ
    )
    roots: List[Fraction] = []
    cofactor = MultiPoly.constant(variables, 1)
    _, factors = poly.factor_list()
    for factor, multiplicity in factors:
        coeffs = [to_rational(sympy.nsimplify(c)) for c in factor.all_coeffs()]
        if len(coeffs) == 2:
            roots.extend([-coeffs[1] / coeffs[0]] * multiplicity)
        else:
            lead = coeffs[0]
            degree = len(coeffs) - 1
            monic = MultiPoly(variables, {(degree - k,): c / lead for k, c in enumerate(coeffs)})
            cofactor = cofactor * monic ** multiplicity
    if cofactor.degree() > 0:
        logger.info(f"Characteristic polynomial has an irreducible non-linear factor: {cofactor}")
    return sorted(roots), cofactor
