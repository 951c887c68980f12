"""
Formal meromorphic connections over K = Q((t)).

A connection is given by its matrix P in a basis e_1..e_mu, so that
d(e_j) = sum_i P_ij e_i and d(v) = v' + P v on coordinate vectors.
Lattices are free R-submodules of K^mu with R = Q[[t]], kept in a
valuation-pivoted echelon form.
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence

import sympy

from errors import DimensionMismatch, LatticeError, NotSaturated
from series_core import SeriesMatrix, TruncatedSeries, char_poly, rational_roots

logger = logging.getLogger(__name__)

Vector = List[TruncatedSeries]


class FormalMeromorphicConnection:
    """Connection matrix over truncated Laurent series in t, with basis labels."""

    __slots__ = ("basis_labels", "matrix")

    def __init__(self, basis_labels: Sequence[str], matrix: SeriesMatrix):
        labels = list(basis_labels)
        if matrix.variable != "t":
            raise ValueError(f"connection matrices live over t, got {matrix.variable!r}")
        if not matrix.is_square():
            raise DimensionMismatch(f"connection matrix must be square, got {matrix.rows}x{matrix.cols}")
        if len(labels) != matrix.rows:
            raise DimensionMismatch(f"{len(labels)} labels for dimension {matrix.rows}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"basis labels must be distinct: {labels}")
        self.basis_labels = labels
        self.matrix = matrix

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @property
    def precision(self) -> int:
        return self.matrix.precision

    def __repr__(self):
        return f"FormalMeromorphicConnection(dim={self.dim}, labels={self.basis_labels}, {self.matrix!r})"


def trivial_connection(precision: int) -> FormalMeromorphicConnection:
    """Rank one, d(f) = df/dt"""
    return FormalMeromorphicConnection(["1"], SeriesMatrix.zeros(1, 1, "t", precision))


def apply(connection: FormalMeromorphicConnection, vector: Sequence[TruncatedSeries]) -> Vector:
    """Leibniz action v' + P v"""
    if len(vector) != connection.dim:
        raise DimensionMismatch(f"vector of length {len(vector)} for a connection of rank {connection.dim}")
    action = connection.matrix.apply(list(vector))
    return [v.derivative() + a for v, a in zip(vector, action)]


def gauge(connection: FormalMeromorphicConnection, g: SeriesMatrix) -> FormalMeromorphicConnection:
    """Matrix in the basis given by the columns of g: G^-1 P G + G^-1 G'"""
    if g.rows != connection.dim or not g.is_square():
        raise DimensionMismatch(f"gauge matrix {g.rows}x{g.cols} for rank {connection.dim}")
    inverse = g.inverse()
    matrix = inverse * connection.matrix * g + inverse * g.derivative()
    return FormalMeromorphicConnection(connection.basis_labels, matrix)


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------

def _combine(v: Vector, factor: TruncatedSeries, w: Vector) -> Vector:
    """v - factor * w"""
    return [a - factor * b for a, b in zip(v, w)]


class Lattice:
    """
    R-lattice in K^mu. Generator i vanishes in coordinates < i and has
    exactly t^(v_i) in coordinate i; entries right of the pivot are reduced
    modulo t^(v_k).
    """

    __slots__ = ("generators", "pivot_valuations")

    def __init__(self, vectors: Sequence[Sequence[TruncatedSeries]]):
        vectors = [list(v) for v in vectors]
        if not vectors:
            raise LatticeError("a lattice needs generators")
        mu = len(vectors[0])
        if any(len(v) != mu for v in vectors):
            raise DimensionMismatch("lattice generators must have equal length")

        pending = vectors
        basis: List[Vector] = []
        pivots: List[int] = []
        for i in range(mu):
            choice = None
            for index, v in enumerate(pending):
                if v[i].is_zero():
                    continue
                if choice is None or v[i].valuation < pending[choice][i].valuation:
                    choice = index
            if choice is None:
                raise LatticeError(f"generators do not span K^{mu}: coordinate {i} has no pivot")
            pivot = pending.pop(choice)
            valuation = pivot[i].valuation
            unit = pivot[i].shift(-valuation).invert()
            pivot = [x * unit for x in pivot]
            pivot[i] = TruncatedSeries.monomial(pivot[i].variable, valuation, 1, pivot[i].precision)
            pending = [
                v if v[i].is_zero() else _combine(v, v[i].shift(-valuation), pivot)
                for v in pending
            ]
            basis.append(pivot)
            pivots.append(valuation)

        for i in range(mu):
            for k in range(i + 1, mu):
                entry = basis[i][k]
                high = {e - pivots[k]: c for e, c in entry.terms().items() if e >= pivots[k]}
                if not high:
                    continue
                quotient = TruncatedSeries.from_terms(entry.variable, high, entry.precision - pivots[k])
                basis[i] = _combine(basis[i], quotient, basis[k])
        self.generators = basis
        self.pivot_valuations = pivots

    @classmethod
    def standard(cls, mu: int, precision: int) -> "Lattice":
        one = TruncatedSeries.one("t", precision)
        zero = TruncatedSeries.zero("t", precision)
        return cls([[one if i == j else zero for j in range(mu)] for i in range(mu)])

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def precision(self) -> int:
        return min(x.precision for v in self.generators for x in v)

    def min_valuation(self) -> int:
        return min(x.valuation for v in self.generators for x in v if not x.is_zero())

    def coordinates(self, vector: Sequence[TruncatedSeries]) -> Vector:
        """R-coefficients of vector in the generators; LatticeError if it lies outside"""
        if len(vector) != self.rank:
            raise DimensionMismatch(f"vector of length {len(vector)} for a lattice of rank {self.rank}")
        residual = list(vector)
        coefficients = []
        for i, generator in enumerate(self.generators):
            entry = residual[i]
            valuation = self.pivot_valuations[i]
            if not entry.is_zero() and entry.valuation < valuation:
                raise LatticeError(
                    f"coordinate {i} has valuation {entry.valuation} below the pivot t^{valuation}"
                )
            quotient = entry.shift(-valuation)
            coefficients.append(quotient)
            if not quotient.is_zero():
                residual = _combine(residual, quotient, generator)
        return coefficients

    def contains(self, vector: Sequence[TruncatedSeries]) -> bool:
        try:
            self.coordinates(vector)
        except LatticeError:
            return False
        return True

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(v) for v in other.generators)

    def sum(self, other) -> "Lattice":
        """Module sum with another lattice or with a list of vectors"""
        vectors = other.generators if isinstance(other, Lattice) else [list(v) for v in other]
        return Lattice(self.generators + vectors)

    def equals(self, other: "Lattice") -> bool:
        return self.contains_lattice(other) and other.contains_lattice(self)

    def __repr__(self):
        rows = "; ".join(", ".join(str(x) for x in v) for v in self.generators)
        return f"Lattice([{rows}])"


# ---------------------------------------------------------------------------
# Saturation, residues, monodromy
# ---------------------------------------------------------------------------

class Verdict(str, Enum):
    REGULAR = "regular"
    IRREGULAR = "irregular"
    INCONCLUSIVE = "inconclusive"


class SaturationResult(NamedTuple):
    lattice: Lattice
    verdict: Verdict
    steps: int
    valuations: List[int]


def _t_derivation(connection: FormalMeromorphicConnection, vector: Vector) -> Vector:
    return [x.shift(1) for x in apply(connection, vector)]


def saturate(connection: FormalMeromorphicConnection, lattice: Optional[Lattice] = None,
             max_steps: Optional[int] = None) -> SaturationResult:
    """
    Grow L_(k+1) = L_k + t d(L_k) until t d(L) is contained in L.

    A regular connection stabilizes after fewer than mu growth steps, so a
    lattice whose minimal valuation dropped strictly for mu consecutive
    growths is reported irregular.
    """
    mu = connection.dim
    if max_steps is None:
        max_steps = mu + 2
    current = lattice if lattice is not None else Lattice.standard(mu, connection.precision)
    valuations = [current.min_valuation()]

    for step in range(max_steps + 1):
        images = [_t_derivation(connection, v) for v in current.generators]
        if all(current.contains(image) for image in images):
            logger.info(f"Lattice saturated after {step} steps")
            return SaturationResult(current, Verdict.REGULAR, step, valuations)
        if step == max_steps:
            break
        try:
            current = current.sum(images)
        except LatticeError as e:
            logger.warning(f"Saturation lost rank at step {step + 1}: {e}")
            return SaturationResult(current, Verdict.INCONCLUSIVE, step, valuations)
        valuations.append(current.min_valuation())

        growths = len(valuations) - 1
        tail = valuations[-(mu + 1):]
        if growths >= mu and all(b < a for a, b in zip(tail, tail[1:])):
            logger.info(f"Minimal valuation dropped on {mu} consecutive steps: irregular")
            return SaturationResult(current, Verdict.IRREGULAR, step + 1, valuations)
        if current.precision - current.min_valuation() < 2:
            logger.warning(f"t-precision exhausted after {step + 1} saturation steps")
            return SaturationResult(current, Verdict.INCONCLUSIVE, step + 1, valuations)

    return SaturationResult(current, Verdict.INCONCLUSIVE, max_steps, valuations)


def residue(connection: FormalMeromorphicConnection, lattice: Lattice) -> sympy.Matrix:
    """Action of t d on L / tL in the generator basis"""
    mu = connection.dim
    entries = [[Fraction(0)] * mu for _ in range(mu)]
    for j, generator in enumerate(lattice.generators):
        image = _t_derivation(connection, generator)
        try:
            coefficients = lattice.coordinates(image)
        except LatticeError as e:
            raise NotSaturated(f"t d(generator {j}) leaves the lattice: {e}") from e
        for i, c in enumerate(coefficients):
            entries[i][j] = c.coefficient(0)
    return sympy.Matrix(mu, mu, lambda i, j: sympy.Rational(entries[i][j].numerator, entries[i][j].denominator))


def monodromy_rotation_numbers(res: sympy.Matrix) -> List[Fraction]:
    """(-rho) mod 1 for each rational residue eigenvalue rho"""
    roots, cofactor = rational_roots(char_poly(res))
    if cofactor.degree() > 0:
        logger.warning(f"Residue has eigenvalues outside Q (factor {cofactor}); no rotation numbers for them")
    return sorted((-rho) % 1 for rho in roots)


def monodromy_orders(rotations: Sequence[Fraction]) -> List[int]:
    """Order of exp(2 pi i r) as a root of unity"""
    return [Fraction(r).denominator for r in rotations]
