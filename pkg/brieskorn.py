"""
Brieskorn lattice computations.

Classes of top forms g dx are written in the basis {m_i dx} of monomials
standard for the Jacobian ideal, with coefficients that are power series in
the microlocal variable s (s acts as the inverse of d/dt). The identity
[df ^ eta] = s [d eta] drives the reduction loop.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence

import sympy

from config import Config
from connection import FormalMeromorphicConnection
from diff_forms import PolyForm, df_wedge, integrate_top
from errors import BasisMismatch, DegreeBoundExceeded, NotQuasiHomogeneous, UnstableTruncation
from local_basis import SingularityReport, StandardBasis, jacobian_std_basis, milnor_number, mora_normal_form
from series_core import MultiPoly, SeriesMatrix, TruncatedSeries, char_poly, rational_roots

logger = logging.getLogger(__name__)


class ReductionContext(NamedTuple):
    f: MultiPoly
    basis: StandardBasis
    report: SingularityReport

    @property
    def degree_bound(self) -> int:
        return self.basis.degree_bound


def singularity_context(f: MultiPoly, degree_bound: Optional[int] = None) -> ReductionContext:
    """Standard basis plus Milnor algebra data for f"""
    basis = jacobian_std_basis(f, degree_bound)
    return ReductionContext(f, basis, milnor_number(f, basis=basis))


def certified_precision(precision: int, context: ReductionContext, truncated: bool) -> int:
    """
    s-precision that survives dropping terms of degree > D. Since
    m^(d0) lies in the Jacobian ideal, m^(j(d0+1)) dx lies in s^j H''.
    """
    if not truncated:
        return precision
    return min(precision, (context.degree_bound + 1) // (context.report.determinacy_degree + 1))


class BrieskornElement:
    """Coordinates of a Brieskorn lattice class in the basis {m_i dx}, as series in s."""

    __slots__ = ("coords", "basis_ref")

    def __init__(self, coords: Sequence[TruncatedSeries], basis_ref: SingularityReport):
        coords = tuple(coords)
        if len(coords) != basis_ref.mu:
            raise BasisMismatch(f"{len(coords)} coordinates for a basis of size {basis_ref.mu}")
        if any(c.variable != "s" for c in coords):
            raise BasisMismatch("Brieskorn coordinates must be series in s")
        self.coords = coords
        self.basis_ref = basis_ref

    @classmethod
    def from_rationals(cls, basis_ref: SingularityReport, values, precision: int) -> "BrieskornElement":
        return cls([TruncatedSeries.constant("s", v, precision) for v in values], basis_ref)

    @property
    def precision(self) -> int:
        return min(c.precision for c in self.coords)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def _check(self, other: "BrieskornElement"):
        if other.basis_ref.basis_monomials != self.basis_ref.basis_monomials:
            raise BasisMismatch("elements refer to different monomial bases")

    def __add__(self, other: "BrieskornElement") -> "BrieskornElement":
        self._check(other)
        return BrieskornElement([a + b for a, b in zip(self.coords, other.coords)], self.basis_ref)

    def __sub__(self, other: "BrieskornElement") -> "BrieskornElement":
        self._check(other)
        return BrieskornElement([a - b for a, b in zip(self.coords, other.coords)], self.basis_ref)

    def times(self, series: TruncatedSeries) -> "BrieskornElement":
        return BrieskornElement([series * c for c in self.coords], self.basis_ref)

    def shift(self, k: int = 1) -> "BrieskornElement":
        """Multiply by s^k"""
        return BrieskornElement([c.shift(k) for c in self.coords], self.basis_ref)

    def derivative(self) -> "BrieskornElement":
        return BrieskornElement([c.derivative() for c in self.coords], self.basis_ref)

    def truncate(self, precision: int) -> "BrieskornElement":
        return BrieskornElement([c.truncate(min(precision, c.precision)) for c in self.coords], self.basis_ref)

    def agrees_with(self, other: "BrieskornElement", precision: Optional[int] = None) -> bool:
        self._check(other)
        return all(a.agrees_with(b, precision) for a, b in zip(self.coords, other.coords))

    def __eq__(self, other):
        if not isinstance(other, BrieskornElement):
            return NotImplemented
        return self.coords == other.coords and self.basis_ref.basis_monomials == other.basis_ref.basis_monomials

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"BrieskornElement([{', '.join(str(c) for c in self.coords)}])"


class TMatrix:
    """Matrix of multiplication by t = f on the Brieskorn lattice, in the microlocal variable s."""

    __slots__ = ("matrix", "f", "basis_ref")

    def __init__(self, matrix: SeriesMatrix, f: MultiPoly, basis_ref: SingularityReport):
        if matrix.variable != "s" or matrix.rows != basis_ref.mu or matrix.cols != basis_ref.mu:
            raise BasisMismatch(f"t-matrix must be a {basis_ref.mu}x{basis_ref.mu} matrix over s")
        self.matrix = matrix
        self.f = f
        self.basis_ref = basis_ref

    @property
    def precision(self) -> int:
        return self.matrix.precision

    @property
    def mu(self) -> int:
        return self.basis_ref.mu

    def __repr__(self):
        return f"TMatrix(f={self.f}, {self.matrix!r})"


def reduce_to_basis(omega: PolyForm, context: ReductionContext, precision: int) -> BrieskornElement:
    """
    Coordinates of [omega] modulo s^precision.

    Each step writes g_k = sum_j a_j df/dx_j + r_k, records s^k r_k and
    continues with g_(k+1) = sum_j da_j/dx_j.
    """
    report = context.report
    g = omega.top_coefficient()
    if g.degree() > context.degree_bound:
        raise DegreeBoundExceeded(
            f"form coefficient of degree {g.degree()} exceeds the degree bound {context.degree_bound}"
        )

    columns: List[List[Fraction]] = [[Fraction(0)] * precision for _ in range(report.mu)]
    truncated = False
    steps = 0
    for k in range(precision):
        if g.is_zero():
            break
        normal = mora_normal_form(g, context.basis)
        truncated = truncated or normal.truncated
        for i, value in enumerate(report.coordinates(normal.remainder)):
            columns[i][k] = value
        g = MultiPoly.zero(g.variables)
        for j, a in enumerate(normal.quotients):
            g = g + a.partial(j)
        steps = k + 1
        if truncated and steps >= certified_precision(precision, context, True):
            break

    certified = certified_precision(precision, context, truncated)
    if certified < 1:
        raise DegreeBoundExceeded(
            f"degree bound {context.degree_bound} is too small to certify any s-order "
            f"(determinacy degree {report.determinacy_degree})"
        )
    if certified < precision:
        logger.info(f"Reduction truncated above degree {context.degree_bound}; certified s-precision {certified}")
    logger.debug(f"Reduced form in {steps} steps")
    return BrieskornElement(
        [TruncatedSeries("s", 0, column[:certified], certified) for column in columns], report
    )


def t_matrix(f: MultiPoly, context: ReductionContext, precision: int, workers: Optional[int] = None) -> TMatrix:
    """Column j is reduce_to_basis(f * m_j dx); columns reduce independently"""
    if context.f != f:
        raise BasisMismatch(f"context was computed for {context.f}, not {f}")
    report = context.report
    forms = [PolyForm.top(f.mul_monomial(m)) for m in report.basis_monomials]
    workers = workers or Config.WORKERS

    if workers > 1 and len(forms) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            columns = list(executor.map(lambda form: reduce_to_basis(form, context, precision), forms))
    else:
        columns = [reduce_to_basis(form, context, precision) for form in forms]

    common = min(column.precision for column in columns)
    matrix = SeriesMatrix.from_columns([column.truncate(common).coords for column in columns])
    logger.info(f"t-matrix of size {report.mu} at s-precision {common}")
    return TMatrix(matrix, f, report)


def microlocal_apply(t: TMatrix, c: BrieskornElement) -> BrieskornElement:
    """t acting on coordinates: T(s) c(s) + s^2 c'(s)"""
    if c.basis_ref.basis_monomials != t.basis_ref.basis_monomials:
        raise BasisMismatch("element and t-matrix refer to different monomial bases")
    product = t.matrix.apply(list(c.coords))
    correction = c.derivative().shift(2)
    result = [p + q for p, q in zip(product, correction.coords)]
    precision = c.precision - 1
    return BrieskornElement([r.truncate(min(precision, r.precision)) for r in result], t.basis_ref)


def s_multiply_form(context: ReductionContext, omega: PolyForm, axis: int = 0) -> PolyForm:
    """A top form representing s [omega]: df ^ (a primitive of omega)"""
    return df_wedge(context.f, integrate_top(omega, axis))


def qh_exponents(report: SingularityReport) -> List[Fraction]:
    """alpha_i = sum_k (e_k(m_i) + 1) w_k for each basis monomial"""
    if report.weights is None:
        raise NotQuasiHomogeneous("f has no quasi-homogeneous weights")
    return [sum(((e + 1) * w for e, w in zip(m, report.weights)), Fraction(0)) for m in report.basis_monomials]


def gm_connection_qh(f: MultiPoly, context: ReductionContext, precision: int) -> FormalMeromorphicConnection:
    """Gauss-Manin connection diag((alpha_i - 1)/t) in the basis {m_i dx}"""
    if context.f != f:
        raise BasisMismatch(f"context was computed for {context.f}, not {f}")
    if context.report.weights is None:
        raise NotQuasiHomogeneous(f"{f} is not quasi-homogeneous; no exact connection matrix is available")
    diagonal = [TruncatedSeries.monomial("t", -1, alpha - 1, precision) for alpha in qh_exponents(context.report)]
    return FormalMeromorphicConnection(context.report.basis_strings(), SeriesMatrix.diagonal(diagonal, precision))


class SpectralData(NamedTuple):
    a0: sympy.Matrix
    a1: sympy.Matrix
    nilpotent_a0: bool
    exponents: Optional[List[Fraction]]


def spectral_first_order(t: TMatrix) -> SpectralData:
    """T(s) = A0 + A1 s + O(s^2); exponents only when A0 vanishes"""
    if t.precision < 2:
        raise ValueError(f"first-order spectral data needs s-precision >= 2, got {t.precision}")
    a0 = t.matrix.coefficient_matrix(0)
    a1 = t.matrix.coefficient_matrix(1)
    nilpotent = bool((a0 ** t.mu).is_zero_matrix)
    if not nilpotent:
        logger.warning(f"A0 is not nilpotent for {t.f}; the degree bound is probably too small")
    exponents = None
    if a0.is_zero_matrix:
        exponents, cofactor = rational_roots(char_poly(a1))
        if cofactor.degree() > 0:
            logger.warning(f"A1 has irrational eigenvalues (factor {cofactor}); only rational exponents reported")
    return SpectralData(a0, a1, nilpotent, exponents)


def det_valuation(t: TMatrix) -> Optional[int]:
    """s-valuation of det T(s), or None when it vanishes at the available precision"""
    det = t.matrix.determinant()
    return None if det.is_zero() else det.valuation


class TMatrixResult(NamedTuple):
    context: ReductionContext
    tmatrix: TMatrix


def required_degree_bound(precision: int, context: ReductionContext) -> int:
    """Smallest D at which truncated reductions still certify s-precision `precision`"""
    return precision * (context.report.determinacy_degree + 1) - 1


def certified_t_matrix(f: MultiPoly, context: ReductionContext, precision: int,
                       workers: Optional[int] = None,
                       known: Sequence[ReductionContext] = ()) -> TMatrixResult:
    """t_matrix at the requested s-precision, raising the degree bound when truncation costs precision"""
    tmatrix = t_matrix(f, context, precision, workers)
    if tmatrix.precision >= precision:
        return TMatrixResult(context, tmatrix)

    needed = required_degree_bound(precision, context)
    if needed > Config.MAX_PREC_X:
        logger.warning(
            f"s-precision {precision} needs degree bound {needed}, above GM_MAX_PREC_X={Config.MAX_PREC_X}; "
            f"reporting s-precision {tmatrix.precision}"
        )
        return TMatrixResult(context, tmatrix)

    logger.warning(
        f"Degree bound {context.degree_bound} certifies s-precision {tmatrix.precision} only; "
        f"recomputing with degree bound {needed}"
    )
    wider = next((c for c in known if c.degree_bound == needed), None) or singularity_context(f, needed)
    return TMatrixResult(wider, t_matrix(f, wider, precision, workers))


def stable_t_matrix(f: MultiPoly, degree_bound: Optional[int], precision: int,
                    margin: Optional[int] = None, workers: Optional[int] = None,
                    context: Optional[ReductionContext] = None,
                    wide_context: Optional[ReductionContext] = None) -> TMatrixResult:
    """
    t-matrix at (D, N), cross-checked against (D + margin, N + margin).

    Contexts already computed by the caller are reused when their degree
    bounds match.
    """
    margin = Config.STABILITY_MARGIN if margin is None else margin
    if context is None:
        context = singularity_context(f, degree_bound)
    known = [wide_context] if wide_context is not None else []
    context, tmatrix = certified_t_matrix(f, context, precision, workers, known)

    if wide_context is None or wide_context.degree_bound != context.degree_bound + margin:
        wide_context = singularity_context(f, context.degree_bound + margin)
    if wide_context.report.mu != context.report.mu:
        raise UnstableTruncation("mu", f"{context.report.mu} vs {wide_context.report.mu}")
    if wide_context.report.basis_monomials != context.report.basis_monomials:
        raise UnstableTruncation("basis")
    wide = t_matrix(f, wide_context, precision + margin, workers)
    common = min(tmatrix.precision, wide.precision)
    if not tmatrix.matrix.agrees_with(wide.matrix, common):
        raise UnstableTruncation("t_matrix", f"disagreement below s^{common}")
    logger.info(f"t-matrix stable under D+{margin}, N+{margin} (compared to s^{common})")
    return TMatrixResult(context, tmatrix)
