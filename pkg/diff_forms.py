"""
Polynomial differential forms on Q^(n+1).

The volume form is dx_0 ^ ... ^ dx_n and dx^_j denotes the n-form with dx_j
omitted, so that df ^ dx^_j = (-1)^j (df/dx_j) dx_0 ^ ... ^ dx_n.
"""

import logging
from typing import Dict, NamedTuple, Sequence, Tuple

from errors import BasisMismatch, DegreeOverflow, TopDegree
from local_basis import StandardBasis, mora_normal_form
from series_core import MultiPoly

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]


def _permutation_sign(sequence: Sequence[int]) -> int:
    inversions = sum(1 for i in range(len(sequence)) for j in range(i + 1, len(sequence)) if sequence[i] > sequence[j])
    return -1 if inversions % 2 else 1


class PolyForm:
    """A p-form: strictly increasing index tuples mapped to nonzero polynomial coefficients."""

    __slots__ = ("variables", "degree", "_components")

    def __init__(self, variables: Sequence[str], degree: int, components: Dict[Index, MultiPoly] = None):
        self.variables = tuple(variables)
        self.degree = degree
        n1 = len(self.variables)
        if not 0 <= degree <= n1:
            raise DegreeOverflow(f"form degree {degree} outside 0..{n1}")
        cleaned: Dict[Index, MultiPoly] = {}
        for index, coefficient in (components or {}).items():
            index = tuple(index)
            if len(index) != degree or any(b <= a for a, b in zip(index, index[1:])):
                raise ValueError(f"index {index} is not a strictly increasing {degree}-tuple")
            if any(not 0 <= i < n1 for i in index):
                raise ValueError(f"index {index} out of range for {n1} variables")
            if coefficient.variables != self.variables:
                raise ValueError(f"coefficient variables {coefficient.variables} differ from {self.variables}")
            if not coefficient.is_zero():
                cleaned[index] = coefficient
        self._components = cleaned

    @classmethod
    def zero(cls, variables: Sequence[str], degree: int) -> "PolyForm":
        return cls(variables, degree)

    @classmethod
    def function(cls, poly: MultiPoly) -> "PolyForm":
        return cls(poly.variables, 0, {(): poly})

    @classmethod
    def top(cls, poly: MultiPoly) -> "PolyForm":
        """poly * dx_0 ^ ... ^ dx_n"""
        n1 = poly.nvars
        return cls(poly.variables, n1, {tuple(range(n1)): poly})

    @classmethod
    def hat(cls, poly: MultiPoly, j: int) -> "PolyForm":
        """poly * dx^_j"""
        n1 = poly.nvars
        return cls(poly.variables, n1 - 1, {tuple(k for k in range(n1) if k != j): poly})

    @classmethod
    def differential(cls, variables: Sequence[str], i: int, poly: MultiPoly = None) -> "PolyForm":
        if poly is None:
            poly = MultiPoly.constant(variables, 1)
        return cls(variables, 1, {(i,): poly})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self._components

    def is_top(self) -> bool:
        return self.degree == self.nvars

    def components(self) -> Dict[Index, MultiPoly]:
        return dict(self._components)

    def component(self, index: Index) -> MultiPoly:
        return self._components.get(tuple(index), MultiPoly.zero(self.variables))

    def top_coefficient(self) -> MultiPoly:
        if not self.is_top():
            raise ValueError(f"a {self.degree}-form is not a top form on {self.nvars} variables")
        return self.component(tuple(range(self.nvars)))

    def _check(self, other: "PolyForm"):
        if other.variables != self.variables or other.degree != self.degree:
            raise ValueError("forms of different degree or variables cannot be added")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check(other)
        components = dict(self._components)
        for index, coefficient in other._components.items():
            components[index] = components.get(index, MultiPoly.zero(self.variables)) + coefficient
        return PolyForm(self.variables, self.degree, components)

    def __neg__(self):
        return PolyForm(self.variables, self.degree, {i: -c for i, c in self._components.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def multiply(self, poly) -> "PolyForm":
        """Multiply every coefficient by a polynomial or rational"""
        return PolyForm(self.variables, self.degree, {i: c * poly for i, c in self._components.items()})

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.variables, self.degree, self._components) == (other.variables, other.degree, other._components)

    def __hash__(self):
        return hash((self.variables, self.degree, frozenset(self._components.items())))

    def __repr__(self):
        if self.is_zero():
            return f"PolyForm(0, degree={self.degree})"
        parts = []
        for index in sorted(self._components):
            basis = "^".join(f"d{self.variables[i]}" for i in index) or "1"
            parts.append(f"({self._components[index]})*{basis}")
        return f"PolyForm({' + '.join(parts)})"


def exterior_d(omega: PolyForm) -> PolyForm:
    if omega.is_top():
        raise TopDegree(f"d of a top form ({omega.degree}-form on {omega.nvars} variables) is not defined")
    components: Dict[Index, MultiPoly] = {}
    zero = MultiPoly.zero(omega.variables)
    for index, coefficient in omega.components().items():
        for i in range(omega.nvars):
            if i in index:
                continue
            partial = coefficient.partial(i)
            if partial.is_zero():
                continue
            position = sum(1 for k in index if k < i)
            target = tuple(sorted(index + (i,)))
            term = partial if position % 2 == 0 else -partial
            components[target] = components.get(target, zero) + term
    return PolyForm(omega.variables, omega.degree + 1, components)


def wedge(omega: PolyForm, eta: PolyForm) -> PolyForm:
    if omega.variables != eta.variables:
        raise ValueError("forms over different variables cannot be wedged")
    degree = omega.degree + eta.degree
    if degree > omega.nvars:
        raise DegreeOverflow(f"{omega.degree}-form ^ {eta.degree}-form exceeds top degree {omega.nvars}")
    components: Dict[Index, MultiPoly] = {}
    zero = MultiPoly.zero(omega.variables)
    for i1, c1 in omega.components().items():
        for i2, c2 in eta.components().items():
            if set(i1) & set(i2):
                continue
            merged = i1 + i2
            product = c1 * c2
            if _permutation_sign(merged) < 0:
                product = -product
            target = tuple(sorted(merged))
            components[target] = components.get(target, zero) + product
    return PolyForm(omega.variables, degree, components)


def df_wedge(f: MultiPoly, omega: PolyForm) -> PolyForm:
    return wedge(exterior_d(PolyForm.function(f)), omega)


def integrate_top(omega: PolyForm, axis: int = 0) -> PolyForm:
    """An n-form eta with d(eta) = omega: (-1)^axis (integral of g dx_axis) dx^_axis"""
    g = omega.top_coefficient()
    primitive = g.antiderivative(axis)
    if axis % 2:
        primitive = -primitive
    return PolyForm.hat(primitive, axis)


class Division(NamedTuple):
    eta: PolyForm
    remainder: MultiPoly
    truncated: bool


def divide_by_df(f: MultiPoly, omega: PolyForm, basis: StandardBasis) -> Division:
    """
    Gelfand-Leray division: omega = df ^ eta + r dx with r reduced by the
    standard basis. When r = 0, eta is the form omega/df.
    """
    if basis.f != f:
        raise BasisMismatch(f"standard basis was computed for {basis.f}, not {f}")
    g = omega.top_coefficient()
    if g.is_zero():
        return Division(PolyForm.zero(f.variables, f.nvars - 1), MultiPoly.zero(f.variables), False)
    normal = mora_normal_form(g, basis)
    eta = PolyForm.zero(f.variables, f.nvars - 1)
    for j, a in enumerate(normal.quotients):
        if a.is_zero():
            continue
        eta = eta + PolyForm.hat(a if j % 2 == 0 else -a, j)
    if normal.truncated:
        logger.debug(f"Division of {g} by df dropped terms above degree {basis.degree_bound}")
    return Division(eta, normal.remainder, normal.truncated)


def recombine(f: MultiPoly, division: Division) -> PolyForm:
    """df ^ eta + r dx"""
    return df_wedge(f, division.eta) + PolyForm.top(division.remainder)
