"""
Local standard bases of Jacobian ideals.

All computations take place in Q[x]/m^(D+1), m the maximal ideal at the
origin and D the degree bound. The negative degree reverse lexicographic
order is a well-order on the finitely many monomials of degree <= D, so
plain division terminates there. Terms pushed above degree D are dropped and
the drop is reported through a ``truncated`` flag, which downstream code
turns into a certified precision.
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import sympy

from config import Config
from errors import DegreeBoundExceeded, NonIsolated, NotSingular
from series_core import Exponent, MultiPoly, format_monomial, to_rational

logger = logging.getLogger(__name__)


class LocalOrder:
    """Negative degree reverse lexicographic order: 1 is the largest monomial."""

    kind = "negdegrevlex"

    @staticmethod
    def key(exponent: Exponent) -> Tuple:
        # larger key = larger monomial
        return (-sum(exponent), tuple(-e for e in reversed(exponent)))

    def greater(self, a: Exponent, b: Exponent) -> bool:
        return self.key(a) > self.key(b)

    def leading_exponent(self, exponents) -> Exponent:
        return max(exponents, key=self.key)

    def leading_term(self, poly: MultiPoly) -> Tuple[Exponent, Fraction]:
        if poly.is_zero():
            raise ValueError("the zero polynomial has no leading term")
        lead = self.leading_exponent(e for e, _ in poly.items())
        return lead, poly.coefficient(lead)

    def basis_order(self, exponents) -> List[Exponent]:
        """Increasing total degree, ties by decreasing local order (1 first)"""
        return sorted(exponents, key=self.key, reverse=True)


LOCAL_ORDER = LocalOrder()


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _minus(b: Exponent, a: Exponent) -> Exponent:
    return tuple(y - x for x, y in zip(a, b))


def _lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


class Generator(NamedTuple):
    poly: MultiPoly
    lead: Exponent
    lead_coefficient: Fraction
    ecart: int
    cofactors: Tuple[MultiPoly, ...]  # poly = sum cofactors[j] * df/dx_j  mod m^(D+1)


class NormalForm(NamedTuple):
    quotients: List[MultiPoly]  # with respect to the partials df/dx_j
    remainder: MultiPoly
    truncated: bool


def _make_generator(poly: MultiPoly, cofactors: Sequence[MultiPoly]) -> Generator:
    lead, coefficient = LOCAL_ORDER.leading_term(poly)
    return Generator(poly, lead, coefficient, poly.degree() - sum(lead), tuple(cofactors))


class StandardBasis:
    """
    Standard basis of the Jacobian ideal of f, certified up to x-degree
    ``degree_bound``. Every generator remembers its cofactors with respect to
    the partial derivatives of f.
    """

    def __init__(self, f: MultiPoly, partials: Sequence[MultiPoly], generators: Sequence[Generator],
                 degree_bound: int, truncated: bool, pairs_processed: int = 0):
        self.f = f
        self.variables = f.variables
        self.partials = tuple(partials)
        self.degree_bound = degree_bound
        self._generators = tuple(generators)
        self.truncated = truncated
        self.pairs_processed = pairs_processed

    @property
    def generators(self) -> List[MultiPoly]:
        return [g.poly for g in self._generators]

    @property
    def leading_terms(self) -> List[Exponent]:
        return [g.lead for g in self._generators]

    def generator_records(self) -> Tuple[Generator, ...]:
        return self._generators

    def is_standard(self, exponent: Exponent) -> bool:
        return not any(_divides(g.lead, exponent) for g in self._generators)

    def __len__(self):
        return len(self._generators)

    def __repr__(self):
        leads = ", ".join(format_monomial(self.variables, g.lead) for g in self._generators)
        return f"StandardBasis(f={self.f}, leads=[{leads}], D={self.degree_bound})"


def _division(g_terms: Dict[Exponent, Fraction], generators: Sequence[Generator], degree_bound: int):
    """
    Full reduction of a polynomial (as a term dict) by the generators.

    Returns per-generator quotient term dicts, the remainder term dict and
    whether any term above the degree bound was dropped.
    """
    truncated = False
    work = {}
    for e, c in g_terms.items():
        if sum(e) > degree_bound:
            truncated = True
        else:
            work[e] = c
    quotients: List[Dict[Exponent, Fraction]] = [{} for _ in generators]
    remainder: Dict[Exponent, Fraction] = {}

    while work:
        lead = LOCAL_ORDER.leading_exponent(work)
        coefficient = work.pop(lead)
        choice = None
        for index, gen in enumerate(generators):
            if _divides(gen.lead, lead) and (choice is None or gen.ecart < generators[choice].ecart):
                choice = index
        if choice is None:
            remainder[lead] = coefficient
            continue

        gen = generators[choice]
        shift = _minus(lead, gen.lead)
        factor = coefficient / gen.lead_coefficient
        q = quotients[choice]
        q[shift] = q.get(shift, 0) + factor
        for e, c in gen.poly.items():
            if e == gen.lead:
                continue
            target = tuple(a + b for a, b in zip(e, shift))
            if sum(target) > degree_bound:
                truncated = True
                continue
            value = work.get(target, 0) - factor * c
            if value:
                work[target] = value
            else:
                work.pop(target, None)

    return quotients, remainder, truncated


def _combine_cofactors(variables, quotients, generators, degree_bound, nvars):
    """Sum_k q_k * cofactors_k, truncated at the degree bound"""
    truncated = False
    combined = [MultiPoly.zero(variables) for _ in range(nvars)]
    for q_terms, gen in zip(quotients, generators):
        if not q_terms:
            continue
        q = MultiPoly(variables, q_terms)
        for j in range(nvars):
            if gen.cofactors[j].is_zero():
                continue
            product, dropped = q.mul_truncated(gen.cofactors[j], degree_bound)
            truncated = truncated or dropped
            combined[j] = combined[j] + product
    return combined, truncated


def jacobian_std_basis(f: MultiPoly, degree_bound: Optional[int] = None) -> StandardBasis:
    """Standard basis of (df/dx_0, ..., df/dx_n) in the local ring, certified to the degree bound"""
    if degree_bound is None:
        degree_bound = Config.default_degree_bound(f.degree())
    n = f.nvars
    origin = (0,) * n
    if f.constant_term():
        raise NotSingular(f"f(0) = {f.constant_term()}: the origin does not lie on the zero fiber")
    linear = [e for e, _ in f.items() if sum(e) == 1]
    if linear:
        names = ", ".join(format_monomial(f.variables, e) for e in linear)
        raise NotSingular(f"f has a nonzero linear part ({names}): the origin is a smooth point")
    if f.degree() > degree_bound + 1:
        raise DegreeBoundExceeded(f"deg f = {f.degree()} exceeds the degree bound {degree_bound} + 1")

    variables = f.variables
    partials = [f.partial(i) for i in range(n)]
    zero = MultiPoly.zero(variables)

    generators: List[Generator] = []
    for j, p in enumerate(partials):
        if p.is_zero():
            continue
        cofactors = [MultiPoly.constant(variables, 1) if k == j else zero for k in range(n)]
        generators.append(_make_generator(p, cofactors))

    truncated = False
    pairs = [(i, j) for j in range(len(generators)) for i in range(j)]
    processed = 0
    while pairs:
        pairs.sort(key=lambda ij: (sum(_lcm(generators[ij[0]].lead, generators[ij[1]].lead)), ij))
        i, j = pairs.pop(0)
        a, b = generators[i], generators[j]
        lcm = _lcm(a.lead, b.lead)
        if sum(lcm) > degree_bound:
            continue
        processed += 1

        shift_a, shift_b = _minus(lcm, a.lead), _minus(lcm, b.lead)
        fa, fb = Fraction(1) / a.lead_coefficient, Fraction(1) / b.lead_coefficient
        spoly = (a.poly.mul_monomial(shift_a, fa) - b.poly.mul_monomial(shift_b, fb))
        s_cofactors = [
            a.cofactors[k].mul_monomial(shift_a, fa) - b.cofactors[k].mul_monomial(shift_b, fb)
            for k in range(n)
        ]
        quotients, remainder, dropped = _division(spoly.terms(), generators, degree_bound)
        truncated = truncated or dropped
        if not remainder:
            continue

        reduced, dropped = _combine_cofactors(variables, quotients, generators, degree_bound, n)
        truncated = truncated or dropped
        cofactors = [(s_cofactors[k] - reduced[k]).truncated(degree_bound) for k in range(n)]
        new = _make_generator(MultiPoly(variables, remainder), cofactors)
        if new.lead == origin:
            raise NotSingular("the Jacobian ideal contains a unit: the origin is not a critical point")
        logger.debug(f"S-pair ({i}, {j}) added generator with lead {format_monomial(variables, new.lead)}")
        generators.append(new)
        pairs.extend((k, len(generators) - 1) for k in range(len(generators) - 1))

    logger.info(
        f"Standard basis of J({f}) has {len(generators)} generators "
        f"after {processed} S-pairs (D={degree_bound}, truncated={truncated})"
    )
    return StandardBasis(f, partials, generators, degree_bound, truncated, processed)


def mora_normal_form(g: MultiPoly, basis: StandardBasis) -> NormalForm:
    """
    Divide g by the standard basis: g = sum_j a_j * df/dx_j + r modulo m^(D+1),
    exactly when ``truncated`` is False. No term of r is divisible by a
    leading term of the basis; among admissible divisors the one of smallest
    ecart is used.
    """
    if g.variables != basis.variables:
        raise ValueError(f"polynomial in {g.variables} cannot be reduced by a basis in {basis.variables}")
    if g.degree() > basis.degree_bound:
        raise DegreeBoundExceeded(f"input of degree {g.degree()} exceeds the certified bound {basis.degree_bound}")

    records = basis.generator_records()
    quotients, remainder, truncated = _division(g.terms(), records, basis.degree_bound)
    combined, dropped = _combine_cofactors(basis.variables, quotients, records, basis.degree_bound, g.nvars)
    return NormalForm(combined, MultiPoly(basis.variables, remainder), truncated or dropped or basis.truncated)


class SingularityReport(NamedTuple):
    mu: int
    basis_monomials: List[Exponent]
    weights: Optional[List[Fraction]]
    determinacy_degree: int
    degree_bound: int
    variables: Tuple[str, ...]

    def basis_strings(self) -> List[str]:
        return [format_monomial(self.variables, e) for e in self.basis_monomials]

    def coordinates(self, remainder: MultiPoly) -> List[Fraction]:
        """Coordinates of a reduced polynomial in the monomial basis"""
        index = {e: i for i, e in enumerate(self.basis_monomials)}
        coords = [Fraction(0)] * self.mu
        for e, c in remainder.items():
            if e not in index:
                raise ValueError(f"{format_monomial(self.variables, e)} is not a standard monomial")
            coords[index[e]] = c
        return coords


def standard_monomials(basis: StandardBasis) -> Tuple[List[Exponent], int]:
    """
    Enumerate the staircase level by level. An empty level at degree d <= D
    shows m^d is contained in J + m^(D+1), hence in J by Nakayama.
    """
    n = len(basis.variables)
    level = [(0,) * n] if basis.is_standard((0,) * n) else []
    monomials: List[Exponent] = []
    for degree in range(basis.degree_bound + 1):
        if not level:
            return monomials, degree
        monomials.extend(level)
        successors = set()
        for e in level:
            for i in range(n):
                raised = e[:i] + (e[i] + 1,) + e[i + 1:]
                if basis.is_standard(raised):
                    successors.add(raised)
        level = sorted(successors)
    raise NonIsolated(basis.degree_bound)


def milnor_number(f: MultiPoly, degree_bound: Optional[int] = None,
                  basis: Optional[StandardBasis] = None) -> SingularityReport:
    """Milnor number, monomial basis of the Milnor algebra and quasi-homogeneous weights"""
    if basis is None:
        basis = jacobian_std_basis(f, degree_bound)
    monomials, determinacy = standard_monomials(basis)
    ordered = LOCAL_ORDER.basis_order(monomials)
    weights = quasihomogeneous_weights(f)
    logger.info(f"mu({f}) = {len(ordered)}, determinacy degree {determinacy}")
    return SingularityReport(len(ordered), ordered, weights, determinacy, basis.degree_bound, f.variables)


def quasihomogeneous_weights(f: MultiPoly) -> Optional[List[Fraction]]:
    """Unique weights w_i in (0, 1/2] with weighted degree 1 on every monomial of f, if any"""
    if f.is_zero():
        return None
    exponents = [e for e, _ in f.items()]
    system = sympy.Matrix([[sympy.Integer(x) for x in e] for e in exponents])
    rhs = sympy.ones(len(exponents), 1)
    try:
        solution, params = system.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    if params.shape[0]:
        weights = _weights_in_box(f, solution, list(params))
        if weights is None:
            return None
    else:
        weights = [to_rational(sympy.nsimplify(w)) for w in solution]
    if not all(0 < w <= Fraction(1, 2) for w in weights):
        return None

    euler = MultiPoly.zero(f.variables)
    for i, w in enumerate(weights):
        euler = euler + MultiPoly.variable(f.variables, i) * f.partial(i) * w
    assert euler == f, f"Euler identity fails for {f} with weights {weights}"
    return weights


def _weights_in_box(f: MultiPoly, solution: sympy.Matrix, params: List[sympy.Symbol]) -> Optional[List[Fraction]]:
    """
    The point of the affine family solution(params) inside [0, 1/2]^n when
    the box cuts it down to a single point. The intersection is a polytope,
    so it is a point exactly when it has one vertex.
    """
    half = sympy.Rational(1, 2)
    faces = [(i, bound) for i in range(len(solution)) for bound in (sympy.Integer(0), half)]
    vertices = set()
    for chosen in itertools.combinations(faces, len(params)):
        a, b = sympy.linear_eq_to_matrix([solution[i] - bound for i, bound in chosen], params)
        if a.det() == 0:
            continue
        point = solution.subs(dict(zip(params, a.LUsolve(b))))
        values = tuple(to_rational(sympy.nsimplify(w)) for w in point)
        if all(0 <= w <= Fraction(1, 2) for w in values):
            vertices.add(values)
    if len(vertices) != 1:
        logger.debug(f"Weight family for {f} meets the box in {len(vertices)} vertices")
        return None
    return list(vertices.pop())
