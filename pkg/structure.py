"""
Structure Analysis Module

Invariants read off a Pommaret basis: Krull dimension, depth, the
Cohen-Macaulay test with Hironaka decomposition and Noether data, primary
decomposition and sequential chain of quasi-stable monomial ideals,
saturation, Trung's invariants and the regularity bounds for quasi-stable
ideals.

Variable indices are 0-based. Depth and projective dimension are reported
for the quotient P/I unless a name says otherwise.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from algebra import Exponent, ModuleElement, cls, lcm_exponents, set_entry
from completion import InvolutiveBasis, involutive_head_autoreduce, is_quasi_stable, monomial_pommaret_basis
from config import Limits
from decomposition import Cone, ConeDecomposition
from divisions import DivisionKind
from errors import AlgebraError, InhomogeneousError, NotQuasiStableError
from monomial import (colon_variable_power, exponents_in_variables, ideal_intersection,
                      ideal_product, ideal_sum, in_ideal, max_variable_degree, minimal_generators, same_ideal)

logger = logging.getLogger(__name__)


def _covers(lead: Sequence[Exponent], n: int, q: int, first: int) -> bool:
    """<lead, x_0..x_{first-1}>_q = P_q, i.e. every degree-q monomial in x_first.. lies in lead."""
    return all(in_ideal(mu, lead) for mu in exponents_in_variables(n, q, range(first, n)))


def _is_unit(lead: Sequence[Exponent]) -> bool:
    return any(sum(mu) == 0 for mu in lead)


def krull_dimension(basis: InvolutiveBasis) -> Tuple[int, List[int]]:
    """Dimension D of P/I with the strongly independent set x_0..x_{D-1}."""
    n = basis.nvars
    lead = minimal_generators(basis.leading_exponents)
    if not lead:
        return n, list(range(n))
    if _is_unit(lead):
        return -1, []
    q = basis.degree
    for i in range(n + 1):
        if _covers(lead, n, q, i):
            return i, list(range(i))
    return n, list(range(n))


@dataclass
class DepthData:
    ideal_depth: int
    regular_sequence: List[int]
    quotient_depth: int


def depth(basis: InvolutiveBasis) -> DepthData:
    """depth I = minimal class (1-based) with the regular sequence x_0..x_{d-1}."""
    if not basis.order.class_respecting:
        raise AlgebraError("Depth needs a class respecting term order")
    n = basis.nvars
    if not basis.generators:
        return DepthData(ideal_depth=n, regular_sequence=list(range(n)), quotient_depth=n)
    d = basis.min_class() + 1
    return DepthData(ideal_depth=d, regular_sequence=list(range(d)), quotient_depth=d - 1)


@dataclass
class NoetherData:
    """P/I as a finite module over k[x_0..x_{D-1}]."""
    dimension: int
    variables: List[int]
    module_generators: List[Exponent]


def noether_normalisation(basis: InvolutiveBasis) -> NoetherData:
    """Standard monomials in x_D..x_{n-1} generate P/I over k[x_0..x_{D-1}]."""
    n = basis.nvars
    D, variables = krull_dimension(basis)
    lead = minimal_generators(basis.leading_exponents)
    if D < 0:
        return NoetherData(dimension=D, variables=[], module_generators=[])
    if D == n:
        return NoetherData(dimension=D, variables=variables, module_generators=[(0,) * n])
    q = basis.degree
    gens = [mu for s in range(q + 1) for mu in exponents_in_variables(n, s, range(D, n)) if not in_ideal(mu, lead)]
    return NoetherData(dimension=D, variables=variables, module_generators=gens)


def hironaka_decomposition(basis: InvolutiveBasis, quotient_depth: int) -> ConeDecomposition:
    """Standard monomials free of x_0..x_{t-1}, each over k[x_0..x_{t-1}] with t the depth of P/I."""
    n = basis.nvars
    lead = minimal_generators(basis.leading_exponents)
    t = quotient_depth
    mult = frozenset(range(t))
    if not lead:
        return ConeDecomposition([Cone((0,) * n, frozenset(range(n)))], 'hironaka', n)
    q = basis.degree
    cones = [Cone(mu, mult) for s in range(q + 1)
             for mu in exponents_in_variables(n, s, range(t, n)) if not in_ideal(mu, lead)]
    return ConeDecomposition(cones, 'hironaka', n)


@dataclass
class CohenMacaulayData:
    cohen_macaulay: bool
    hironaka: Optional[ConeDecomposition]
    noether: NoetherData


def cohen_macaulay(basis: InvolutiveBasis) -> CohenMacaulayData:
    """P/I is Cohen-Macaulay iff <H, x_0..x_{d-2}>_q = P_q."""
    noether = noether_normalisation(basis)
    if not basis.generators:
        return CohenMacaulayData(True, hironaka_decomposition(basis, basis.nvars), noether)
    lead = minimal_generators(basis.leading_exponents)
    if _is_unit(lead):
        return CohenMacaulayData(True, None, noether)
    t = depth(basis).quotient_depth
    flag = _covers(lead, basis.nvars, basis.degree, t)
    hironaka = hironaka_decomposition(basis, t) if flag else None
    return CohenMacaulayData(flag, hironaka, noether)


@dataclass
class PrimaryComponent:
    """A <x_k..x_{n-1}>-primary monomial ideal (k 0-based; k = index - 1)."""
    index: int
    generators: List[Exponent]
    prime: Tuple[int, ...]
    powers: Dict[int, int] = field(default_factory=dict)


@dataclass
class PrimaryDecomposition:
    components: List[PrimaryComponent]
    sequential_chain: List[List[Exponent]]


def _colon_chain_entry(gens: List[Exponent], k: int, n: int) -> List[Exponent]:
    """I : x_k^inf with 1-based k; k = 0 gives I and k = n + 1 gives P."""
    if k == 0:
        return gens
    if k > n:
        return [(0,) * n]
    return colon_variable_power(gens, k - 1)


def _monomial_dimension(gens: List[Exponent], n: int) -> int:
    """Least i with a pure power of every x_j, j >= i, among the generators (quasi-stable ideals)."""
    powers = {cls(g) for g in gens if sum(g) == max(g)}
    i = n
    while i > 0 and (i - 1) in powers:
        i -= 1
    return i


def sequential_chain(generators: Sequence[Exponent], nvars: int) -> List[List[Exponent]]:
    """I_0 = I, I_{k+1} = I_k : x_c^inf with c the minimal class of I_k, up to P."""
    current = minimal_generators(generators)
    chain = [current]
    if not current:
        return chain
    while not _is_unit(current):
        c = min(cls(g) for g in current)
        current = colon_variable_power(current, c)
        chain.append(current)
    return chain


def primary_decomposition(generators: Sequence[Exponent], nvars: int) -> PrimaryDecomposition:
    """Irredundant primary decomposition of a quasi-stable monomial ideal."""
    gens = minimal_generators(generators)
    n = nvars
    if _is_unit(gens):
        return PrimaryDecomposition([], [gens])
    if not gens:
        return PrimaryDecomposition([PrimaryComponent(index=n, generators=[], prime=())], [gens])
    check = is_quasi_stable(gens)
    if not check.stable:
        raise NotQuasiStableError(f"Ideal is not quasi-stable (colon chain fails at index {check.failing_index})",
                                  witness=check.failing_index)

    d = min(cls(g) for g in gens)  # depth of P/I
    D = _monomial_dimension(gens, n)
    powers = {j: max_variable_degree(gens, j - 1) for j in range(1, D + 1)}
    chain = [_colon_chain_entry(gens, k, n) for k in range(n + 2)]

    components = []
    for k in range(d, D + 1):
        if same_ideal(chain[k], chain[k + 1]):
            continue
        extra = [set_entry((0,) * n, j - 1, powers[j]) for j in range(k + 1, D + 1)]
        q_k = ideal_sum(chain[k], extra)
        components.append(PrimaryComponent(index=k, generators=q_k, prime=tuple(range(k, n)),
                                           powers={j: powers[j] for j in range(k + 1, D + 1)}))

    intersection = components[0].generators
    for comp in components[1:]:
        intersection = ideal_intersection(intersection, comp.generators)
    if not same_ideal(intersection, gens):
        raise AssertionError("Primary components do not intersect to the ideal")
    return PrimaryDecomposition(components, sequential_chain(gens, n))


@dataclass
class SaturationResult:
    basis: InvolutiveBasis
    satiety: Optional[int]

    @property
    def saturated(self) -> bool:
        return self.satiety is None


def _divide_by_power(h: ModuleElement, k: int, e: int) -> ModuleElement:
    terms = {}
    for (mu, comp), c in h.terms.items():
        if mu[k] < e:
            raise AlgebraError("Generator is not divisible by the required variable power")
        terms[(set_entry(mu, k, mu[k] - e), comp)] = c
    return ModuleElement(terms, h.nvars, h.rank)


def saturate(basis: InvolutiveBasis) -> SaturationResult:
    """Saturation from a homogeneous Pommaret basis.

    Class-0 generators are divided by the x_0 power of their leading term.
    The satiety is the maximal degree of a class-0 generator.
    """
    if not basis.is_homogeneous():
        raise InhomogeneousError("Saturation needs a homogeneous basis")
    if basis.order.kind != 'degrevlex':
        raise AlgebraError("Saturation needs the degrevlex order")
    weak, satiety = [], None
    for h, mu in zip(basis.generators, basis.leading_exponents):
        if cls(mu) == 0 and mu[0] > 0:
            weak.append(_divide_by_power(h, 0, mu[0]))
            satiety = max(satiety or 0, h.degree)
        else:
            weak.append(h)
    strong = involutive_head_autoreduce(weak, DivisionKind.POMMARET, basis.order)
    result = InvolutiveBasis.build(strong, DivisionKind.POMMARET, basis.order, nvars=basis.nvars, rank=basis.rank)
    return SaturationResult(result, satiety)


@dataclass
class TrungInvariants:
    values: List[int]
    regularity: int
    ideal_depth: int
    scanned: List[int]

    def from_ideal_depth(self) -> List[int]:
        """c_d..c_D with d the depth of I."""
        return self.values[self.ideal_depth:]

    def from_quotient_depth(self) -> List[int]:
        """c_{d-1}..c_D, the range outside which the values vanish."""
        return self.values[max(self.ideal_depth - 1, 0):]


def _trung_scan(gens: List[Exponent], n: int, D: int, bound: int) -> List[int]:
    """c_j from the elimination ideals and their saturations by degree scan."""
    values = []
    for j in range(D + 1):
        elim = [g for g in gens if all(e == 0 for e in g[:j])]
        last = -1
        if j < D:
            saturated = minimal_generators(set_entry(g, j, 0) for g in elim)
            for s in range(bound + 1):
                if any(in_ideal(mu, saturated) and not in_ideal(mu, elim)
                       for mu in exponents_in_variables(n, s, range(j, n))):
                    last = s
        else:
            for s in range(bound + 1):
                if any(not in_ideal(mu, elim) for mu in exponents_in_variables(n, s, range(j, n))):
                    last = s
        values.append(last + 1)
    return values


def trung_invariants(generators: Sequence[Exponent], nvars: int, limits: Optional[Limits] = None) -> TrungInvariants:
    """c_0..c_D from Pommaret classes, cross-checked by a degree scan."""
    gens = minimal_generators(generators)
    n = nvars
    check = is_quasi_stable(gens)
    if not check.stable:
        raise NotQuasiStableError(f"Some c_j is infinite (colon chain fails at index {check.failing_index})",
                                  witness=check.failing_index)
    if not gens:
        return TrungInvariants(values=[0] * (n + 1), regularity=0, ideal_depth=n, scanned=[0] * (n + 1))
    basis = monomial_pommaret_basis(gens, n, limits=limits)
    D = _monomial_dimension(gens, n)
    classes = basis.classes()
    degrees = [sum(mu) for mu in basis.leading_exponents]
    values = []
    for j in range(D + 1):
        if j < D:
            selected = [deg for c, deg in zip(classes, degrees) if c == j]
        else:
            selected = [deg for c, deg in zip(classes, degrees) if c >= j]
        values.append(max(selected, default=0))

    bounds = regularity_bounds(gens, n)
    scanned = _trung_scan(gens, n, D, max(bounds.lcm_bound, basis.degree) + 1)
    if scanned != values:
        raise AssertionError(f"Trung invariants disagree: {values} from classes, {scanned} from the scan")
    ideal_depth = min(classes) + 1
    return TrungInvariants(values=values, regularity=max(values), ideal_depth=ideal_depth, scanned=scanned)


@dataclass
class RegularityBounds:
    lcm_bound: int
    degree_bound: int
    regularity: Optional[int] = None


def regularity_bounds(generators: Sequence[Exponent], nvars: int) -> RegularityBounds:
    """|lambda| + d - n with x^lambda the lcm of the minimal generators, and (n-d+1)(q-1)+1."""
    gens = minimal_generators(generators)
    n = nvars
    if not gens:
        return RegularityBounds(0, 0)
    lam = gens[0]
    for g in gens[1:]:
        lam = lcm_exponents(lam, g)
    d = min(cls(g) for g in gens) + 1
    q = max(sum(g) for g in gens)
    return RegularityBounds(lcm_bound=sum(lam) + d - n, degree_bound=(n - d + 1) * (q - 1) + 1)


def irreducible_regularity(component: Sequence[Exponent]) -> int:
    """reg <x_i1^l1, ..., x_ik^lk> = sum l - k + 1."""
    component = list(component)
    if not component:
        return 0
    return sum(sum(g) for g in component) - len(component) + 1


def monomial_regularity(generators: Sequence[Exponent], nvars: int, limits: Optional[Limits] = None) -> int:
    """Degree of the Pommaret basis of a quasi-stable monomial ideal."""
    return monomial_pommaret_basis(generators, nvars, limits=limits).degree


@dataclass
class OperationBounds:
    regularities: Dict[str, int]

    @property
    def holds(self) -> bool:
        r = self.regularities
        return (r['sum'] <= max(r['first'], r['second'])
                and r['product'] <= r['first'] + r['second']
                and r['intersection'] <= max(r['first'], r['second']))


def sum_product_intersection_bounds(first: Sequence[Exponent], second: Sequence[Exponent], nvars: int,
                                    limits: Optional[Limits] = None) -> OperationBounds:
    """Regularities of I, J, I+J, IJ and I cap J for quasi-stable monomial ideals."""
    first, second = minimal_generators(first), minimal_generators(second)
    ideals = {
        'first': first,
        'second': second,
        'sum': ideal_sum(first, second),
        'product': ideal_product(first, second),
        'intersection': ideal_intersection(first, second),
    }
    return OperationBounds({name: monomial_regularity(gens, nvars, limits) for name, gens in ideals.items()})


@dataclass
class StructureReport:
    nvars: int
    dimension: int
    depth: int
    quotient_projective_dimension: int
    regularity: int
    satiety: Optional[int]
    cohen_macaulay: bool
    regular_sequence: List[int]
    independent_set: List[int]
    noether_rank: int
    leading_ideal_only: bool = False
    trivial: bool = False


def structure_report(basis: InvolutiveBasis) -> StructureReport:
    """Invariants of P/I from a Pommaret basis in delta-regular coordinates."""
    n = basis.nvars
    homogeneous = basis.is_homogeneous()
    lead = minimal_generators(basis.leading_exponents)
    if not basis.generators:
        return StructureReport(n, n, n, 0, 0, None, True, list(range(n)), list(range(n)), n,
                               leading_ideal_only=False)
    if _is_unit(lead):
        return StructureReport(n, -1, -1, 0, 0, None, True, [], [], 0, not homogeneous, trivial=True)
    D, independent = krull_dimension(basis)
    depth_data = depth(basis)
    cm = cohen_macaulay(basis)
    satiety = saturate(basis).satiety if homogeneous else None
    report = StructureReport(
        nvars=n,
        dimension=D,
        depth=depth_data.quotient_depth,
        quotient_projective_dimension=n - depth_data.quotient_depth,
        regularity=basis.degree,
        satiety=satiety,
        cohen_macaulay=cm.cohen_macaulay,
        regular_sequence=depth_data.regular_sequence,
        independent_set=independent,
        noether_rank=D,
        leading_ideal_only=not homogeneous,
    )
    if report.depth > report.dimension:
        raise AssertionError(f"depth {report.depth} exceeds dimension {report.dimension}")
    logger.debug(f"Structure: dim {D}, depth {report.depth}, reg {report.regularity}")
    return report
