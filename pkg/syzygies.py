"""
Syzygy Module

Involutive Schreyer syzygies of an involutive basis: the L-ordering that
controls their leading terms, the syzygy basis built from involutive standard
representations, and for monomial Pommaret bases the tables Delta and Gamma
that give the differential and the product of the complex C = W (x) Lambda V
in closed form.

Elements of C are dictionaries {(alpha, ks): polynomial} where ks is a
strictly increasing tuple of variable indices standing for the wedge product
v_{k_1} ^ ... ^ v_{k_i}.
"""

import heapq
import logging
from dataclasses import dataclass
from itertools import product as cartesian
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ

from algebra import Exponent, ModuleElement, SchreyerOrder, Term, add_exponents, cls, quotient_exponent, unit
from completion import InvolutiveBasis, involutive_normal_form
from divisions import DivisionKind, involutive_divisor
from errors import AlgebraError, NotMonomialError

logger = logging.getLogger(__name__)

Label = Tuple[int, Tuple[int, ...]]
ComplexElement = Dict[Label, ModuleElement]


# L-ordering

def l_graph(basis: InvolutiveBasis) -> List[Tuple[int, int]]:
    """Edges a -> b where h_b is the involutive divisor of x_k lt(h_a), k non-multiplicative."""
    n = basis.nvars
    edges = []
    for a, (mu, comp) in enumerate(basis.leading_terms):
        for k in basis.non_multiplicative(a):
            b = involutive_divisor(basis.assignment, (add_exponents(mu, unit(n, k)), comp), basis.order)
            if b is not None and b != a:
                edges.append((a, b))
    return edges


def p_order_key(term: Term, index: int = 0) -> tuple:
    """Class ascending, then the reverse-lexicographic rule on exponents."""
    mu, comp = term
    return (cls(mu), tuple(reversed(mu)), comp, index)


def l_ordering(basis: InvolutiveBasis) -> List[int]:
    """Topological order of the L-graph as a permutation of generator indices.

    Pommaret bases use the explicit P-ordering, which is checked against the
    graph; other divisions are sorted by Kahn's algorithm with ties broken by
    the original position.
    """
    size = len(basis.generators)
    edges = l_graph(basis)

    if basis.division == DivisionKind.POMMARET:
        perm = sorted(range(size), key=lambda i: p_order_key(basis.leading_terms[i], i))
        position = {g: p for p, g in enumerate(perm)}
        for a, b in edges:
            if position[a] > position[b]:
                raise RuntimeError(f"P-ordering violates the L-graph edge {a} -> {b}")
        return perm

    successors: Dict[int, List[int]] = {i: [] for i in range(size)}
    indegree = [0] * size
    for a, b in edges:
        successors[a].append(b)
        indegree[b] += 1
    heap = [i for i in range(size) if indegree[i] == 0]
    heapq.heapify(heap)
    perm = []
    while heap:
        a = heapq.heappop(heap)
        perm.append(a)
        for b in successors[a]:
            indegree[b] -= 1
            if indegree[b] == 0:
                heapq.heappush(heap, b)
    if len(perm) != size:
        raise RuntimeError("L-graph of an involutive set contains a cycle")
    return perm


def reorder(basis: InvolutiveBasis, perm: Sequence[int]) -> InvolutiveBasis:
    return InvolutiveBasis.build([basis.generators[i] for i in perm], basis.division, basis.order,
                                 strong=basis.strong, nvars=basis.nvars, rank=basis.rank)


# syzygies

@dataclass
class SyzygyGenerator:
    """S_{alpha;k} = x_k e_parent - sum P_beta e_beta over the previous level."""
    label: Label
    parent: int
    variable: int
    element: ModuleElement

    @property
    def source(self) -> int:
        return self.label[0]

    @property
    def indices(self) -> Tuple[int, ...]:
        return self.label[1]


@dataclass
class SyzygyModule:
    generators: List[SyzygyGenerator]
    order: SchreyerOrder
    rank: int
    nvars: int
    division: DivisionKind = DivisionKind.POMMARET

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def elements(self) -> List[ModuleElement]:
        return [g.element for g in self.generators]

    @property
    def labels(self) -> List[Label]:
        return [g.label for g in self.generators]

    def as_basis(self) -> InvolutiveBasis:
        return InvolutiveBasis.build(self.elements, self.division, self.order, nvars=self.nvars, rank=self.rank)


def syzygy_basis(basis: InvolutiveBasis, labels: Optional[Sequence[Label]] = None) -> SyzygyModule:
    """Syzygies from the standard representations of all non-multiplicative products.

    The basis must be strong and L-ordered; the leading term of S_{a;k} under
    the induced Schreyer order is then x_k e_a, which is checked.
    """
    n = basis.nvars
    size = len(basis.generators)
    labels = list(labels) if labels is not None else [(i, ()) for i in range(size)]
    order = SchreyerOrder(basis.order, basis.leading_terms)
    generators = []

    for a, h in enumerate(basis.generators):
        for k in basis.non_multiplicative(a):
            remainder, representation = involutive_normal_form(h.mul_term(unit(n, k)), basis)
            if remainder:
                raise AlgebraError(f"Generator {a} times x{k + 1} does not reduce to zero; basis is not involutive")
            terms: Dict[Term, object] = {(unit(n, k), a): QQ.one}
            for b, poly in representation.items():
                for (mu, _), c in poly.terms.items():
                    key = (mu, b)
                    terms[key] = terms.get(key, QQ.zero) - c
            element = ModuleElement(terms, n, size)
            lead = element.leading_term(order)
            if lead != (unit(n, k), a):
                raise AssertionError(f"Syzygy of generator {a} and x{k + 1} has leading term {lead}")
            alpha, ks = labels[a]
            generators.append(SyzygyGenerator((alpha, ks + (k,)), a, k, element))

    logger.debug(f"Syzygy basis: {len(generators)} generators over a free module of rank {size}")
    return SyzygyModule(generators, order, size, n, basis.division)


def apply_map(element: ModuleElement, images: Sequence[ModuleElement]) -> ModuleElement:
    """Image of sum c x^mu e_comp under e_comp -> images[comp]."""
    if not images:
        raise AlgebraError("Map without images")
    terms: Dict[Term, object] = {}
    for (mu, comp), c in element.terms.items():
        for (nu, target), v in images[comp].terms.items():
            t = (add_exponents(mu, nu), target)
            terms[t] = terms.get(t, QQ.zero) + c * v
    return ModuleElement(terms, images[0].nvars, images[0].rank)


# closed form for monomial bases

@dataclass
class DeltaFunction:
    """x_k h_alpha = t_{alpha,k} h_{Delta(alpha,k)} with t multiplicative for the target."""
    table: Dict[Tuple[int, int], int]
    terms: Dict[Tuple[int, int], Exponent]
    classes: List[int]
    nvars: int

    def __call__(self, alpha: int, k: int) -> Tuple[int, Exponent]:
        return self.table[(alpha, k)], self.terms[(alpha, k)]


@dataclass
class GammaFunction:
    """h_alpha h_beta = m_{alpha,beta} h_{Gamma(alpha,beta)}."""
    table: Dict[Tuple[int, int], int]
    terms: Dict[Tuple[int, int], Exponent]

    def __call__(self, alpha: int, beta: int) -> Tuple[int, Exponent]:
        return self.table[(alpha, beta)], self.terms[(alpha, beta)]


def _require_monomial_pommaret(basis: InvolutiveBasis) -> None:
    if not basis.is_monomial():
        raise NotMonomialError("Closed-form tables need a monomial basis")
    if basis.division != DivisionKind.POMMARET:
        raise AlgebraError("Closed-form tables need a Pommaret basis")


def monomial_delta(basis: InvolutiveBasis) -> DeltaFunction:
    """Delta and t for every generator and every variable.

    For a multiplicative index k the entry is (alpha, x_k).
    """
    _require_monomial_pommaret(basis)
    n = basis.nvars
    classes = basis.classes()
    table, terms = {}, {}
    for a, (mu, comp) in enumerate(basis.leading_terms):
        for k in range(n):
            if k <= classes[a]:
                table[(a, k)], terms[(a, k)] = a, unit(n, k)
                continue
            target = add_exponents(mu, unit(n, k))
            b = involutive_divisor(basis.assignment, (target, comp), basis.order)
            if b is None:
                raise AlgebraError(f"x{k + 1} h_{a} has no involutive divisor; basis is not involutive")
            if not classes[a] <= classes[b] <= k:
                raise AssertionError(f"Class bound fails for Delta({a}, {k})")
            table[(a, k)], terms[(a, k)] = b, quotient_exponent(target, basis.leading_terms[b][0])
    return DeltaFunction(table, terms, classes, n)


def check_delta_coherence(delta: DeltaFunction) -> bool:
    """Both readings of x_{k1} x_{k2} h_alpha agree for all k2 > k1 > cls h_alpha."""
    n = delta.nvars
    for a, c in enumerate(delta.classes):
        for k1 in range(c + 1, n):
            for k2 in range(k1 + 1, n):
                b1, t1 = delta(a, k1)
                b2, t2 = delta(a, k2)
                b12, t12 = delta(b1, k2)
                if delta.classes[b2] >= k1:
                    if b12 != b2 or add_exponents(unit(n, k1), t2) != add_exponents(t1, t12):
                        return False
                else:
                    b21, t21 = delta(b2, k1)
                    if b12 != b21 or add_exponents(t1, t12) != add_exponents(t2, t21):
                        return False
    return True


def _add_term(acc: ComplexElement, label: Label, poly: ModuleElement) -> None:
    if label in acc:
        total = acc[label] + poly
        if total:
            acc[label] = total
        else:
            del acc[label]
    elif poly:
        acc[label] = poly


def monomial_differential(delta: DeltaFunction, alpha: int, ks: Sequence[int]) -> ComplexElement:
    """delta(w_alpha (x) v_ks) = sum_j (-1)^(i-j) (x_kj w_alpha - t w_Delta) (x) v_ks-without-kj.

    Zero unless cls h_alpha < k_1; terms w_beta (x) v_ls with cls h_beta >= l_1
    are dropped.
    """
    ks = tuple(ks)
    n = delta.nvars
    i = len(ks)
    if not ks or ks[0] <= delta.classes[alpha]:
        return {}
    result: ComplexElement = {}
    for j, k in enumerate(ks, start=1):
        rest = ks[:j - 1] + ks[j:]
        sign = 1 if (i - j) % 2 == 0 else -1
        _add_term(result, (alpha, rest), ModuleElement.monomial(unit(n, k), sign))
        beta, t = delta(alpha, k)
        if rest and delta.classes[beta] >= rest[0]:
            continue
        _add_term(result, (beta, rest), ModuleElement.monomial(t, -sign))
    return result


def complex_differential(delta: DeltaFunction, alpha: int, ks: Sequence[int]) -> ComplexElement:
    """Differential on all of C: multiplicative leading indices pass through as a wedge prefix."""
    ks = tuple(ks)
    start = next((j for j, k in enumerate(ks) if k > delta.classes[alpha]), None)
    if start is None:
        return {}
    prefix = ks[:start]
    inner = monomial_differential(delta, alpha, ks[start:])
    return {(beta, prefix + ls): poly for (beta, ls), poly in inner.items()}


def monomial_product(basis: InvolutiveBasis) -> GammaFunction:
    """Gamma and m for every pair of generators of a monomial ideal.

    Associativity and compatibility with Delta are checked on the full tables.
    """
    _require_monomial_pommaret(basis)
    if basis.rank != 1:
        raise AlgebraError("Products are defined for ideals only")
    leads = basis.leading_exponents
    size = len(leads)
    table, terms = {}, {}
    for a, b in cartesian(range(size), repeat=2):
        target = add_exponents(leads[a], leads[b])
        g = involutive_divisor(basis.assignment, (target, 0), basis.order)
        if g is None:
            raise AlgebraError(f"h_{a} h_{b} has no involutive divisor; basis is not involutive")
        table[(a, b)], terms[(a, b)] = g, quotient_exponent(target, leads[g])
    gamma = GammaFunction(table, terms)

    classes = basis.classes()
    delta = monomial_delta(basis)
    for a, b in cartesian(range(size), repeat=2):
        g, m = gamma(a, b)
        if classes[g] < max(classes[a], classes[b]):
            raise AssertionError(f"Class bound fails for Gamma({a}, {b})")
        for c in range(size):
            left, m_left = gamma(g, c)
            bc, m_bc = gamma(b, c)
            right, m_right = gamma(bc, a)
            if left != right or add_exponents(m, m_left) != add_exponents(m_bc, m_right):
                raise AssertionError(f"Gamma is not associative on ({a}, {b}, {c})")
        for k in range(basis.nvars):
            d, t = delta(a, k)
            lhs, m_lhs = gamma(d, b)
            rhs, t_rhs = delta(g, k)
            if lhs != rhs or add_exponents(t, m_lhs) != add_exponents(t_rhs, m):
                raise AssertionError(f"Gamma and Delta disagree on ({a}, {b}, x{k + 1})")
    return gamma


# products on W and C

def product_representation(basis: InvolutiveBasis, alpha: int, beta: int) -> Dict[int, ModuleElement]:
    """Involutive standard representation of h_alpha h_beta as {gamma: P}."""
    if basis.rank != 1:
        raise AlgebraError("Products are defined for ideals only")
    remainder, representation = involutive_normal_form(basis.generators[alpha] * basis.generators[beta], basis)
    if remainder:
        raise AlgebraError(f"h_{alpha} h_{beta} does not reduce to zero; basis is not involutive")
    return representation


def product_table(basis: InvolutiveBasis) -> Dict[Tuple[int, int], Dict[int, ModuleElement]]:
    size = len(basis.generators)
    table = {}
    for a in range(size):
        for b in range(a, size):
            table[(a, b)] = table[(b, a)] = product_representation(basis, a, b)
    return table


def _wedge(ks: Tuple[int, ...], ls: Tuple[int, ...]) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """Sign and sorted indices of v_ks ^ v_ls, None if an index repeats."""
    if set(ks) & set(ls):
        return None
    merged = list(ks + ls)
    inversions = sum(1 for a in ks for b in ls if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(merged))


def complex_product(table: Dict[Tuple[int, int], Dict[int, ModuleElement]],
                    left: ComplexElement, right: ComplexElement) -> ComplexElement:
    """(w (x) omega) x (w' (x) omega') = (w x w') (x) (omega ^ omega'), extended bilinearly."""
    result: ComplexElement = {}
    for (a, ks), p in left.items():
        for (b, ls), q in right.items():
            wedge = _wedge(ks, ls)
            if wedge is None:
                continue
            sign, merged = wedge
            coefficient = (p * q).scale(sign)
            for g, poly in table[(a, b)].items():
                _add_term(result, (g, merged), poly * coefficient)
    return result


def associativity_defect(table: Dict[Tuple[int, int], Dict[int, ModuleElement]],
                         a: int, b: int, c: int, nvars: int) -> Dict[int, ModuleElement]:
    """(w_a x w_b) x w_c - w_a x (w_b x w_c) as {gamma: P}."""
    one = ModuleElement.constant(nvars)

    def w(i: int) -> ComplexElement:
        return {(i, ()): one}

    left = complex_product(table, complex_product(table, w(a), w(b)), w(c))
    right = complex_product(table, w(a), complex_product(table, w(b), w(c)))
    for label, poly in right.items():
        _add_term(left, label, -poly)
    return {g: poly for (g, _), poly in left.items()}


def is_associative(basis: InvolutiveBasis) -> bool:
    table = product_table(basis)
    size = len(basis.generators)
    return all(not associativity_defect(table, a, b, c, basis.nvars)
               for a, b, c in cartesian(range(size), repeat=3))


def _normalized_differential(delta: DeltaFunction, element: ComplexElement) -> ComplexElement:
    """Linear extension of (-1)^(i-1) delta on form degree i."""
    result: ComplexElement = {}
    for (alpha, ks), p in element.items():
        sign = 1 if len(ks) % 2 == 1 else -1
        for label, poly in complex_differential(delta, alpha, ks).items():
            _add_term(result, label, (poly * p).scale(sign))
    return result


def check_leibniz(basis: InvolutiveBasis, max_form_degree: int = 1) -> bool:
    """Graded Leibniz rule on all pairs of basis elements of form degree <= max_form_degree.

    The differential contracts the last wedge factor with a positive sign, so
    the rule d(a x b) = d(a) x b + (-1)^|a| a x d(b) is checked for the
    normalized differential d = (-1)^(i-1) delta.
    """
    delta = monomial_delta(basis)
    table = product_table(basis)
    n = basis.nvars
    one = ModuleElement.constant(n)
    forms = [()] + [(k,) for k in range(n)]
    if max_form_degree >= 2:
        forms += [(k, l) for k in range(n) for l in range(k + 1, n)]
    elements = [{(a, ks): one} for a in range(len(basis.generators)) for ks in forms
                if len(ks) <= max_form_degree]

    for x in elements:
        (_, ks), = x.keys()
        sign = -1 if len(ks) % 2 else 1
        dx = _normalized_differential(delta, x)
        for y in elements:
            lhs = _normalized_differential(delta, complex_product(table, x, y))
            rhs = complex_product(table, dx, y)
            for label, poly in complex_product(table, x, _normalized_differential(delta, y)).items():
                _add_term(rhs, label, poly.scale(sign))
            if lhs != rhs:
                logger.debug(f"Leibniz rule fails for {x} and {y}")
                return False
    return True


def as_complex_element(element: ModuleElement, labels: Sequence[Label]) -> ComplexElement:
    """Rewrite an element of a labelled free module as a dictionary over labels."""
    result: ComplexElement = {}
    for (mu, comp), c in element.terms.items():
        _add_term(result, labels[comp], ModuleElement.monomial(mu, c))
    return result
