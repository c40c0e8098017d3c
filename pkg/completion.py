"""
Involutive Completion Module

Involutive normal forms with recorded standard representations, involutive
head autoreduction, the completion loop for Pommaret/Janet/Thomas bases,
delta-singularity detection, the search for delta-regular coordinates and
the quasi-stability test for monomial ideals.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ

from algebra import (CoordinateChange, Exponent, ModuleElement, Term, TermOrder, add_exponents,
                     apply_coordinate_change, cls, quotient_exponent, unit)
from config import Limits
from divisions import (DivisionKind, MultiplicativeAssignment, assign_multiplicative, involutive_divisor,
                       involutive_size)
from errors import AlgebraError, LimitExceededError, NotMonomialError, NotQuasiStableError
from monomial import (colon_variable_power, contains, exponents_up_to_degree, in_ideal, max_variable_degree,
                      minimal_generators)

logger = logging.getLogger(__name__)


@dataclass
class InvolutiveBasis:
    """Ordered generators with the multiplicative variables of their leading terms."""
    generators: List[ModuleElement]
    division: DivisionKind
    order: TermOrder
    assignment: MultiplicativeAssignment
    strong: bool = True
    nvars: int = 0
    rank: int = 1

    @classmethod
    def build(cls_, generators: Sequence[ModuleElement], division: DivisionKind, order: TermOrder,
              strong: bool = True, nvars: Optional[int] = None, rank: Optional[int] = None) -> 'InvolutiveBasis':
        generators = list(generators)
        if nvars is None:
            nvars = generators[0].nvars if generators else 0
        if rank is None:
            rank = generators[0].rank if generators else 1
        leads = [g.leading_term(order) for g in generators]
        assignment = assign_multiplicative(division, leads, nvars)
        return cls_(generators=generators, division=DivisionKind(division), order=order,
                    assignment=assignment, strong=strong, nvars=nvars, rank=rank)

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def leading_terms(self) -> List[Term]:
        return self.assignment.terms

    @property
    def leading_exponents(self) -> List[Exponent]:
        return [mu for mu, _ in self.assignment.terms]

    @property
    def degree(self) -> int:
        """Maximal degree of a leading term (0 for the empty basis)."""
        return max((sum(mu) for mu in self.leading_exponents), default=0)

    def classes(self) -> List[int]:
        return [cls(mu) for mu in self.leading_exponents]

    def min_class(self) -> int:
        """Minimal class of a leading exponent; n-1 for the empty basis."""
        return min(self.classes(), default=self.nvars - 1)

    def multiplicative(self, index: int):
        return self.assignment.multiplicative[index]

    def non_multiplicative(self, index: int) -> List[int]:
        return self.assignment.non_multiplicative(index)

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.generators)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def size(self) -> int:
        return involutive_size(self.assignment)


@dataclass
class DeltaWitness:
    """Generator with a variable that is Janet- but not Pommaret-multiplicative."""
    generator: int
    variable: int
    element: Optional[ModuleElement] = None


@dataclass
class CompletionOutcome:
    """Result of a completion run: 'basis', 'diverged' or 'limit'."""
    status: str
    basis: InvolutiveBasis
    witness: Optional[DeltaWitness] = None
    iterations: int = 0

    @property
    def succeeded(self) -> bool:
        return self.status == 'basis'


@dataclass
class QuasiStability:
    """Outcome of the quasi-stability test with the colon chain I:x_k^inf."""
    stable: bool
    failing_index: Optional[int] = None
    colon_chain: List[List[Exponent]] = field(default_factory=list)


def involutive_normal_form(f: ModuleElement, basis: InvolutiveBasis,
                           verify: bool = True) -> Tuple[ModuleElement, Dict[int, ModuleElement]]:
    """Involutive normal form of f with its standard representation.

    Returns (remainder, representation) with f = sum P_i * h_i + remainder,
    every P_i supported on the multiplicative variables of h_i and no term of
    the remainder involutively divisible by a leading term.
    """
    order = basis.order
    work: Dict[Term, object] = dict(f.terms)
    remainder: Dict[Term, object] = {}
    representation: Dict[int, Dict[Term, object]] = {}
    leads = [g.leading(order) for g in basis.generators]

    while work:
        t = max(work, key=order.key)
        c = work.pop(t)
        i = involutive_divisor(basis.assignment, t, order)
        if i is None:
            remainder[t] = c
            continue
        (lead_mu, _), lead_c = leads[i]
        mu = quotient_exponent(t[0], lead_mu)
        q = c / lead_c
        poly = representation.setdefault(i, {})
        key = (mu, 0)
        poly[key] = poly.get(key, QQ.zero) + q
        for (nu, comp), v in basis.generators[i].terms.items():
            s = (add_exponents(nu, mu), comp)
            if s == t:
                continue
            value = work.get(s, QQ.zero) - q * v
            if value:
                work[s] = value
            else:
                work.pop(s, None)

    result = ModuleElement(remainder, f.nvars, f.rank)
    rep = {i: ModuleElement(terms, f.nvars, 1) for i, terms in representation.items()}
    rep = {i: p for i, p in rep.items() if p}
    if verify:
        expansion = result
        for i, p in rep.items():
            expansion = expansion + basis.generators[i] * p
        if expansion != f:
            raise AssertionError("Standard representation does not re-expand to the input")
    return result, rep


def involutive_head_autoreduce(elements: Sequence[ModuleElement], kind: DivisionKind,
                               order: TermOrder) -> List[ModuleElement]:
    """Reduce leading terms until none is involutively divisible by another.

    Elements are made monic; elements reducing to zero are dropped.
    """
    work = [f.monic(order) for f in elements if f]
    while work:
        leads = [f.leading_term(order) for f in work]
        assignment = assign_multiplicative(kind, leads, work[0].nvars)
        step = None
        # later elements are reduced by earlier ones first
        for i in range(len(leads) - 1, -1, -1):
            j = involutive_divisor(assignment, leads[i], order, exclude=i)
            if j is not None:
                step = (i, j)
                break
        if step is None:
            break
        i, j = step
        f, g = work[i], work[j]
        (mu_f, _), c_f = f.leading(order)
        quotient = quotient_exponent(mu_f, leads[j][0])
        reduced = f - g.mul_term(quotient, c_f)
        if reduced:
            work[i] = reduced.monic(order)
        else:
            del work[i]
    return work


def _non_multiplicative_products(basis: InvolutiveBasis) -> List[ModuleElement]:
    """All products x_j * h with j non-multiplicative, ascending by leading term."""
    order = basis.order
    n = basis.nvars
    products = []
    for i, h in enumerate(basis.generators):
        mu, comp = basis.leading_terms[i]
        for j in basis.non_multiplicative(i):
            key = order.key((add_exponents(mu, unit(n, j)), comp))
            products.append((key, i, j, h.mul_term(unit(n, j))))
    products.sort(key=lambda item: (item[0], item[1], item[2]))
    return [p for _, _, _, p in products]


def detect_delta_singularity(elements: Sequence[ModuleElement], order: TermOrder) -> Optional[DeltaWitness]:
    """Compare Janet and Pommaret involutive sizes of a Pommaret-autoreduced set."""
    elements = [f for f in elements if f]
    if not elements:
        return None
    leads = [f.leading_term(order) for f in elements]
    nvars = elements[0].nvars
    janet = assign_multiplicative(DivisionKind.JANET, leads, nvars)
    pommaret = assign_multiplicative(DivisionKind.POMMARET, leads, nvars)
    if involutive_size(janet) == involutive_size(pommaret):
        return None
    for i in range(len(elements)):
        extra = janet.multiplicative[i] - pommaret.multiplicative[i]
        if extra:
            return DeltaWitness(generator=i, variable=min(extra), element=elements[i])
    return None


def complete(generators: Sequence[ModuleElement], kind: DivisionKind, order: TermOrder,
             limits: Optional[Limits] = None, autoreduce_kind: Optional[DivisionKind] = None) -> CompletionOutcome:
    """Involutive completion.

    Each round adjoins the monic normal form of the smallest non-multiplicative
    product that does not reduce to zero. For the Pommaret division the
    Janet/Pommaret sizes are compared at the start and after every adjunction;
    a mismatch is settled on a Janet basis of the current set, see
    _settle_size_mismatch.
    """
    kind = DivisionKind(kind)
    autoreduce_kind = DivisionKind(autoreduce_kind or kind)
    limits = limits or Limits()
    nvars = generators[0].nvars if generators else 0
    rank = generators[0].rank if generators else 1
    generators = [g for g in generators if g]
    if not generators:
        return CompletionOutcome('basis', InvolutiveBasis.build([], kind, order, nvars=nvars, rank=rank))

    input_degree = max(sum(g.leading_exponent(order)) for g in generators)
    cap = limits.iteration_cap(input_degree)
    current = involutive_head_autoreduce(generators, autoreduce_kind, order)

    if kind == DivisionKind.POMMARET and detect_delta_singularity(current, order):
        return _settle_size_mismatch(current, order, limits, cap, 0)

    iteration = 0
    while True:
        basis = InvolutiveBasis.build(current, kind, order)
        candidate = None
        for product in _non_multiplicative_products(basis):
            remainder, _ = involutive_normal_form(product, basis, verify=False)
            if remainder:
                candidate = remainder.monic(order)
                break
        if candidate is None:
            logger.debug(f"Completion finished after {iteration} iterations with {len(basis)} generators")
            return CompletionOutcome('basis', basis, iterations=iteration)

        iteration += 1
        lead_degree = sum(candidate.leading_exponent(order))
        if iteration > cap or (limits.max_degree is not None and lead_degree > limits.max_degree):
            logger.warning(f"Completion stopped at iteration {iteration} (cap {cap}, degree {lead_degree})")
            return CompletionOutcome('limit', InvolutiveBasis.build(current, kind, order, strong=False),
                                     iterations=iteration)

        logger.debug(f"[{iteration}] adjoined element of leading degree {lead_degree} (size {len(current) + 1})")
        current = involutive_head_autoreduce(current + [candidate], autoreduce_kind, order)

        if kind == DivisionKind.POMMARET and detect_delta_singularity(current, order):
            return _settle_size_mismatch(current, order, limits, cap, iteration)


def _settle_size_mismatch(current: List[ModuleElement], order: TermOrder, limits: Limits, cap: int,
                          iterations: int) -> CompletionOutcome:
    """Finish a Pommaret completion whose intermediate set has differing Janet/Pommaret sizes.

    Sizes of an incomplete set prove nothing. The set is completed for the
    Janet division with Pommaret head autoreduction, within the iterations
    left under the cap; that basis is a Pommaret basis, or its size mismatch
    gives the witness.
    """
    remaining = replace(limits, max_iterations=max(cap - iterations, 0))
    janet = complete(current, DivisionKind.JANET, order, remaining, autoreduce_kind=DivisionKind.POMMARET)
    total = iterations + janet.iterations
    if janet.status == 'limit':
        partial = InvolutiveBasis.build(janet.basis.generators, DivisionKind.POMMARET, order, strong=False)
        return CompletionOutcome('limit', partial, iterations=total)

    elements = janet.basis.generators
    if is_involutive_basis(elements, DivisionKind.POMMARET, order):
        logger.debug(f"Janet basis with {len(elements)} generators is a Pommaret basis")
        return CompletionOutcome('basis', InvolutiveBasis.build(elements, DivisionKind.POMMARET, order),
                                 iterations=total)

    witness = detect_delta_singularity(elements, order)
    if witness is None:
        raise AssertionError("Janet basis is not a Pommaret basis but its involutive sizes agree")
    logger.info(f"Pommaret completion diverges: generator {witness.generator}, variable {witness.variable}")
    partial = InvolutiveBasis.build(elements, DivisionKind.POMMARET, order, strong=False)
    return CompletionOutcome('diverged', partial, witness, total)


def is_involutive_basis(elements: Sequence[ModuleElement], kind: DivisionKind, order: TermOrder) -> bool:
    """True iff every non-multiplicative product reduces to zero."""
    elements = [f for f in elements if f]
    if not elements:
        return True
    basis = InvolutiveBasis.build(elements, kind, order)
    return all(not involutive_normal_form(p, basis, verify=False)[0]
               for p in _non_multiplicative_products(basis))


def is_pommaret_basis(basis: InvolutiveBasis) -> bool:
    """Janet and Pommaret involutive sizes agree on a Janet-complete, Pommaret-autoreduced set."""
    if not basis.generators:
        return True
    leads = basis.leading_terms
    janet = assign_multiplicative(DivisionKind.JANET, leads, basis.nvars)
    pommaret = assign_multiplicative(DivisionKind.POMMARET, leads, basis.nvars)
    return involutive_size(janet) == involutive_size(pommaret)


def janet_pommaret_completion(generators: Sequence[ModuleElement], order: TermOrder,
                              limits: Optional[Limits] = None) -> Tuple[InvolutiveBasis, bool]:
    """Janet completion with Pommaret head autoreduction.

    The flag is True iff the result is also a Pommaret basis.
    """
    outcome = complete(generators, DivisionKind.JANET, order, limits, autoreduce_kind=DivisionKind.POMMARET)
    if not outcome.succeeded:
        raise LimitExceededError("Janet completion hit the configured caps", partial=outcome.basis)
    flag = is_involutive_basis(outcome.basis.generators, DivisionKind.POMMARET, order)
    return outcome.basis, flag


def _parameter_sequence() -> Iterator[int]:
    a = 1
    while True:
        yield a
        yield -a
        a += 1


def unipotent_random(n: int, rng: np.random.Generator) -> CoordinateChange:
    """x_k = x~_k + sum_{l>k} a_kl x~_l with small random integers a_kl.

    Each variable gains multiples of the larger ones, the direction of the
    elementary moves. The matrix is upper triangular in index order and lower
    triangular when the variables are listed from largest to smallest.
    """
    rows = [[0] * n for _ in range(n)]
    for k in range(n):
        rows[k][k] = 1
        for l in range(k + 1, n):
            rows[k][l] = int(rng.integers(-9, 10))
    return CoordinateChange(rows)


def find_delta_regular_coordinates(generators: Sequence[ModuleElement], order: TermOrder,
                                   limits: Optional[Limits] = None,
                                   seed: int = 0) -> Tuple[CoordinateChange, InvolutiveBasis]:
    """Search for coordinates in which the Pommaret completion terminates.

    Witnesses drive elementary moves x_k = x~_k + a x~_l (k the class of the
    witness generator, l the witness variable) with a = 1, -1, 2, -2, ...
    After the configured number of rounds the search switches to seeded
    random unipotent changes.
    """
    if order.kind != 'degrevlex':
        raise AlgebraError("delta-regular coordinates require the degrevlex order")
    limits = limits or Limits()
    nonzero = [g for g in generators if g]
    if not nonzero:
        n = generators[0].nvars if generators else 0
        return CoordinateChange.identity(n), InvolutiveBasis.build([], DivisionKind.POMMARET, order, nvars=n)
    generators = nonzero
    n = generators[0].nvars
    change = CoordinateChange.identity(n)
    current = list(generators)
    parameters = _parameter_sequence()
    outcome = None

    for round_ in range(limits.round_cap(n)):
        outcome = complete(current, DivisionKind.POMMARET, order, limits)
        if outcome.succeeded:
            return change, outcome.basis
        if outcome.status == 'limit':
            break
        witness = outcome.witness
        k = cls(witness.element.leading_exponent(order))
        a = next(parameters)
        change = change.compose(CoordinateChange.elementary(n, k, witness.variable, a))
        current = [apply_coordinate_change(g, change) for g in generators]
        logger.info(f"Round {round_ + 1}: x{k + 1} -> x{k + 1} + ({a})*x{witness.variable + 1}")

    rng = np.random.default_rng(seed)
    for attempt in range(limits.escalation_attempts):
        change = unipotent_random(n, rng)
        current = [apply_coordinate_change(g, change) for g in generators]
        outcome = complete(current, DivisionKind.POMMARET, order, limits)
        logger.info(f"Escalation attempt {attempt + 1}: {outcome.status}")
        if outcome.succeeded:
            return change, outcome.basis

    raise LimitExceededError("No delta-regular coordinates found within the configured caps",
                             partial=outcome.basis if outcome else None)


def monomial_exponents(generators: Sequence[ModuleElement]) -> List[Exponent]:
    """Exponents of monomial rank-1 generators."""
    exponents = []
    for g in generators:
        if not g:
            continue
        if g.rank != 1 or not g.is_monomial():
            raise NotMonomialError("Expected monomial generators of an ideal")
        (mu, _), = g.terms.keys()
        exponents.append(mu)
    return exponents


def is_quasi_stable(generators: Sequence[Exponent]) -> QuasiStability:
    """Check the ascending colon chain I:x_1^inf in ... in I:x_n^inf."""
    generators = minimal_generators(generators)
    if not generators:
        return QuasiStability(stable=True)
    n = len(generators[0])
    chain = [colon_variable_power(generators, k) for k in range(n)]
    for k in range(n - 1):
        if not contains(chain[k + 1], chain[k]):
            return QuasiStability(stable=False, failing_index=k, colon_chain=chain)
    return QuasiStability(stable=True, colon_chain=chain)


def exchange_criterion(generators: Sequence[Exponent], bound: int) -> bool:
    """Bounded check of the exchange characterisation of quasi-stability.

    For x^mu in I up to degree bound, every i with mu_i > 0, 0 < r <= mu_i
    and j > i must admit s with x^(mu - r 1_i + s 1_j) in I.
    """
    generators = minimal_generators(generators)
    if not generators:
        return True
    n = len(generators[0])
    powers = [max_variable_degree(generators, j) for j in range(n)]
    for mu in exponents_up_to_degree(n, bound):
        if not in_ideal(mu, generators):
            continue
        for i in range(n - 1):
            for r in range(1, mu[i] + 1):
                for j in range(i + 1, n):
                    nu = list(mu)
                    nu[i] -= r
                    nu[j] += powers[j]
                    if not in_ideal(tuple(nu), generators):
                        return False
    return True


def colon_basis(basis: InvolutiveBasis, k: int) -> InvolutiveBasis:
    """Pommaret basis of I : x_k^inf from a monomial Pommaret basis of I.

    Class-k generators lose their x_k power, lower classes are dropped, then
    the weak basis is made strong by head autoreduction.
    """
    if not 0 <= k < basis.nvars:
        raise AlgebraError(f"Variable index {k} out of range")
    if not basis.is_monomial():
        raise NotMonomialError("Colon bases need a monomial Pommaret basis")
    weak = []
    for h, mu in zip(basis.generators, basis.leading_exponents):
        c = cls(mu)
        if c == k:
            weak.append(h.substitute_one(k))
        elif c > k:
            weak.append(h)
    strong = involutive_head_autoreduce(weak, DivisionKind.POMMARET, basis.order)
    return InvolutiveBasis.build(strong, DivisionKind.POMMARET, basis.order, nvars=basis.nvars)


def truncated_basis(basis: InvolutiveBasis, q: int) -> InvolutiveBasis:
    """Involutive basis of the truncation I_{>=q} of a homogeneous ideal.

    Every generator h of degree at most q is multiplied by all terms of degree
    q - deg h in its multiplicative variables.
    """
    elements = []
    n = basis.nvars
    for i, h in enumerate(basis.generators):
        d = h.degree
        if d >= q:
            elements.append(h)
            continue
        mult = sorted(basis.multiplicative(i))
        for mu in exponents_up_to_degree(n, q - d):
            if sum(mu) != q - d or any(mu[j] and j not in mult for j in range(n)):
                continue
            elements.append(h.mul_term(mu))
    return InvolutiveBasis.build(elements, basis.division, basis.order, nvars=n, rank=basis.rank)


def monomial_pommaret_basis(exponents: Sequence[Exponent], nvars: int, order: Optional[TermOrder] = None,
                            limits: Optional[Limits] = None) -> InvolutiveBasis:
    """Pommaret basis of a monomial ideal given by exponents.

    Raises NotQuasiStableError when the completion finds a delta witness.
    """
    order = order or TermOrder('degrevlex')
    elements = [ModuleElement.monomial(mu) for mu in minimal_generators(exponents)]
    if not elements:
        return InvolutiveBasis.build([], DivisionKind.POMMARET, order, nvars=nvars)
    outcome = complete(elements, DivisionKind.POMMARET, order, limits)
    if outcome.status == 'diverged':
        w = outcome.witness
        raise NotQuasiStableError(f"Monomial ideal is not quasi-stable (generator {w.generator}, variable {w.variable})",
                                  witness=w)
    if outcome.status == 'limit':
        raise LimitExceededError("Monomial Pommaret completion hit the configured caps", partial=outcome.basis)
    return outcome.basis
