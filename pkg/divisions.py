"""
Involutive Divisions Module

Multiplicative-variable assignments for the Pommaret, Janet and Thomas
divisions, involutive divisibility, involutive size and the local involution
test for monomial sets.

Sets are given as lists of terms (exponent, component). Janet and Thomas
assignments are computed per component; Pommaret depends only on the class
of the exponent.
"""

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from algebra import Exponent, Term, TermOrder, add_exponents, cls, divides, unit


class DivisionKind(str, Enum):
    POMMARET = 'pommaret'
    JANET = 'janet'
    THOMAS = 'thomas'


@dataclass
class MultiplicativeAssignment:
    """Multiplicative variable indices for every term of a finite set."""
    kind: DivisionKind
    terms: List[Term]
    multiplicative: List[FrozenSet[int]]
    nvars: int

    def non_multiplicative(self, index: int) -> List[int]:
        return [j for j in range(self.nvars) if j not in self.multiplicative[index]]

    def __len__(self) -> int:
        return len(self.terms)


def _janet_sets(exponents: Sequence[Exponent], n: int) -> List[FrozenSet[int]]:
    result = []
    for nu in exponents:
        mult = set()
        for k in range(n - 1, -1, -1):
            group_max = max(mu[k] for mu in exponents if mu[k + 1:] == nu[k + 1:])
            if nu[k] == group_max:
                mult.add(k)
        result.append(frozenset(mult))
    return result


def _thomas_sets(exponents: Sequence[Exponent], n: int) -> List[FrozenSet[int]]:
    maxima = [max(mu[k] for mu in exponents) for k in range(n)]
    return [frozenset(k for k in range(n) if nu[k] == maxima[k]) for nu in exponents]


def pommaret_set(mu: Exponent) -> FrozenSet[int]:
    return frozenset(range(cls(mu) + 1))


def assign_multiplicative(kind: DivisionKind, terms: Sequence[Term], nvars: Optional[int] = None) -> MultiplicativeAssignment:
    """Assign multiplicative variables to every term of the set.

    Janet: the last variable is multiplicative iff the exponent attains the
    maximal last entry; variable k is multiplicative iff the exponent attains
    the maximal k-th entry among the elements agreeing with it beyond k.
    """
    kind = DivisionKind(kind)
    terms = [(tuple(mu), comp) for mu, comp in terms]
    if nvars is None:
        nvars = len(terms[0][0]) if terms else 0
    multiplicative: List[FrozenSet[int]] = [frozenset()] * len(terms)

    if kind == DivisionKind.POMMARET:
        multiplicative = [pommaret_set(mu) for mu, _ in terms]
    else:
        by_component: Dict[int, List[int]] = defaultdict(list)
        for i, (_, comp) in enumerate(terms):
            by_component[comp].append(i)
        for comp, indices in by_component.items():
            exponents = [terms[i][0] for i in indices]
            sets = _janet_sets(exponents, nvars) if kind == DivisionKind.JANET else _thomas_sets(exponents, nvars)
            for i, s in zip(indices, sets):
                multiplicative[i] = s

    return MultiplicativeAssignment(kind=kind, terms=terms, multiplicative=multiplicative, nvars=nvars)


def multiplicative_variables(kind: DivisionKind, terms: Sequence[Term], index: int) -> FrozenSet[int]:
    return assign_multiplicative(kind, terms).multiplicative[index]


def is_involutive_divisor(assignment: MultiplicativeAssignment, index: int, target: Term) -> bool:
    mu, comp = assignment.terms[index]
    nu, target_comp = target
    if comp != target_comp or not divides(mu, nu):
        return False
    mult = assignment.multiplicative[index]
    return all(k in mult for k in range(assignment.nvars) if nu[k] > mu[k])


def involutive_divisor(assignment: MultiplicativeAssignment, target: Term,
                       order: Optional[TermOrder] = None, exclude: Optional[int] = None) -> Optional[int]:
    """Index of an involutive divisor of target, or None.

    Several divisors only occur for weak sets; the one with the maximal
    exponent under the order is returned.
    """
    candidates = [i for i in range(len(assignment.terms))
                  if i != exclude and is_involutive_divisor(assignment, i, target)]
    if not candidates:
        return None
    if len(candidates) == 1:
        return candidates[0]
    order = order or TermOrder('degrevlex')
    return max(candidates, key=lambda i: (order.key(assignment.terms[i]), -i))


def involutive_size(assignment: MultiplicativeAssignment) -> int:
    """Total number of multiplicative variables over the set."""
    return sum(len(s) for s in assignment.multiplicative)


def is_involutive_monomial_set(kind: DivisionKind, terms: Sequence[Term],
                               nvars: Optional[int] = None) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """Local involution test.

    Returns (True, None) or (False, (generator index, variable index)) for the
    first non-multiplicative product without an involutive divisor.
    """
    terms = list(terms)
    if not terms:
        return True, None
    assignment = assign_multiplicative(kind, terms, nvars)
    n = assignment.nvars
    for i, (mu, comp) in enumerate(assignment.terms):
        for j in assignment.non_multiplicative(i):
            product = (add_exponents(mu, unit(n, j)), comp)
            if involutive_divisor(assignment, product) is None:
                return False, (i, j)
    return True, None
