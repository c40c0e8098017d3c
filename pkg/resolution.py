"""
Free Resolution Module

Free resolutions built by iterating involutive syzygy bases, their
minimization, graded Betti tables, projective dimension and
Castelnuovo-Mumford regularity, stability of monomial ideals and the
linear-resolution test for truncated ideals.
"""

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ

from algebra import CoordinateChange, Exponent, ModuleElement, TermOrder, cls, zero_exponent
from completion import (InvolutiveBasis, complete, find_delta_regular_coordinates, monomial_pommaret_basis,
                        truncated_basis)
from config import Limits
from divisions import DivisionKind
from errors import AlgebraError, InhomogeneousError, LimitExceededError, NotQuasiStableError
from linalg import constant_rank, free_module_dimension, graded_map_rank
from monomial import exponents_up_to_degree, in_ideal, minimal_generators
from structure import depth
from syzygies import Label, apply_map, l_ordering, reorder, syzygy_basis

logger = logging.getLogger(__name__)

SCHREYER_DIVISIONS = (DivisionKind.POMMARET, DivisionKind.JANET)


@dataclass
class ResolutionLevel:
    """Generators of one free module with the images of the differential.

    Level 0 holds the generators of the resolved module itself (the
    augmentation); level i > 0 holds elements of the free module of level i-1.
    """
    labels: List[Label]
    degrees: List[int]
    elements: List[ModuleElement]
    multiplicative_counts: List[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass
class FreeResolution:
    levels: List[ResolutionLevel]
    nvars: int
    rank: int
    homogeneous: bool
    division: DivisionKind = DivisionKind.POMMARET
    basis: Optional[InvolutiveBasis] = None
    minimal: bool = False

    @property
    def ranks(self) -> List[int]:
        return [len(level) for level in self.levels]

    @property
    def length(self) -> int:
        return len(self.levels) - 1

    @property
    def augmentation(self) -> List[ModuleElement]:
        return self.levels[0].elements

    def differential(self, i: int) -> List[ModuleElement]:
        if not 1 <= i < len(self.levels):
            raise AlgebraError(f"No differential at level {i}")
        return self.levels[i].elements

    def target_degrees(self, i: int) -> List[int]:
        if i == 0:
            return [0] * self.rank
        return self.levels[i - 1].degrees

    def is_complex(self) -> bool:
        """Consecutive maps compose to zero, including the augmentation."""
        for i in range(1, len(self.levels)):
            images = self.levels[i - 1].elements
            for element in self.levels[i].elements:
                if apply_map(element, images):
                    return False
        return True

    def constant_entries(self, i: int) -> List[Tuple[int, int, object]]:
        """(row, column, coefficient) for every constant entry of the map at level i."""
        entries = []
        for row, element in enumerate(self.differential(i)):
            zero = zero_exponent(self.nvars)
            for (mu, comp), c in sorted(element.terms.items(), key=lambda item: item[0][1]):
                if mu == zero:
                    entries.append((row, comp, c))
        return entries

    def betti_table(self) -> 'BettiTable':
        if not self.homogeneous:
            raise InhomogeneousError("Graded Betti numbers need homogeneous input")
        return BettiTable.from_degrees([level.degrees for level in self.levels])


@dataclass
class ResolutionRanks:
    """Class counts per level from the recursion and the resulting ranks."""
    class_counts: List[List[int]]
    ranks: List[int]


def resolution_ranks_formula(class_counts: Sequence[int], nvars: int) -> ResolutionRanks:
    """Ranks r_i = sum_k C(n-k, i) b_k of the resolution of an involutive basis.

    class_counts[k] is the number of generators with k multiplicative
    variables. The level-by-level recursion b'_k = sum_{j<k} b_j is checked
    against the closed form.
    """
    n = nvars
    counts = list(class_counts) + [0] * (n + 1 - len(class_counts))
    levels = [counts]
    while True:
        previous = levels[-1]
        nxt = [sum(previous[:k]) for k in range(n + 1)]
        if not any(nxt):
            break
        levels.append(nxt)
    ranks = []
    for i in range(len(levels)):
        closed = sum(comb(n - k, i) * counts[k] for k in range(n - i + 1))
        if closed != sum(levels[i]):
            raise AssertionError(f"Rank recursion and closed form disagree at level {i}")
        ranks.append(closed)
    return ResolutionRanks(levels, ranks)


def free_resolution(basis: InvolutiveBasis, verify_degree: Optional[int] = None) -> FreeResolution:
    """Resolution of the module generated by an involutive basis.

    Each level is L-ordered before its syzygies are computed. The result is
    checked to be a complex with the predicted ranks; with verify_degree set
    and homogeneous input, exactness is checked degreewise up to that degree.
    """
    if basis.division not in SCHREYER_DIVISIONS:
        raise AlgebraError(f"Resolutions need a division of Schreyer type, not {basis.division.value}")
    ordered = reorder(basis, l_ordering(basis))
    homogeneous = ordered.is_homogeneous()
    labels = [(i, ()) for i in range(len(ordered))]
    levels = [ResolutionLevel(labels, [max(g.degree, 0) for g in ordered.generators], list(ordered.generators),
                              [len(ordered.multiplicative(i)) for i in range(len(ordered))])]

    current = ordered
    while current.generators:
        module = syzygy_basis(current, labels)
        if not module.generators:
            break
        syz_basis = module.as_basis()
        perm = l_ordering(syz_basis)
        syz_basis = reorder(syz_basis, perm)
        generators = [module.generators[p] for p in perm]
        labels = [g.label for g in generators]
        degrees = [levels[-1].degrees[g.parent] + 1 for g in generators]
        counts = [len(syz_basis.multiplicative(i)) for i in range(len(syz_basis))]
        levels.append(ResolutionLevel(labels, degrees, list(syz_basis.generators), counts))
        logger.debug(f"Level {len(levels) - 1}: {len(generators)} syzygies")
        current = syz_basis

    resolution = FreeResolution(levels, basis.nvars, basis.rank, homogeneous, basis.division, ordered)
    if not resolution.is_complex():
        raise AssertionError("Differentials of the resolution do not compose to zero")

    histogram = [0] * (basis.nvars + 1)
    for count in levels[0].multiplicative_counts:
        histogram[count] += 1
    expected = resolution_ranks_formula(histogram, basis.nvars).ranks
    if expected != resolution.ranks:
        raise AssertionError(f"Resolution ranks {resolution.ranks} differ from the prediction {expected}")

    if verify_degree is not None and homogeneous:
        for s in range(verify_degree + 1):
            if not degreewise_exactness(resolution, s):
                raise AssertionError(f"Resolution is not exact in degree {s}")
    return resolution


def degreewise_exactness(resolution: FreeResolution, degree: int) -> bool:
    """Rank bookkeeping in one degree: image and kernel dimensions match at every level."""
    if not resolution.homogeneous:
        raise InhomogeneousError("Degreewise exactness needs a graded resolution")
    n = resolution.nvars
    levels = resolution.levels
    ranks = []
    dimensions = []
    for i, level in enumerate(levels):
        rank, source = graded_map_rank(level.elements, level.degrees, resolution.target_degrees(i), degree, n)
        ranks.append(rank)
        dimensions.append(free_module_dimension(level.degrees, degree, n))
    ranks.append(0)
    for i in range(len(levels)):
        if ranks[i] + ranks[i + 1] != dimensions[i]:
            logger.debug(f"Exactness fails at level {i} in degree {degree}")
            return False
    return True


# minimization

def _drop_component(element: ModuleElement, index: int) -> ModuleElement:
    terms = {}
    for (mu, comp), c in element.terms.items():
        if comp == index:
            continue
        terms[(mu, comp - 1 if comp > index else comp)] = c
    return ModuleElement(terms, element.nvars, element.rank - 1)


def _find_pivot(level: ResolutionLevel, nvars: int) -> Optional[Tuple[int, int]]:
    zero = zero_exponent(nvars)
    for row in sorted(range(len(level)), key=lambda r: (level.degrees[r], r)):
        columns = sorted(comp for (mu, comp) in level.elements[row].terms if mu == zero)
        if columns:
            return row, columns[0]
    return None


def _eliminate(levels: List[ResolutionLevel], i: int, row: int, column: int) -> None:
    """Split off the trivial summand e_row -> u e_column at level i."""
    level = levels[i]
    pivot = level.elements[row]
    u = pivot.coefficient((zero_exponent(pivot.nvars), column))
    for r, element in enumerate(level.elements):
        if r == row:
            continue
        factor = element.component(column)
        if factor:
            level.elements[r] = element - pivot * factor.scale(QQ.one / u)

    for container in (level.labels, level.degrees, level.elements):
        del container[row]
    if level.multiplicative_counts:
        del level.multiplicative_counts[row]
    if i + 1 < len(levels):
        nxt = levels[i + 1]
        nxt.elements = [_drop_component(e, row) for e in nxt.elements]

    below = levels[i - 1]
    for container in (below.labels, below.degrees, below.elements):
        del container[column]
    if below.multiplicative_counts:
        del below.multiplicative_counts[column]
    for r, element in enumerate(level.elements):
        if element.component(column):
            raise AssertionError(f"Column {column} survived the elimination at level {i}")
        level.elements[r] = _drop_component(element, column)


@dataclass
class MinimalResolution:
    resolution: FreeResolution
    betti: Optional['BettiTable']
    extremal: List[Tuple[int, int, int]]
    eliminated: int = 0
    skipped: bool = False

    @property
    def changed(self) -> bool:
        return self.eliminated > 0


def minimize(resolution: FreeResolution) -> MinimalResolution:
    """Remove constant entries from the tail towards the front.

    Pivots are taken in the lowest-degree row first; surviving generators
    keep their labels. Inhomogeneous resolutions are returned unchanged.
    """
    if not resolution.homogeneous:
        logger.warning("Minimization skipped: Betti numbers are not defined for inhomogeneous input")
        return MinimalResolution(resolution, None, [], skipped=True)

    levels = [ResolutionLevel(list(l.labels), list(l.degrees), list(l.elements), list(l.multiplicative_counts))
              for l in resolution.levels]
    eliminated = 0
    for i in range(len(levels) - 1, 0, -1):
        while True:
            pivot = _find_pivot(levels[i], resolution.nvars)
            if pivot is None:
                break
            _eliminate(levels, i, *pivot)
            eliminated += 1
    while len(levels) > 1 and not levels[-1].elements:
        levels.pop()

    minimal = FreeResolution(levels, resolution.nvars, resolution.rank, True, resolution.division,
                             resolution.basis, minimal=True)
    if not minimal.is_complex():
        raise AssertionError("Minimized maps do not compose to zero")
    betti = minimal.betti_table()
    extremal = betti.extremal()
    basis = resolution.basis
    if basis is not None and basis.division == DivisionKind.POMMARET and basis.rank == 1 and basis.generators:
        predicted = extremal_betti_numbers(basis)
        if predicted != extremal:
            raise AssertionError(f"Extremal Betti numbers {extremal} differ from the basis reading {predicted}")
    logger.debug(f"Minimization removed {eliminated} trivial summands")
    return MinimalResolution(minimal, betti, extremal, eliminated)


# Betti numbers

@dataclass
class BettiTable:
    """Graded Betti numbers; table[r, i] = beta_{i, i + r + offset}."""
    table: np.ndarray
    offset: int

    @classmethod
    def from_degrees(cls_, degrees: Sequence[Sequence[int]]) -> 'BettiTable':
        entries = [(i, d - i) for i, level in enumerate(degrees) for d in level]
        if not entries:
            return cls_(np.zeros((0, len(degrees)), dtype=int), 0)
        low = min(r for _, r in entries)
        high = max(r for _, r in entries)
        table = np.zeros((high - low + 1, len(degrees)), dtype=int)
        for i, r in entries:
            table[r - low, i] += 1
        return cls_(table, low)

    @property
    def length(self) -> int:
        return self.table.shape[1] - 1

    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        r = j - i - self.offset
        if not (0 <= r < self.table.shape[0] and 0 <= i < self.table.shape[1]):
            return 0
        return int(self.table[r, i])

    def __eq__(self, other) -> bool:
        return isinstance(other, BettiTable) and self.as_dict() == other.as_dict()

    def totals(self) -> List[int]:
        return [int(v) for v in self.table.sum(axis=0)]

    def as_dict(self) -> Dict[Tuple[int, int], int]:
        result = {}
        rows, cols = self.table.shape
        for r in range(rows):
            for i in range(cols):
                if self.table[r, i]:
                    result[(i, i + r + self.offset)] = int(self.table[r, i])
        return result

    @property
    def regularity(self) -> int:
        """Largest row index with a nonzero entry."""
        rows = np.nonzero(self.table.any(axis=1))[0]
        return int(rows.max()) + self.offset if rows.size else 0

    def extremal(self) -> List[Tuple[int, int, int]]:
        """(i, j, beta_ij) with beta_kl = 0 for all other k >= i, l - k >= j - i."""
        entries = self.as_dict()
        result = []
        for (i, j), value in entries.items():
            row = j - i
            if all(not (k >= i and l - k >= row) for (k, l) in entries if (k, l) != (i, j)):
                result.append((i, j, value))
        return sorted(result)

    def render(self) -> str:
        rows, cols = self.table.shape
        width = max([len(str(v)) for v in self.table.flatten()] + [len(str(t)) for t in self.totals()] + [1])
        label_width = max([len(str(r + self.offset)) + 1 for r in range(rows)] + [6])

        def line(label: str, values: Sequence[str]) -> str:
            return label.rjust(label_width) + ' ' + ' '.join(v.rjust(width) for v in values)

        lines = [line('', [str(i) for i in range(cols)]),
                 line('total:', [str(t) for t in self.totals()])]
        for r in range(rows):
            lines.append(line(f"{r + self.offset}:", [str(v) if v else '.' for v in self.table[r]]))
        return '\n'.join(lines)

    def __str__(self) -> str:
        return self.render()


def betti_oracle(resolution: FreeResolution) -> BettiTable:
    """Betti numbers from the ranks of the constant parts of a possibly non-minimal resolution.

    beta_{i,j} = r_{i,j} - rank(d_i (x) k)_j - rank(d_{i+1} (x) k)_j.
    """
    if not resolution.homogeneous:
        raise InhomogeneousError("Graded Betti numbers need homogeneous input")
    levels = resolution.levels
    zero = zero_exponent(resolution.nvars)

    def constant_part_rank(i: int, degree: int) -> int:
        if i == 0 or i >= len(levels):
            return 0
        rows = [r for r, d in enumerate(levels[i].degrees) if d == degree]
        columns = [c for c, d in enumerate(levels[i - 1].degrees) if d == degree]
        if not rows or not columns:
            return 0
        matrix = [[levels[i].elements[r].coefficient((zero, c)) for c in columns] for r in rows]
        return constant_rank(matrix)

    degrees = []
    for i, level in enumerate(levels):
        survivors = []
        for degree in sorted(set(level.degrees)):
            count = level.degrees.count(degree)
            beta = count - constant_part_rank(i, degree) - constant_part_rank(i + 1, degree)
            survivors.extend([degree] * beta)
        degrees.append(survivors)
    while len(degrees) > 1 and not degrees[-1]:
        degrees.pop()
    return BettiTable.from_degrees(degrees)


def extremal_betti_numbers(basis: InvolutiveBasis) -> List[Tuple[int, int, int]]:
    """Extremal Betti numbers read off a homogeneous Pommaret basis.

    Start with the generators of maximal degree q and among them the minimal
    class c; this gives beta_{i, q+i} with i = n-1-c, counted by the
    generators of degree q and class c. Repeat on the generators of class
    below c.
    """
    if basis.division != DivisionKind.POMMARET:
        raise AlgebraError("Extremal Betti numbers are read off Pommaret bases")
    n = basis.nvars
    data = [(sum(mu), cls(mu)) for mu in basis.leading_exponents]
    result = []
    bound = n
    while True:
        pool = [(d, c) for d, c in data if c < bound]
        if not pool:
            break
        q = max(d for d, _ in pool)
        c = min(cl for d, cl in pool if d == q)
        i = n - 1 - c
        result.append((i, q + i, sum(1 for d, cl in pool if d == q and cl == c)))
        bound = c
    return sorted(result)


# invariants

def projective_dimension(basis: InvolutiveBasis) -> int:
    """pd = n - d with d the minimal (1-based) class of a Pommaret basis."""
    if basis.division != DivisionKind.POMMARET:
        raise AlgebraError("Projective dimension is read off a Pommaret basis")
    if not basis.order.class_respecting:
        raise AlgebraError("Projective dimension needs a class respecting term order")
    n = basis.nvars
    if not basis.generators:
        return 0
    pd = n - (basis.min_class() + 1)
    if depth(basis).ideal_depth + pd != n:
        raise AssertionError("depth + pd differs from the number of variables")
    return pd


@dataclass
class RegularityResult:
    regularity: int
    basis: InvolutiveBasis
    change: CoordinateChange
    positions: List[int]
    projective_dimension: int
    leading_ideal_only: bool = False


def _leading_ideal_generators(generators: Sequence[ModuleElement], order: TermOrder,
                              limits: Limits) -> List[ModuleElement]:
    outcome = complete(generators, DivisionKind.JANET, order, limits)
    if not outcome.succeeded:
        raise LimitExceededError("Janet completion hit the configured caps", partial=outcome.basis)
    rank = outcome.basis.rank
    return [ModuleElement.monomial(mu, 1, comp, rank) for mu, comp in outcome.basis.leading_terms]


def regularity(generators: Sequence[ModuleElement], order: Optional[TermOrder] = None,
               limits: Optional[Limits] = None, seed: int = 0) -> RegularityResult:
    """Castelnuovo-Mumford regularity as the degree of a Pommaret basis in delta-regular coordinates.

    Inhomogeneous input is replaced by its leading ideal.
    """
    order = order or TermOrder('degrevlex')
    if order.kind != 'degrevlex':
        raise AlgebraError("Regularity is computed for the degrevlex order only")
    limits = limits or Limits()
    generators = [g for g in generators if g]
    leading_only = False
    if not all(g.is_homogeneous() for g in generators):
        logger.warning("Input is not homogeneous; the regularity of the leading ideal is computed instead")
        generators = _leading_ideal_generators(generators, order, limits)
        leading_only = True

    change, basis = find_delta_regular_coordinates(generators, order, limits, seed)
    n = basis.nvars
    if not basis.generators:
        return RegularityResult(0, basis, change, [], 0, leading_only)
    q = basis.degree
    positions = sorted({n - 1 - cls(mu) for mu in basis.leading_exponents if sum(mu) == q})
    return RegularityResult(q, basis, change, positions, projective_dimension(basis), leading_only)


def is_stable(exponents: Sequence[Exponent], nvars: Optional[int] = None) -> bool:
    """Stability by the exchange condition and by comparing the minimal and Pommaret bases."""
    gens = minimal_generators(exponents)
    if not gens:
        return True
    n = nvars or len(gens[0])
    bound = max(sum(mu) for mu in gens)

    exchange = True
    for mu in exponents_up_to_degree(n, bound):
        if not in_ideal(mu, gens):
            continue
        k = cls(mu)
        for j in range(k + 1, n):
            nu = list(mu)
            nu[k] -= 1
            nu[j] += 1
            if not in_ideal(tuple(nu), gens):
                exchange = False
                break
        if not exchange:
            break

    try:
        basis = monomial_pommaret_basis(gens, n)
        same = sorted(basis.leading_exponents) == sorted(gens)
    except NotQuasiStableError:
        same = False

    if exchange != same:
        raise AssertionError("Exchange condition and Pommaret basis comparison disagree")
    return exchange


def linear_resolution_check(generators: Sequence[ModuleElement], q: int, order: Optional[TermOrder] = None,
                            limits: Optional[Limits] = None, seed: int = 0) -> bool:
    """True iff the truncation I_{>=q} has a linear resolution.

    The Pommaret basis of I_{>=q} is resolved; the resolution is linear when
    every generator has degree q and every nonzero map entry is linear. The
    answer is checked against q >= reg I.
    """
    order = order or TermOrder('degrevlex')
    limits = limits or Limits()
    if not all(g.is_homogeneous() for g in generators if g):
        raise InhomogeneousError("Linear resolutions need homogeneous input")
    change, basis = find_delta_regular_coordinates(generators, order, limits, seed)
    if not basis.generators:
        return True
    reg = basis.degree
    if q >= reg:
        truncated = truncated_basis(basis, q)
    else:
        outcome = complete(truncated_basis(basis, q).generators, DivisionKind.POMMARET, order, limits)
        if not outcome.succeeded:
            raise LimitExceededError("Completion of the truncated ideal did not finish", partial=outcome.basis)
        truncated = outcome.basis

    resolution = free_resolution(truncated)
    linear = all(d == q for d in resolution.levels[0].degrees)
    for i in range(1, len(resolution.levels)):
        for element in resolution.differential(i):
            if any(sum(mu) != 1 for mu, _ in element.terms):
                linear = False
    if linear != (q >= reg):
        raise AssertionError(f"Linear resolution test disagrees with reg = {reg} at q = {q}")
    return linear
