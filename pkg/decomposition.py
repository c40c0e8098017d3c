"""
Cone Decomposition Module

Complementary decompositions of monomial ideals (Janet recursion and the
Pommaret construction with its Rees refinement), Hilbert series data read
off a decomposition, and standard pairs with the irreducible decomposition
and associated primes they encode.

Monomial ideals are given by exponent tuples; variable indices are 0-based.
"""

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from sympy import Poly, Symbol, binomial, expand, expand_func

from algebra import Exponent, cls, divides
from divisions import DivisionKind, is_involutive_monomial_set
from errors import NotQuasiStableError
from monomial import exponents_of_degree, exponents_up_to_degree, in_ideal, minimal_generators

logger = logging.getLogger(__name__)

FLAVORS = ('complementary', 'rees', 'stanley', 'hironaka', 'ideal-side')

LAMBDA = Symbol('lambda')
S = Symbol('s')


@dataclass(frozen=True)
class Cone:
    """The set x^generator * k[x_i : i in multiplicative]."""
    generator: Exponent
    multiplicative: FrozenSet[int]

    @property
    def degree(self) -> int:
        return sum(self.generator)

    @property
    def dimension(self) -> int:
        return len(self.multiplicative)

    def contains(self, mu: Exponent) -> bool:
        if not divides(self.generator, mu):
            return False
        return all(i in self.multiplicative for i, (a, b) in enumerate(zip(self.generator, mu)) if b > a)

    def count(self, s: int) -> int:
        """Number of monomials of degree s in the cone."""
        q, k = self.degree, self.dimension
        if s < q:
            return 0
        if k == 0:
            return 1 if s == q else 0
        return comb(s - q + k - 1, k - 1)


@dataclass
class ConeDecomposition:
    """Finite list of cones with a flavor tag."""
    cones: List[Cone]
    flavor: str
    nvars: int

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"Unknown decomposition flavor '{self.flavor}'")

    def __len__(self) -> int:
        return len(self.cones)

    def __iter__(self):
        return iter(self.cones)

    def covering_cones(self, mu: Exponent) -> List[Cone]:
        return [c for c in self.cones if c.contains(mu)]

    def hilbert_function(self, s: int) -> int:
        return sum(c.count(s) for c in self.cones)

    def is_rees(self) -> bool:
        return all(c.multiplicative == frozenset(range(len(c.multiplicative))) for c in self.cones)

    def is_hironaka(self) -> bool:
        return len({c.multiplicative for c in self.cones}) <= 1

    def max_degree(self) -> int:
        return max((c.degree for c in self.cones), default=0)

    def verify_disjoint_cover(self, ideal: Sequence[Exponent], degree: int) -> bool:
        """Every monomial up to degree lies in exactly one of the ideal or one cone."""
        ideal = list(ideal)
        for mu in exponents_up_to_degree(self.nvars, degree):
            hits = len(self.covering_cones(mu)) + (1 if in_ideal(mu, ideal) else 0)
            if hits != 1:
                logger.debug(f"Cover check failed at {mu} with {hits} hits")
                return False
        return True


def _complement(generators: List[Exponent], k: int) -> List[Tuple[Exponent, FrozenSet[int]]]:
    """Cones covering the complement of the ideal in the first k variables."""
    if not generators:
        return [((0,) * k, frozenset(range(k)))]
    if k == 0:
        return []
    last = k - 1
    values = sorted({g[last] for g in generators})
    top = values[-1]
    cones = []
    for c in range(top + 1):
        if c < top:
            slice_ = minimal_generators(g[:last] for g in generators if g[last] <= c)
            extra: FrozenSet[int] = frozenset()
        else:
            slice_ = minimal_generators(g[:last] for g in generators)
            extra = frozenset({last})
        for nu, mult in _complement(slice_, last):
            cones.append((nu + (c,), mult | extra))
    return cones


def complementary_decomposition_janet(generators: Sequence[Exponent], nvars: Optional[int] = None) -> ConeDecomposition:
    """Janet's recursion over the values of the last variable.

    Works for any finite generating set; on a Janet basis the multiplicative
    sets are those of the Janet division.
    """
    generators = [tuple(g) for g in generators]
    if nvars is None:
        if not generators:
            raise ValueError("Number of variables required for the zero ideal")
        nvars = len(generators[0])
    cones = [Cone(nu, mult) for nu, mult in _complement(minimal_generators(generators), nvars)]
    return ConeDecomposition(cones, 'complementary', nvars)


def complementary_decomposition_pommaret(
        basis: Sequence[Exponent], q: Optional[int] = None,
        nvars: Optional[int] = None) -> Tuple[ConeDecomposition, ConeDecomposition]:
    """Complementary decomposition from a monomial Pommaret basis of degree q.

    Returns the plain decomposition (standard monomials of degree below q
    without multiplicative variables plus the degree-q standard monomials with
    their Pommaret cones) and its Rees refinement.
    """
    basis = [tuple(mu) for mu in basis]
    if nvars is None:
        if not basis:
            raise ValueError("Number of variables required for the zero ideal")
        nvars = len(basis[0])
    if not basis:
        cone = ConeDecomposition([Cone((0,) * nvars, frozenset(range(nvars)))], 'rees', nvars)
        return ConeDecomposition(list(cone.cones), 'complementary', nvars), cone

    terms = [(mu, 0) for mu in basis]
    involutive, failure = is_involutive_monomial_set(DivisionKind.POMMARET, terms, nvars)
    if not involutive:
        generator, variable = failure
        raise NotQuasiStableError(
            f"Leading exponents do not form a Pommaret basis (generator {generator}, variable {variable})",
            witness=failure)

    degree_bound = max(sum(mu) for mu in basis)
    if q is None:
        q = degree_bound
    if q < degree_bound:
        raise ValueError(f"Degree {q} is below the basis degree {degree_bound}")

    low = [Cone(nu, frozenset()) for nu in exponents_up_to_degree(nvars, q - 1) if not in_ideal(nu, basis)]
    top = [Cone(nu, frozenset(range(cls(nu) + 1)))
           for nu in exponents_of_degree(nvars, q) if not in_ideal(nu, basis)]
    plain = ConeDecomposition(low + top, 'complementary', nvars)

    dmin = min(cls(mu) for mu in basis)
    if dmin == 0:
        return plain, ConeDecomposition(list(plain.cones), 'rees', nvars)
    refined = []
    for cone in top:
        k = cls(cone.generator)
        if k >= dmin:
            refined.append(cone)
        elif k == dmin - 1:
            nu = cone.generator[:k] + (0,) + cone.generator[k + 1:]
            refined.append(Cone(nu, frozenset(range(k + 1))))
    return plain, ConeDecomposition(refined, 'rees', nvars)


@dataclass
class HilbertData:
    """Hilbert series N(lambda)/(1-lambda)^n with the invariants it carries."""
    numerator: List[int]
    nvars: int
    reduced_numerator: List[int]
    dimension: int
    multiplicity: int
    hilbert_polynomial: object
    regularity_index: int
    decomposition: Optional[ConeDecomposition] = field(default=None, repr=False)

    def series(self):
        """The series as a sympy expression in lambda."""
        num = sum(c * LAMBDA ** i for i, c in enumerate(self.reduced_numerator))
        return num / (1 - LAMBDA) ** max(self.dimension, 0)

    def value(self, s: int) -> int:
        if self.decomposition is not None:
            return self.decomposition.hilbert_function(s)
        return int(self.hilbert_polynomial.subs(S, s))


def hilbert(decomposition: ConeDecomposition) -> HilbertData:
    """Hilbert data of the direct sum of the cones."""
    n = decomposition.nvars
    lam = LAMBDA
    numerator = Poly(0, lam, domain='ZZ')
    for cone in decomposition.cones:
        numerator += Poly(lam ** cone.degree * (1 - lam) ** (n - cone.dimension), lam, domain='ZZ')

    full = [int(c) for c in reversed(numerator.all_coeffs())] if not numerator.is_zero else [0]
    reduced, exponent = numerator, n
    factor = Poly(1 - lam, lam, domain='ZZ')
    while not reduced.is_zero and exponent > 0 and reduced.eval(1) == 0:
        reduced = reduced.quo(factor)
        exponent -= 1

    if reduced.is_zero:
        dimension, multiplicity, reduced_coeffs = -1, 0, [0]
    else:
        dimension = exponent
        multiplicity = int(reduced.eval(1))
        reduced_coeffs = [int(c) for c in reversed(reduced.all_coeffs())]

    hp = 0
    for cone in decomposition.cones:
        k = cone.dimension
        if k >= 1:
            hp += expand_func(binomial(S - cone.degree + k - 1, k - 1))
    hp = expand(hp)

    top = decomposition.max_degree()
    index = top + 1
    for s in range(top, -1, -1):
        if decomposition.hilbert_function(s) != hp.subs(S, s):
            break
        index = s

    return HilbertData(numerator=full, nvars=n, reduced_numerator=reduced_coeffs, dimension=dimension,
                       multiplicity=multiplicity, hilbert_polynomial=hp, regularity_index=index,
                       decomposition=decomposition)


def hilbert_function(decomposition: ConeDecomposition, s: int) -> int:
    return decomposition.hilbert_function(s)


def count_standard_monomials(generators: Sequence[Exponent], nvars: int, s: int) -> int:
    """Brute-force count of degree-s monomials outside the ideal."""
    generators = list(generators)
    return sum(1 for mu in exponents_of_degree(nvars, s) if not in_ideal(mu, generators))


@dataclass(frozen=True)
class StandardPair:
    exponent: Exponent
    free: FrozenSet[int]

    def is_admissible(self) -> bool:
        return all(self.exponent[i] == 0 for i in self.free)

    def __le__(self, other: 'StandardPair') -> bool:
        if not divides(self.exponent, other.exponent):
            return False
        n = len(self.exponent)
        return all(i in self.free for i in range(n)
                   if other.exponent[i] > self.exponent[i] or i in other.free)


@dataclass
class StandardPairs:
    """Standard pairs with the irreducible decomposition and associated primes."""
    pairs: List[StandardPair]
    irreducible_components: List[List[Exponent]]
    associated_primes: List[Tuple[int, ...]]
    nvars: int


def _admissible(cone: Cone) -> StandardPair:
    nu = tuple(0 if i in cone.multiplicative else e for i, e in enumerate(cone.generator))
    return StandardPair(nu, cone.multiplicative)


def _pair_key(pair: StandardPair) -> tuple:
    return (sum(pair.exponent), pair.exponent, tuple(sorted(pair.free)))


def irreducible_component(pair: StandardPair) -> List[Exponent]:
    """Generators x_i^(nu_i + 1) for every i outside the free set."""
    n = len(pair.exponent)
    gens = []
    for i in range(n):
        if i not in pair.free:
            mu = [0] * n
            mu[i] = pair.exponent[i] + 1
            gens.append(tuple(mu))
    return gens


def standard_pairs(decomposition: ConeDecomposition) -> StandardPairs:
    """Standard pairs extracted from any complementary decomposition."""
    candidates = sorted({_admissible(c) for c in decomposition.cones}, key=_pair_key)
    pairs = [p for p in candidates if not any(o != p and o <= p for o in candidates)]

    by_free: Dict[FrozenSet[int], List[Exponent]] = {}
    for p in pairs:
        by_free.setdefault(p.free, []).append(p.exponent)
    components = []
    for free in sorted(by_free, key=lambda f: (len(f), sorted(f))):
        exps = by_free[free]
        maximal = [nu for nu in exps if not any(o != nu and divides(nu, o) for o in exps)]
        for nu in sorted(maximal):
            components.append(irreducible_component(StandardPair(nu, free)))

    n = decomposition.nvars
    primes = sorted({tuple(i for i in range(n) if i not in p.free) for p in pairs}, key=lambda t: (len(t), t))
    return StandardPairs(pairs=pairs, irreducible_components=components, associated_primes=primes, nvars=n)


def associated_primes(decomposition: ConeDecomposition) -> List[Tuple[int, ...]]:
    return standard_pairs(decomposition).associated_primes


def irreducible_components(decomposition: ConeDecomposition) -> List[List[Exponent]]:
    return standard_pairs(decomposition).irreducible_components
