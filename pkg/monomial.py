"""
Monomial Ideal Helpers

Monomial ideals are handled as lists of exponent tuples. These helpers cover
enumeration of exponents, minimal generating sets, membership, colon ideals
and the ideal operations used by the structure analysis.
"""

from itertools import combinations_with_replacement
from typing import Iterable, Iterator, List, Sequence

import numpy as np
from sympy.polys.monomials import monomial_divides, monomial_lcm, monomial_mul

from algebra import Exponent, set_entry


def exponents_of_degree(n: int, d: int) -> Iterator[Exponent]:
    """All exponents of length n and total degree d."""
    if d < 0:
        return
    for combo in combinations_with_replacement(range(n), d):
        mu = [0] * n
        for i in combo:
            mu[i] += 1
        yield tuple(mu)


def exponents_up_to_degree(n: int, d: int) -> Iterator[Exponent]:
    for k in range(d + 1):
        yield from exponents_of_degree(n, k)


def exponents_in_variables(n: int, d: int, variables: Sequence[int]) -> Iterator[Exponent]:
    """Exponents of degree d supported on the given variable indices."""
    for combo in combinations_with_replacement(variables, d):
        mu = [0] * n
        for i in combo:
            mu[i] += 1
        yield tuple(mu)


def in_ideal(mu: Exponent, generators: Iterable[Exponent]) -> bool:
    return any(monomial_divides(g, mu) for g in generators)


def minimal_generators(generators: Iterable[Exponent]) -> List[Exponent]:
    """Minimal generating set, sorted by degree then exponent."""
    unique = sorted(set(tuple(g) for g in generators), key=lambda g: (sum(g), g))
    minimal: List[Exponent] = []
    for g in unique:
        if not any(monomial_divides(m, g) for m in minimal):
            minimal.append(g)
    return minimal


def same_ideal(a: Iterable[Exponent], b: Iterable[Exponent]) -> bool:
    return minimal_generators(a) == minimal_generators(b)


def contains(big: Iterable[Exponent], small: Iterable[Exponent]) -> bool:
    """True iff the ideal generated by small lies in the one generated by big."""
    big = list(big)
    return all(in_ideal(g, big) for g in small)


def colon_variable_power(generators: Iterable[Exponent], k: int) -> List[Exponent]:
    """Minimal generators of I : x_k^infinity (set x_k = 1)."""
    return minimal_generators(set_entry(g, k, 0) for g in generators)


def colon_monomial(generators: Iterable[Exponent], nu: Exponent) -> List[Exponent]:
    """Minimal generators of I : x^nu."""
    return minimal_generators(tuple(max(a - b, 0) for a, b in zip(g, nu)) for g in generators)


def ideal_sum(a: Iterable[Exponent], b: Iterable[Exponent]) -> List[Exponent]:
    return minimal_generators(list(a) + list(b))


def ideal_product(a: Iterable[Exponent], b: Iterable[Exponent]) -> List[Exponent]:
    b = list(b)
    return minimal_generators(monomial_mul(g, h) for g in a for h in b)


def ideal_intersection(a: Iterable[Exponent], b: Iterable[Exponent]) -> List[Exponent]:
    b = list(b)
    return minimal_generators(monomial_lcm(g, h) for g in a for h in b)


def max_variable_degree(generators: Iterable[Exponent], k: int) -> int:
    return max((g[k] for g in generators), default=0)


def random_partition(d: int, n: int, rng: np.random.Generator) -> Exponent:
    """Random exponent of length n and degree d (stars and bars)."""
    if n == 1:
        return (d,)
    bars = np.sort(rng.choice(d + n - 1, n - 1, replace=False))
    counts = np.empty(n, dtype=int)
    counts[0] = bars[0]
    for i in range(1, n - 1):
        counts[i] = bars[i] - bars[i - 1] - 1
    counts[n - 1] = d + n - 2 - bars[-1]
    return tuple(int(c) for c in counts)


def random_monomial_ideal(n: int, max_degree: int, size: int, rng: np.random.Generator) -> List[Exponent]:
    """Minimal generators of a random monomial ideal with at most size generators."""
    gens = []
    for _ in range(size):
        d = int(rng.integers(1, max_degree + 1))
        gens.append(random_partition(d, n, rng))
    return minimal_generators(gens)
