"""
Degreewise Linear Algebra

Homogeneous components of ideals and graded maps as exact matrices over QQ
(sympy DomainMatrix): spans, colon spans, ranks of graded maps and the
Bayer-Stillman regularity criterion.
"""

import logging
from typing import Dict, List, Sequence, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from algebra import Exponent, ModuleElement, add_exponents
from errors import InhomogeneousError
from monomial import exponents_of_degree

logger = logging.getLogger(__name__)


def rank_of_rows(rows: List[Dict[object, object]], columns: Dict[object, int]) -> int:
    """Rank of sparse rows given as {column key: coefficient}."""
    rows = [r for r in rows if r]
    if not rows or not columns:
        return 0
    dense = []
    for r in rows:
        line = [QQ.zero] * len(columns)
        for key, c in r.items():
            line[columns[key]] = c
        dense.append(line)
    return DomainMatrix(dense, (len(dense), len(columns)), QQ).rank()


def _check_homogeneous(polys: Sequence[ModuleElement]) -> None:
    for f in polys:
        if not f.is_homogeneous():
            raise InhomogeneousError("Degreewise linear algebra needs homogeneous input")


def component_rows(polys: Sequence[ModuleElement], degree: int) -> List[Dict[object, object]]:
    """Rows x^mu * f for every generator f with |mu| = degree - deg f."""
    if not polys:
        return []
    n = polys[0].nvars
    rows = []
    for f in polys:
        if not f or f.degree > degree:
            continue
        for mu in exponents_of_degree(n, degree - f.degree):
            rows.append({(add_exponents(nu, mu), comp): c for (nu, comp), c in f.terms.items()})
    return rows


def monomial_columns(n: int, degree: int, rank: int = 1) -> Dict[object, int]:
    keys = [(mu, comp) for comp in range(rank) for mu in exponents_of_degree(n, degree)]
    return {k: i for i, k in enumerate(keys)}


def span_dimension(polys: Sequence[ModuleElement], degree: int) -> int:
    """dim_k <F>_degree for homogeneous F."""
    _check_homogeneous(polys)
    if not polys:
        return 0
    n, rank = polys[0].nvars, polys[0].rank
    return rank_of_rows(component_rows(polys, degree), monomial_columns(n, degree, rank))


def full_dimension(n: int, degree: int, rank: int = 1) -> int:
    return len(monomial_columns(n, degree, rank))


def colon_dimension(polys: Sequence[ModuleElement], y: ModuleElement, degree: int) -> int:
    """dim_k (<F> : y)_degree for a linear form y."""
    _check_homogeneous(list(polys) + [y])
    n = y.nvars
    columns = monomial_columns(n, degree + 1)
    base = component_rows(polys, degree + 1)
    base_rank = rank_of_rows(base, columns)
    shifted = [{(add_exponents(nu, mu), 0): c for (nu, _), c in y.terms.items()} for mu in exponents_of_degree(n, degree)]
    image_rank = rank_of_rows(base + shifted, columns) - base_rank
    return full_dimension(n, degree) - image_rank


def bayer_stillman_check(polys: Sequence[ModuleElement], q: int, forms: Sequence[ModuleElement]) -> bool:
    """(<I, y_1..y_{j-1}> : y_j)_q = <I, y_1..y_{j-1}>_q for all j and <I, y_1..y_d>_q = P_q."""
    polys = [f for f in polys if f]
    forms = list(forms)
    _check_homogeneous(polys + forms)
    for y in forms:
        if y.degree != 1:
            raise InhomogeneousError("Bayer-Stillman forms must be linear")
    n = polys[0].nvars if polys else (forms[0].nvars if forms else 0)
    if not polys and n == 0:
        return True
    current = list(polys)
    for j, y in enumerate(forms):
        if current and colon_dimension(current, y, q) != span_dimension(current, q):
            logger.debug(f"Bayer-Stillman colon condition fails at form {j + 1} in degree {q}")
            return False
        current.append(y)
    if not current:
        return full_dimension(n, q) == 0
    return span_dimension(current, q) == full_dimension(n, q)


def graded_map_rank(images: Sequence[ModuleElement], source_degrees: Sequence[int], target_degrees: Sequence[int],
                    degree: int, nvars: int) -> Tuple[int, int]:
    """Rank of a graded map of free modules in one degree, with the source dimension.

    images[i] is the image of the i-th source generator in the target free
    module; the target generator of index c sits in degree target_degrees[c].
    """
    columns: Dict[object, int] = {}
    for comp, deg in enumerate(target_degrees):
        for mu in exponents_of_degree(nvars, degree - deg):
            columns[(mu, comp)] = len(columns)
    rows = []
    for image, deg in zip(images, source_degrees):
        for mu in exponents_of_degree(nvars, degree - deg):
            rows.append({(add_exponents(nu, mu), comp): c for (nu, comp), c in image.terms.items()})
    return rank_of_rows(rows, columns), len(rows)


def constant_rank(entries: Sequence[Sequence[object]]) -> int:
    """Rank of a matrix of rational constants."""
    entries = [list(r) for r in entries if r]
    if not entries or not entries[0]:
        return 0
    return DomainMatrix([[QQ.convert(c) for c in r] for r in entries], (len(entries), len(entries[0])), QQ).rank()


def free_module_dimension(degrees: Sequence[int], degree: int, nvars: int) -> int:
    return sum(len(list(exponents_of_degree(nvars, degree - d))) for d in degrees if degree >= d)


def monomials(n: int, degree: int) -> List[Exponent]:
    return list(exponents_of_degree(n, degree))
