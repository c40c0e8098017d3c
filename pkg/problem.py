"""
Problem File Parser

Reads the plain-text problem format:

    # comment
    ring: x, y, z            variables in increasing order (x is the smallest)
    order: degrevlex         optional: lex, deglex or degrevlex
    division: janet          optional
    seed: 7                  optional, also degcap / itercap
    analyses: resolve, betti optional
    ideal:
      z^2 - y^2 - 2*x^2
      x*z + x*y

Module generators are written after a `module rank m:` header as tuples
`(f_1, ..., f_m)`. Coefficients are exact rationals; `^` and `**` both mean
a power and a coefficient may be juxtaposed with a variable (`2x`).
"""

import logging
import re
from pathlib import Path
from tokenize import TokenError
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Poly, QQ, Symbol
from sympy.parsing.sympy_parser import (convert_xor, implicit_multiplication, parse_expr,
                                        standard_transformations)
from sympy.polys.polyerrors import CoercionFailed, GeneratorsNeeded, PolynomialError

from algebra import ModuleElement
from config import COMMANDS, DIVISIONS, ORDERS
from errors import ProblemSyntaxError, UnknownVariableError
from models import ProblemSpec

logger = logging.getLogger(__name__)

TRANSFORMATIONS = standard_transformations + (implicit_multiplication, convert_xor)
NAME_PATTERN = re.compile(r'^[A-Za-z][A-Za-z0-9_]*$')
MODULE_HEADER = re.compile(r'^module\s+rank\s+(\d+)\s*:(.*)$')
HEADER_KEYS = ('ring', 'order', 'division', 'seed', 'degcap', 'itercap', 'analyses')


def _strip_comment(line: str) -> str:
    position = line.find('#')
    return line if position < 0 else line[:position]


def _column_of(raw: str, fragment: str, start: int = 0) -> int:
    position = raw.find(fragment, start)
    return position + 1 if position >= 0 else 1


def parse_polynomial(text: str, variables: Sequence[str], line: int = 1, column: int = 1) -> ModuleElement:
    """Parse one polynomial over QQ in the given variables.

    Args:
        text: Expression text
        variables: Declared variable names, smallest first
        line: Line number used in error messages
        column: Column of the first character of text

    Returns:
        Rank-1 ModuleElement

    Raises:
        ProblemSyntaxError: If the text is not a polynomial expression
        UnknownVariableError: If the text uses an undeclared name
    """
    symbols = {name: Symbol(name) for name in variables}
    stripped = text.strip()
    if not stripped:
        raise ProblemSyntaxError("Empty expression", line, column)
    column += len(text) - len(text.lstrip())
    try:
        expr = parse_expr(stripped, local_dict=dict(symbols), transformations=TRANSFORMATIONS)
    except SyntaxError as e:
        offset = e.offset or 1
        raise ProblemSyntaxError(f"Cannot parse '{stripped}'", line, column + max(offset - 1, 0))
    except (TokenError, TypeError, NameError, AttributeError) as e:
        raise ProblemSyntaxError(f"Cannot parse '{stripped}': {e}", line, column)

    free = getattr(expr, 'free_symbols', set())
    unknown = sorted(s.name for s in free if s.name not in symbols)
    if unknown:
        name = unknown[0]
        raise UnknownVariableError(f"Unknown variable '{name}'", line, column + _column_of(stripped, name) - 1)

    try:
        poly = Poly(expr, *symbols.values(), domain=QQ)
    except (PolynomialError, CoercionFailed, GeneratorsNeeded) as e:
        raise ProblemSyntaxError(f"Not a polynomial with rational coefficients: '{stripped}' ({e})", line, column)
    return ModuleElement.from_polynomial_dict(dict(poly.terms()), len(variables))


def _split_tuple(body: str) -> List[Tuple[str, int]]:
    """Top-level comma split with the offset of every entry."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        elif ch == ',' and depth == 0:
            parts.append((body[start:i], start))
            start = i + 1
    parts.append((body[start:], start))
    return parts


def parse_module_element(text: str, variables: Sequence[str], rank: int, line: int = 1,
                         column: int = 1) -> ModuleElement:
    """Parse a tuple `(f_1, ..., f_rank)` into an element of P^rank."""
    stripped = text.strip()
    column += len(text) - len(text.lstrip())
    if not (stripped.startswith('(') and stripped.endswith(')')):
        raise ProblemSyntaxError(f"Expected a tuple of {rank} entries", line, column)
    entries = _split_tuple(stripped[1:-1])
    if len(entries) != rank:
        raise ProblemSyntaxError(f"Expected {rank} entries, found {len(entries)}", line, column)
    components = [parse_polynomial(entry, variables, line, column + 1 + offset) for entry, offset in entries]
    return ModuleElement.from_components(components, len(variables))


def _parse_int(value: str, key: str, line: int, column: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ProblemSyntaxError(f"'{key}' expects an integer, got '{value}'", line, column)


def _parse_ring(value: str, line: int, column: int) -> List[str]:
    names = [name.strip() for name in value.split(',')]
    if not names or names == ['']:
        raise ProblemSyntaxError("Ring declares no variables", line, column)
    seen = set()
    for name in names:
        if not NAME_PATTERN.match(name):
            raise ProblemSyntaxError(f"Invalid variable name '{name}'", line, column)
        if name in seen:
            raise ProblemSyntaxError(f"Variable '{name}' declared twice", line, column)
        seen.add(name)
    return names


def parse_problem(text: str, source: Optional[str] = None) -> ProblemSpec:
    """
    Parse a problem file.

    Args:
        text: File contents
        source: Optional file name recorded in the spec

    Returns:
        ProblemSpec with exact rational generators

    Raises:
        ProblemSyntaxError: On malformed headers or expressions (with line/column)
        UnknownVariableError: If a generator uses an undeclared name
    """
    headers: Dict[str, Tuple[str, int, int]] = {}
    section: Optional[Tuple[str, int]] = None
    body: List[Tuple[str, int]] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        content = _strip_comment(raw)
        if not content.strip():
            continue
        if section is not None:
            body.append((content, number))
            continue

        stripped = content.strip()
        module = MODULE_HEADER.match(stripped)
        if module:
            section = ('module', int(module.group(1)))
            if module.group(2).strip():
                body.append((module.group(2), number))
            continue
        if ':' not in stripped:
            raise ProblemSyntaxError(f"Expected 'key: value', got '{stripped}'", number, _column_of(raw, stripped))
        key, value = stripped.split(':', 1)
        key = key.strip().lower()
        if key == 'ideal':
            section = ('ideal', 1)
            if value.strip():
                body.append((value, number))
            continue
        if key not in HEADER_KEYS:
            raise ProblemSyntaxError(f"Unknown header '{key}'", number, _column_of(raw, key))
        if key in headers:
            raise ProblemSyntaxError(f"Header '{key}' given twice", number, _column_of(raw, key))
        headers[key] = (value.strip(), number, _column_of(raw, value.strip()) if value.strip() else len(raw) + 1)

    if 'ring' not in headers:
        raise ProblemSyntaxError("Missing 'ring:' declaration", 1)
    if section is None:
        raise ProblemSyntaxError("Missing 'ideal:' or 'module rank m:' section", len(text.splitlines()) or 1)

    value, line, column = headers['ring']
    variables = _parse_ring(value, line, column)

    order = 'degrevlex'
    if 'order' in headers:
        order, line, column = headers['order']
        if order not in ORDERS:
            raise ProblemSyntaxError(f"Unknown term order '{order}'", line, column)

    division = None
    if 'division' in headers:
        division, line, column = headers['division']
        if division not in DIVISIONS:
            raise ProblemSyntaxError(f"Unknown division '{division}'", line, column)

    analyses = []
    if 'analyses' in headers:
        value, line, column = headers['analyses']
        analyses = [a.strip() for a in value.split(',') if a.strip()]
        for a in analyses:
            if a not in COMMANDS:
                raise ProblemSyntaxError(f"Unknown analysis '{a}'", line, column + _column_of(value, a) - 1)

    numbers = {}
    for key in ('seed', 'degcap', 'itercap'):
        if key in headers:
            value, line, column = headers[key]
            numbers[key] = _parse_int(value, key, line, column)

    kind, rank = section
    if rank < 1:
        raise ProblemSyntaxError("Module rank must be at least 1", body[0][1] if body else 1)

    generators = []
    for content, number in body:
        if kind == 'module':
            element = parse_module_element(content, variables, rank, number, 1)
        else:
            if content.strip().startswith('('):
                raise ProblemSyntaxError("Tuples need a 'module rank m:' section", number,
                                         _column_of(content, '('))
            element = parse_polynomial(content, variables, number, 1)
        if not element:
            logger.warning(f"line {number}: generator is zero and is ignored")
            continue
        generators.append(element)

    return ProblemSpec(
        variables=variables,
        generators=generators,
        order=order,
        rank=rank,
        is_module=kind == 'module',
        division=division,
        analyses=analyses,
        max_degree=numbers.get('degcap'),
        max_iterations=numbers.get('itercap'),
        seed=numbers.get('seed'),
        source=source,
    )


def load_problem(path: str) -> ProblemSpec:
    """Read and parse a problem file (UTF-8)."""
    problem_file = Path(path)
    if not problem_file.exists():
        raise FileNotFoundError(f"Problem file not found: {path}")
    return parse_problem(problem_file.read_text(encoding='utf-8'), source=str(path))


def format_problem(spec: ProblemSpec) -> str:
    """Write a spec back in the problem-file grammar."""
    lines = [f"ring: {', '.join(spec.variables)}", f"order: {spec.order}"]
    if spec.division:
        lines.append(f"division: {spec.division}")
    if spec.seed is not None:
        lines.append(f"seed: {spec.seed}")
    if spec.max_degree is not None:
        lines.append(f"degcap: {spec.max_degree}")
    if spec.max_iterations is not None:
        lines.append(f"itercap: {spec.max_iterations}")
    if spec.analyses:
        lines.append(f"analyses: {', '.join(spec.analyses)}")
    lines.append(f"module rank {spec.rank}:" if spec.is_module else "ideal:")
    wrap = spec.is_module and spec.rank == 1
    lines.extend(f"  ({g})" if wrap else f"  {g}" for g in spec.generator_strings())
    return '\n'.join(lines) + '\n'
