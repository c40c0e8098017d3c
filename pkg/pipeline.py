"""
Analysis Pipeline

Runs one command of the command-line surface on a parsed problem and
collects a report. Exit codes: 0 success, 1 invalid input, 2 a divergence
witness was found (reported, not fatal), 3 a configured cap was hit.
"""

import logging
import time
from dataclasses import asdict
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from algebra import CoordinateChange, ModuleElement, Term, TermOrder, format_monomial
from completion import (DeltaWitness, InvolutiveBasis, complete, detect_delta_singularity,
                        find_delta_regular_coordinates, janet_pommaret_completion, monomial_exponents)
from config import COMMANDS, AnalysisConfig, AnalysisSettings, Limits
from decomposition import (Cone, ConeDecomposition, complementary_decomposition_janet,
                           complementary_decomposition_pommaret, hilbert, standard_pairs)
from divisions import DivisionKind
from errors import AlgebraError, LimitExceededError, NotQuasiStableError
from models import AnalysisReport, ProblemSpec
from resolution import (betti_oracle, free_resolution, minimize, projective_dimension, regularity)
from structure import primary_decomposition, saturate, structure_report, trung_invariants

logger = logging.getLogger(__name__)

EXIT_CODES = {'ok': 0, 'error': 1, 'diverged': 2, 'limit': 3}


class DivergenceFound(Exception):
    """A delta witness ended the command; the partial results are reported."""

    def __init__(self, results: Dict[str, Any]):
        super().__init__("Pommaret completion diverges in these coordinates")
        self.results = results


class RunContext:
    """Effective settings for one run"""

    def __init__(self, spec: ProblemSpec, settings: AnalysisSettings, limits: Limits):
        self.spec = spec
        self.settings = settings
        self.limits = limits
        self.order = TermOrder(settings.order)
        self.division = DivisionKind(settings.division)
        self.names = spec.variables

    @property
    def generators(self) -> List[ModuleElement]:
        if self.spec.generators:
            return list(self.spec.generators)
        return [ModuleElement.zero(self.spec.nvars, self.spec.rank)]

    def monomial(self, mu) -> str:
        return format_monomial(mu, self.names)

    def term(self, term: Term, rank: int) -> str:
        mu, comp = term
        mono = self.monomial(mu)
        return f"{mono}*e{comp + 1}" if rank > 1 else mono

    def variables(self, indices) -> List[str]:
        return [self.names[k] for k in sorted(indices)]

    def basis(self, basis: InvolutiveBasis) -> Dict[str, Any]:
        order = basis.order.base
        return {
            'division': basis.division.value,
            'size': len(basis),
            'degree': basis.degree,
            'generators': [g.to_string(self.names, order) for g in basis.generators],
            'leading_terms': [self.term(t, basis.rank) for t in basis.leading_terms],
            'multiplicative': [self.variables(basis.multiplicative(i)) for i in range(len(basis))],
        }

    def witness(self, witness: DeltaWitness, rank: int) -> Dict[str, Any]:
        lead = witness.element.leading_term(self.order)
        return {
            'index': witness.generator,
            'generator': self.term(lead, rank),
            'variable': self.names[witness.variable],
            'element': witness.element.to_string(self.names, self.order),
        }

    def change(self, change: Optional[CoordinateChange]) -> Dict[str, Any]:
        if change is None:
            return {'identity': True, 'substitutions': []}
        return {'identity': change.is_identity(), 'substitutions': change.describe(self.names),
                'matrix': change.rows()}

    def cones(self, cones: Sequence[Cone]) -> List[Dict[str, Any]]:
        return [{'generator': self.monomial(c.generator), 'multiplicative': self.variables(c.multiplicative)}
                for c in cones]


def effective_settings(config: AnalysisConfig, spec: ProblemSpec,
                       overrides: Optional[Dict[str, Any]] = None) -> Tuple[AnalysisSettings, Limits]:
    """Command-line overrides win over the problem header, which wins over the configuration."""
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    base = config.settings
    settings = AnalysisSettings(
        division=overrides.get('division', spec.division or base.division),
        order=overrides.get('order', spec.order or base.order),
        seed=overrides.get('seed', spec.seed if spec.seed is not None else base.seed),
        output_format=overrides.get('output_format', base.output_format),
        max_workers=overrides.get('max_workers', base.max_workers),
    )
    limits = Limits(
        max_iterations=overrides.get('max_iterations', spec.max_iterations if spec.max_iterations is not None
                                     else config.limits.max_iterations),
        max_degree=overrides.get('max_degree', spec.max_degree if spec.max_degree is not None
                                 else config.limits.max_degree),
        elementary_rounds=config.limits.elementary_rounds,
        escalation_attempts=config.limits.escalation_attempts,
        verify_degree=overrides.get('verify_degree', config.limits.verify_degree),
    )
    return settings, limits


def _require_ideal(ctx: RunContext, command: str) -> None:
    if ctx.spec.rank != 1 or ctx.spec.is_module:
        raise AlgebraError(f"'{command}' is available for ideals only")


def _pommaret_basis(ctx: RunContext) -> Tuple[InvolutiveBasis, Optional[CoordinateChange]]:
    """Pommaret basis, searching delta-regular coordinates under degrevlex."""
    if ctx.order.kind == 'degrevlex':
        change, basis = find_delta_regular_coordinates(ctx.generators, ctx.order, ctx.limits, ctx.settings.seed)
        return basis, change
    outcome = complete(ctx.generators, DivisionKind.POMMARET, ctx.order, ctx.limits)
    if outcome.status == 'diverged':
        raise DivergenceFound({'witness': ctx.witness(outcome.witness, outcome.basis.rank),
                               'partial_basis': ctx.basis(outcome.basis)})
    if outcome.status == 'limit':
        raise LimitExceededError("Pommaret completion hit the configured caps", partial=outcome.basis)
    return outcome.basis, None


def _basis_for(ctx: RunContext, division: DivisionKind) -> Tuple[InvolutiveBasis, Optional[CoordinateChange]]:
    if division == DivisionKind.POMMARET:
        return _pommaret_basis(ctx)
    outcome = complete(ctx.generators, division, ctx.order, ctx.limits)
    if not outcome.succeeded:
        raise LimitExceededError(f"{division.value.capitalize()} completion hit the configured caps",
                                 partial=outcome.basis)
    return outcome.basis, None


def _hilbert_block(decomposition: ConeDecomposition) -> Dict[str, Any]:
    data = hilbert(decomposition)
    return {
        'numerator': data.numerator,
        'reduced_numerator': data.reduced_numerator,
        'series': str(data.series()),
        'dimension': data.dimension,
        'multiplicity': data.multiplicity,
        'hilbert_polynomial': str(data.hilbert_polynomial),
        'regularity_index': data.regularity_index,
    }


# commands

def run_complete(ctx: RunContext) -> Dict[str, Any]:
    outcome = complete(ctx.generators, ctx.division, ctx.order, ctx.limits)
    if outcome.status == 'diverged':
        raise DivergenceFound({'witness': ctx.witness(outcome.witness, outcome.basis.rank),
                               'partial_basis': ctx.basis(outcome.basis), 'iterations': outcome.iterations})
    if outcome.status == 'limit':
        raise LimitExceededError("Completion hit the configured caps", partial=outcome.basis)
    return {'basis': ctx.basis(outcome.basis), 'iterations': outcome.iterations}


def run_delta_check(ctx: RunContext) -> Dict[str, Any]:
    basis, regular = janet_pommaret_completion(ctx.generators, ctx.order, ctx.limits)
    results = {'delta_regular': regular, 'janet_basis': ctx.basis(basis)}
    witness = detect_delta_singularity(basis.generators, ctx.order)
    if not regular:
        if witness is not None:
            results['witness'] = ctx.witness(witness, basis.rank)
        raise DivergenceFound(results)
    return results


def run_regular_coords(ctx: RunContext) -> Dict[str, Any]:
    change, basis = find_delta_regular_coordinates(ctx.generators, ctx.order, ctx.limits, ctx.settings.seed)
    return {'coordinate_change': ctx.change(change), 'basis': ctx.basis(basis), 'seed': ctx.settings.seed}


def run_analyze(ctx: RunContext) -> Dict[str, Any]:
    _require_ideal(ctx, 'analyze')
    basis, change = _pommaret_basis(ctx)
    report = structure_report(basis)
    results = asdict(report)
    results['regular_sequence'] = ctx.variables(report.regular_sequence)
    results['independent_set'] = ctx.variables(report.independent_set)
    results['basis'] = ctx.basis(basis)
    results['coordinate_change'] = ctx.change(change)
    decomposition = complementary_decomposition_janet(basis.leading_exponents, basis.nvars)
    results['hilbert'] = _hilbert_block(decomposition)
    return results


def run_decompose(ctx: RunContext) -> Dict[str, Any]:
    _require_ideal(ctx, 'decompose')
    basis, change = _basis_for(ctx, ctx.division)
    leads = basis.leading_exponents
    results = {'basis': ctx.basis(basis), 'coordinate_change': ctx.change(change)}
    if ctx.division == DivisionKind.POMMARET:
        plain, rees = complementary_decomposition_pommaret(leads, nvars=basis.nvars)
        results['decomposition'] = ctx.cones(plain.cones)
        results['rees'] = ctx.cones(rees.cones)
    else:
        plain = complementary_decomposition_janet(leads, basis.nvars)
        results['decomposition'] = ctx.cones(plain.cones)
    results['hilbert'] = _hilbert_block(plain)
    return results


def run_standard_pairs(ctx: RunContext) -> Dict[str, Any]:
    _require_ideal(ctx, 'standard-pairs')
    basis, _ = _basis_for(ctx, DivisionKind.JANET)
    pairs = standard_pairs(complementary_decomposition_janet(basis.leading_exponents, basis.nvars))
    return {
        'pairs': [{'monomial': ctx.monomial(p.exponent), 'free': ctx.variables(p.free)} for p in pairs.pairs],
        'irreducible_components': [[ctx.monomial(g) for g in comp] for comp in pairs.irreducible_components],
        'associated_primes': [ctx.variables(p) for p in pairs.associated_primes],
        'leading_ideal_only': not basis.is_monomial(),
    }


def run_primary(ctx: RunContext) -> Dict[str, Any]:
    _require_ideal(ctx, 'primary')
    exponents = monomial_exponents(ctx.spec.generators)
    decomposition = primary_decomposition(exponents, ctx.spec.nvars)
    return {
        'components': [{'index': c.index, 'prime': ctx.variables(c.prime),
                        'generators': [ctx.monomial(g) for g in c.generators]}
                       for c in decomposition.components],
        'sequential_chain': [[ctx.monomial(g) for g in ideal] for ideal in decomposition.sequential_chain],
    }


def _resolution_block(ctx: RunContext, resolution) -> Dict[str, Any]:
    order = TermOrder('degrevlex')
    levels = []
    for i, level in enumerate(resolution.levels):
        levels.append({
            'level': i,
            'labels': [[alpha, list(ks)] for alpha, ks in level.labels],
            'degrees': list(level.degrees),
            'elements': [e.to_string(ctx.names, order) for e in level.elements],
        })
    return {'ranks': resolution.ranks, 'length': resolution.length, 'levels': levels}


def _resolution(ctx: RunContext):
    if ctx.division == DivisionKind.THOMAS:
        raise AlgebraError("Resolutions need the Pommaret or the Janet division")
    basis, change = _basis_for(ctx, ctx.division)
    resolution = free_resolution(basis, verify_degree=ctx.limits.verify_degree)
    return basis, change, resolution


def run_resolve(ctx: RunContext) -> Dict[str, Any]:
    basis, change, resolution = _resolution(ctx)
    results = _resolution_block(ctx, resolution)
    results['coordinate_change'] = ctx.change(change)
    if basis.division == DivisionKind.POMMARET and basis.order.class_respecting:
        results['projective_dimension'] = projective_dimension(basis)
    return results


def run_betti(ctx: RunContext) -> Dict[str, Any]:
    _, change, resolution = _resolution(ctx)
    minimal = minimize(resolution)
    results = {'ranks': resolution.ranks, 'coordinate_change': ctx.change(change), 'skipped': minimal.skipped}
    if minimal.skipped:
        return results
    oracle = betti_oracle(resolution)
    if oracle != minimal.betti:
        raise AssertionError("Minimized Betti numbers disagree with the constant-rank oracle")
    results.update({
        'minimal_ranks': minimal.resolution.ranks,
        'betti': [[i, j, b] for (i, j), b in sorted(minimal.betti.as_dict().items())],
        'table': minimal.betti.render(),
        'extremal': [list(e) for e in minimal.extremal],
        'eliminated': minimal.eliminated,
        'minimal_input': not minimal.changed,
    })
    return results


def run_regularity(ctx: RunContext) -> Dict[str, Any]:
    result = regularity(ctx.generators, ctx.order, ctx.limits, ctx.settings.seed)
    return {
        'regularity': result.regularity,
        'positions': result.positions,
        'projective_dimension': result.projective_dimension,
        'leading_ideal_only': result.leading_ideal_only,
        'basis': ctx.basis(result.basis),
        'coordinate_change': ctx.change(result.change),
        'seed': ctx.settings.seed,
    }


def run_saturate(ctx: RunContext) -> Dict[str, Any]:
    _require_ideal(ctx, 'saturate')
    basis, change = _pommaret_basis(ctx)
    result = saturate(basis)
    return {'saturated': result.saturated, 'satiety': result.satiety, 'basis': ctx.basis(result.basis),
            'coordinate_change': ctx.change(change)}


def run_trung(ctx: RunContext) -> Dict[str, Any]:
    _require_ideal(ctx, 'trung')
    invariants = trung_invariants(monomial_exponents(ctx.spec.generators), ctx.spec.nvars, ctx.limits)
    return {
        'values': invariants.values,
        'regularity': invariants.regularity,
        'ideal_depth': invariants.ideal_depth,
        'from_ideal_depth': invariants.from_ideal_depth(),
        'from_quotient_depth': invariants.from_quotient_depth(),
    }


HANDLERS: Dict[str, Callable[[RunContext], Dict[str, Any]]] = {
    'complete': run_complete,
    'delta-check': run_delta_check,
    'regular-coords': run_regular_coords,
    'analyze': run_analyze,
    'decompose': run_decompose,
    'standard-pairs': run_standard_pairs,
    'primary': run_primary,
    'resolve': run_resolve,
    'betti': run_betti,
    'regularity': run_regularity,
    'saturate': run_saturate,
    'trung': run_trung,
}


class AnalysisPipeline:
    """Runs commands on parsed problems with one configuration"""

    def __init__(self, config: Optional[AnalysisConfig] = None, overrides: Optional[Dict[str, Any]] = None):
        self.config = config or AnalysisConfig()
        self.overrides = dict(overrides or {})

    def run(self, command: str, spec: ProblemSpec) -> AnalysisReport:
        """
        Run one command.

        Args:
            command: One of the command names in config.COMMANDS
            spec: Parsed problem

        Returns:
            AnalysisReport with status and exit code set
        """
        if command not in COMMANDS:
            raise ValueError(f"Unknown command '{command}' (expected one of {', '.join(COMMANDS)})")
        settings, limits = effective_settings(self.config, spec, self.overrides)
        ctx = RunContext(spec, settings, limits)
        caps = {'max_iterations': limits.max_iterations, 'max_degree': limits.max_degree, 'hit': False}
        settings_echo = {'division': settings.division, 'order': settings.order, 'seed': settings.seed}

        start = time.time()
        status, results, error = 'ok', {}, None
        logger.info(f"{command}: {spec.source or '<input>'} ({len(spec.generators)} generators, "
                    f"{settings.division}, {settings.order})")
        try:
            results = HANDLERS[command](ctx)
        except DivergenceFound as e:
            status, results = 'diverged', e.results
            logger.info(f"{command}: divergence witness reported")
        except NotQuasiStableError as e:
            status, error = 'diverged', str(e)
            results = {'witness': _plain(e.witness)}
            logger.info(f"{command}: {e}")
        except LimitExceededError as e:
            status, error = 'limit', str(e)
            caps['hit'] = True
            if isinstance(e.partial, InvolutiveBasis):
                results = {'partial_basis': ctx.basis(e.partial)}
            logger.warning(f"{command}: {e}")
        except (AlgebraError, ValueError) as e:
            status, error = 'error', str(e)
            logger.error(f"{command}: {e}")
        except AssertionError as e:
            status, error = 'error', f"Internal consistency check failed: {e}"
            logger.error(f"{command}: internal consistency check failed", exc_info=True)

        duration = time.time() - start
        logger.debug(f"{command} finished with status {status} in {duration:.3f}s")
        return AnalysisReport(command=command, status=status, exit_code=EXIT_CODES[status], problem=spec.echo(),
                              settings=settings_echo, results=results, caps=caps, error=error, duration=duration)

    def run_all(self, spec: ProblemSpec, commands: Optional[Sequence[str]] = None) -> List[AnalysisReport]:
        """Run the given commands, or the analyses listed in the problem file."""
        return [self.run(command, spec) for command in (commands or spec.analyses)]


def _plain(value: Any) -> Any:
    if value is None or isinstance(value, (int, str, float, bool)):
        return value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, DeltaWitness):
        return {'index': value.generator, 'variable': value.variable}
    return str(value)
