"""
Data Models Module

This module contains the dataclass definitions shared by the parser, the
analysis pipeline, the reporter and the batch runner: the parsed problem,
the per-command report and the batch results.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from algebra import ModuleElement, TermOrder

SCHEMA_VERSION = 1


@dataclass
class ProblemSpec:
    """A parsed problem file.

    Variables are listed in increasing order: the first name is x_1, the
    smallest variable.
    """
    variables: List[str]
    generators: List[ModuleElement]
    order: str = 'degrevlex'
    rank: int = 1
    is_module: bool = False
    division: Optional[str] = None
    analyses: List[str] = field(default_factory=list)
    max_degree: Optional[int] = None
    max_iterations: Optional[int] = None
    seed: Optional[int] = None
    source: Optional[str] = None

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def generator_strings(self) -> List[str]:
        order = TermOrder(self.order)
        return [g.to_string(self.variables, order) for g in self.generators]

    def echo(self) -> Dict[str, Any]:
        """Problem fields as they appear in a report."""
        return {
            'source': self.source,
            'ring': list(self.variables),
            'order': self.order,
            'rank': self.rank,
            'module': self.is_module,
            'generators': self.generator_strings(),
        }


@dataclass
class AnalysisReport:
    """Result of one command on one problem"""
    command: str
    status: str
    exit_code: int
    problem: Dict[str, Any]
    settings: Dict[str, Any]
    results: Dict[str, Any] = field(default_factory=dict)
    caps: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    duration: float = 0.0
    schema: int = SCHEMA_VERSION

    @property
    def succeeded(self) -> bool:
        return self.exit_code == 0

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data = {
            'schema': self.schema,
            'command': self.command,
            'status': self.status,
            'exit_code': self.exit_code,
            'problem': self.problem,
            'settings': self.settings,
            'caps': self.caps,
            'results': self.results,
        }
        if self.error is not None:
            data['error'] = self.error
        if include_timing:
            data['timing'] = {'seconds': round(self.duration, 6)}
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AnalysisReport':
        schema = data.get('schema')
        if schema != SCHEMA_VERSION:
            raise ValueError(f"Unsupported report schema {schema!r} (expected {SCHEMA_VERSION})")
        return cls(
            command=data['command'],
            status=data['status'],
            exit_code=data['exit_code'],
            problem=data.get('problem', {}),
            settings=data.get('settings', {}),
            results=data.get('results', {}),
            caps=data.get('caps', {}),
            error=data.get('error'),
            duration=data.get('timing', {}).get('seconds', 0.0),
        )


@dataclass
class BatchItem:
    """Outcome for one problem file of a batch"""
    path: str
    report: Optional[AnalysisReport] = None
    error: Optional[str] = None

    @property
    def exit_code(self) -> int:
        if self.report is None:
            return 1
        return self.report.exit_code


@dataclass
class BatchResults:
    """Overall batch results"""
    items: List[BatchItem]
    total_duration: float

    @property
    def exit_code(self) -> int:
        return max((item.exit_code for item in self.items), default=0)

    @property
    def success_count(self) -> int:
        return sum(1 for item in self.items if item.exit_code == 0)
