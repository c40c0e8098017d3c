"""
Report Output Module

Serializes analysis reports as schema-versioned JSON or readable text,
saves and loads report files, and tracks progress of batch runs.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from tqdm import tqdm

from models import AnalysisReport, BatchItem, BatchResults
from utils import format_duration, get_timestamp

RULE = "=" * 60


def render_json(report: AnalysisReport, include_timing: bool = False) -> str:
    """JSON text; byte-identical for identical input unless timing is included."""
    return json.dumps(report.to_dict(include_timing), indent=2, ensure_ascii=False) + "\n"


def _basis_table(listing: Dict[str, Any]) -> List[str]:
    rows = [("#", "generator", "leading term", "multiplicative")]
    for i, (g, lead, mult) in enumerate(zip(listing['generators'], listing['leading_terms'],
                                            listing['multiplicative']), start=1):
        rows.append((str(i), g, lead, ", ".join(mult) if mult else "-"))
    widths = [max(len(r[c]) for r in rows) for c in range(4)]
    lines = [f"  {listing['division']} basis: {listing['size']} elements, degree {listing['degree']}"]
    for j, row in enumerate(rows):
        lines.append("  " + "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if j == 0:
            lines.append("  " + "  ".join("-" * w for w in widths))
    return lines


def _is_basis(value: Any) -> bool:
    return isinstance(value, dict) and 'generators' in value and 'multiplicative' in value


def _is_cone_list(value: Any) -> bool:
    return isinstance(value, list) and bool(value) and isinstance(value[0], dict) and 'multiplicative' in value[0]


def _result_lines(key: str, value: Any) -> List[str]:
    title = key.replace('_', ' ')
    if _is_basis(value):
        return [f"{title}:"] + _basis_table(value)
    if _is_cone_list(value):
        lines = [f"{title}: {len(value)} cones"]
        for cone in value:
            mult = ", ".join(cone['multiplicative'])
            lines.append(f"  {cone['generator']} * k[{mult}]" if mult else f"  {cone['generator']}")
        return lines
    if key == 'levels':
        lines = ["levels:"]
        for level in value:
            lines.append(f"  level {level['level']} ({len(level['elements'])} generators)")
            for label, degree, element in zip(level['labels'], level['degrees'], level['elements']):
                alpha, ks = label
                tag = f"w{alpha + 1}" + (f"[{','.join(str(k + 1) for k in ks)}]" if ks else "")
                lines.append(f"    {tag} (degree {degree}): {element}")
        return lines
    if key == 'table' and isinstance(value, str):
        return ["betti table:"] + ["  " + line for line in value.splitlines()]
    if key == 'coordinate_change' and isinstance(value, dict):
        if value.get('identity'):
            return ["coordinate change: identity"]
        return ["coordinate change:"] + [f"  {s}" for s in value.get('substitutions', [])]
    if key == 'witness' and isinstance(value, dict) and 'variable' in value:
        return [f"witness: generator {value.get('generator')} with variable {value['variable']}"]
    if isinstance(value, dict):
        lines = [f"{title}:"]
        for k, v in value.items():
            lines.append(f"  {k.replace('_', ' ')}: {json.dumps(v, ensure_ascii=False)}")
        return lines
    return [f"{title}: {json.dumps(value, ensure_ascii=False)}"]


def render_text(report: AnalysisReport, include_timing: bool = False) -> str:
    """Human readable report with basis tables and multiplicative-variable columns"""
    problem = report.problem
    lines = [RULE, f"INVOLUTIVE ANALYSIS - {report.command.upper()}", RULE]
    if problem.get('source'):
        lines.append(f"Problem: {problem['source']}")
    lines.append(f"Ring: Q[{', '.join(problem.get('ring', []))}]"
                 + (f"^{problem['rank']}" if problem.get('module') else ""))
    lines.append(f"Order: {report.settings.get('order')}   Division: {report.settings.get('division')}   "
                 f"Seed: {report.settings.get('seed')}")
    lines.append(f"Generators ({len(problem.get('generators', []))}):")
    lines.extend(f"  {g}" for g in problem.get('generators', []))
    lines.append("")
    lines.append(f"Status: {report.status} (exit code {report.exit_code})")
    if report.error:
        lines.append(f"Error: {report.error}")
    if report.caps.get('hit'):
        lines.append(f"Caps hit: iterations {report.caps.get('max_iterations')}, degree {report.caps.get('max_degree')}")
    if include_timing:
        lines.append(f"Duration: {format_duration(report.duration)}")
    lines.append("-" * 30)
    for key, value in report.results.items():
        lines.extend(_result_lines(key, value))
    lines.append(RULE)
    return "\n".join(lines) + "\n"


def emit(report: AnalysisReport, format: str = "json", include_timing: bool = False) -> bytes:
    """Serialize a report as UTF-8 bytes in the json or text format"""
    if format.lower() == "json":
        return render_json(report, include_timing).encode('utf-8')
    if format.lower() == "text":
        return render_text(report, include_timing).encode('utf-8')
    raise ValueError(f"Unsupported format: {format}. Use 'json' or 'text'")


def save_report(report: AnalysisReport, path: str, format: str = "json", include_timing: bool = False) -> str:
    """Write a report file, creating parent directories"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(emit(report, format, include_timing))
    return str(target)


def load_report(path: str) -> AnalysisReport:
    """Read a json report back"""
    report_file = Path(path)
    if not report_file.exists():
        raise FileNotFoundError(f"Report file not found: {path}")
    try:
        data = json.loads(report_file.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise ValueError(f"Report is not valid JSON: {e}")
    return AnalysisReport.from_dict(data)


def _item_status(item: BatchItem) -> str:
    return item.report.status if item.report is not None else 'error'


class ProgressReporter:
    """Progress bar for batch runs"""

    def __init__(self, total: int, command: str, enabled: bool = True):
        self.command = command
        self.items: List[BatchItem] = []
        self.progress_bar: Optional[tqdm] = tqdm(total=total, desc=command, unit="files",
                                                 leave=True, disable=not enabled)

    def track(self, item: BatchItem):
        """Record one finished problem"""
        self.items.append(item)
        if self.progress_bar is not None:
            self.progress_bar.update(1)
            self.progress_bar.set_postfix(last=Path(item.path).name, status=_item_status(item))

    def close(self):
        if self.progress_bar is not None:
            self.progress_bar.close()
            self.progress_bar = None


def batch_summary(results: BatchResults, command: str) -> str:
    """Summary of a finished batch"""
    lines = [RULE, f"BATCH SUMMARY - {command.upper()}", RULE,
             f"Finished at: {get_timestamp()}",
             f"Total duration: {format_duration(results.total_duration)}",
             f"Problems: {len(results.items)}   Succeeded: {results.success_count}", ""]
    for item in results.items:
        line = f"  {item.path}: {_item_status(item)} (exit code {item.exit_code})"
        error = item.error or (item.report.error if item.report is not None else None)
        if error:
            line += f" - {error}"
        lines.append(line)
    lines.append(RULE)
    return "\n".join(lines)
