#!/usr/bin/env python3
"""
Report Output Tests

Tests for JSON and text rendering of analysis reports, report files and
the batch progress and summary output.
"""

import json
import os
import tempfile

import pytest

from config import AnalysisConfig, Limits
from models import SCHEMA_VERSION, AnalysisReport, BatchItem, BatchResults
from pipeline import AnalysisPipeline
from problem import parse_problem
from reporter import ProgressReporter, batch_summary, emit, load_report, render_text, save_report

SQUARE = "ring: x, y\nideal:\n  x^2\n  x*y\n  y^2\n"
JANET = ("ring: x, y, z\ndivision: janet\nideal:\n"
         "  z^2 - y^2 - 2*x^2\n  x*z + x*y\n  y*z + y^2 + x^2\n")


def run(command, text):
    pipeline = AnalysisPipeline(AnalysisConfig(limits=Limits()))
    return pipeline.run(command, parse_problem(text, source="square.txt"))


class TestJsonOutput:
    """Test the JSON format"""

    def test_betti_report(self):
        """Test the fields of a Betti report"""
        data = json.loads(emit(run('betti', SQUARE), 'json'))
        assert data['schema'] == SCHEMA_VERSION
        assert data['command'] == 'betti'
        assert data['status'] == 'ok'
        assert data['exit_code'] == 0
        assert data['problem']['ring'] == ['x', 'y']
        assert data['problem']['generators'] == ['x^2', 'x*y', 'y^2']
        assert data['settings'] == {'division': 'pommaret', 'order': 'degrevlex', 'seed': 0}
        assert data['results']['betti'] == [[0, 2, 3], [1, 3, 2]]
        assert data['results']['table'] == "       0 1\ntotal: 3 2\n    2: 3 2"
        assert data['results']['minimal_input'] is True
        assert 'timing' not in data

    def test_output_is_deterministic(self):
        """Test identical input gives identical bytes"""
        assert emit(run('resolve', SQUARE), 'json') == emit(run('resolve', SQUARE), 'json')

    def test_timing_is_optional(self):
        """Test timing appears only on request"""
        data = json.loads(emit(run('complete', SQUARE), 'json', include_timing=True))
        assert data['timing']['seconds'] >= 0

    def test_unsupported_format(self):
        """Test unknown formats are rejected"""
        with pytest.raises(ValueError, match="Unsupported format: xml"):
            emit(run('complete', SQUARE), 'xml')

    def test_error_field(self):
        """Test failed runs carry the error message"""
        data = json.loads(emit(run('primary', "ring: x, y\nideal:\n x*y - y^2"), 'json'))
        assert data['exit_code'] == 1
        assert "monomial" in data['error']


class TestTextOutput:
    """Test the human readable format"""

    def test_basis_table(self):
        """Test the basis table lists multiplicative variables"""
        text = render_text(run('complete', JANET))
        assert "INVOLUTIVE ANALYSIS - COMPLETE" in text
        assert "Ring: Q[x, y, z]" in text
        assert "janet basis: 4 elements, degree 3" in text
        assert "multiplicative" in text
        assert "x^3" in text
        assert "Status: ok (exit code 0)" in text

    def test_betti_table(self):
        """Test the Betti table is indented under its title"""
        text = emit(run('betti', SQUARE), 'text').decode('utf-8')
        assert "betti table:\n         0 1\n  total: 3 2\n      2: 3 2" in text

    def test_resolution_levels(self):
        """Test levels list labelled generators"""
        text = render_text(run('resolve', SQUARE))
        assert "level 0 (3 generators)" in text
        assert "level 1 (2 generators)" in text
        assert "w1 (degree 2)" in text

    def test_decomposition_cones(self):
        """Test cones are written with their multiplicative variables"""
        text = render_text(run('decompose', "ring: x, y\nideal:\n  y\n"))
        assert "decomposition: 2 cones\n  1\n  x * k[x]" in text
        assert "rees: 1 cones\n  1 * k[x]" in text

    def test_divergence(self):
        """Test the witness line"""
        text = render_text(run('complete', JANET.replace("division: janet", "division: pommaret")))
        assert "Status: diverged (exit code 2)" in text
        assert "witness: generator x^3 with variable y" in text


class TestReportFiles:
    """Test saving and loading reports"""

    def test_round_trip(self):
        """Test a saved report loads back"""
        report = run('betti', SQUARE)
        with tempfile.TemporaryDirectory() as temp_dir:
            path = save_report(report, os.path.join(temp_dir, "out", "square.json"))
            loaded = load_report(path)
        assert loaded.command == 'betti'
        assert loaded.exit_code == 0
        assert loaded.results == json.loads(json.dumps(report.results))

    def test_missing_report(self):
        """Test loading a missing file"""
        with pytest.raises(FileNotFoundError, match="Report file not found"):
            load_report("/nonexistent/report.json")

    def test_invalid_json(self):
        """Test loading a file that is not JSON"""
        with tempfile.NamedTemporaryFile(mode='w', suffix='.json', delete=False) as f:
            f.write("{not json")
            path = f.name
        try:
            with pytest.raises(ValueError, match="not valid JSON"):
                load_report(path)
        finally:
            os.unlink(path)

    def test_schema_version(self):
        """Test reports from another schema are rejected"""
        data = run('complete', SQUARE).to_dict()
        data['schema'] = SCHEMA_VERSION + 1
        with pytest.raises(ValueError, match="Unsupported report schema"):
            AnalysisReport.from_dict(data)


class TestBatchOutput:
    """Test progress tracking and the batch summary"""

    def test_summary(self):
        """Test the summary lists every item"""
        results = BatchResults(items=[BatchItem(path="a.txt", report=run('complete', SQUARE)),
                                      BatchItem(path="b.txt", error="line 1, column 1: Missing 'ring:'")],
                               total_duration=1.5)
        summary = batch_summary(results, 'complete')
        assert "BATCH SUMMARY - COMPLETE" in summary
        assert "Total duration: 1.50s" in summary
        assert "Problems: 2   Succeeded: 1" in summary
        assert "a.txt: ok (exit code 0)" in summary
        assert "b.txt: error (exit code 1) - line 1, column 1: Missing 'ring:'" in summary
        assert results.exit_code == 1

    def test_progress_reporter(self):
        """Test tracking with the progress bar disabled"""
        progress = ProgressReporter(2, 'betti', enabled=False)
        progress.track(BatchItem(path="a.txt", error="boom"))
        progress.track(BatchItem(path="b.txt", report=run('betti', SQUARE)))
        progress.close()
        assert [item.exit_code for item in progress.items] == [1, 0]
        assert progress.progress_bar is None


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
