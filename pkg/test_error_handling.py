#!/usr/bin/env python3
"""
Error Handling Tests

This module contains tests for error scenarios: malformed problem files with
line and column positions, invalid configuration, algebraic preconditions,
configured caps and failures inside command handlers.
"""

import os
import tempfile
from unittest.mock import patch

import pytest

from algebra import ModuleElement, TermOrder
from completion import find_delta_regular_coordinates
from config import AnalysisConfig, Limits, load_config
from errors import LimitExceededError, ProblemSyntaxError, UnknownVariableError
from models import ProblemSpec
from pipeline import AnalysisPipeline
from problem import load_problem, parse_polynomial, parse_problem


def problem(text):
    return parse_problem(text, source="<test>")


class TestProblemSyntaxErrors:
    """Test parser errors and their positions"""

    def test_unknown_variable_position(self):
        """Test the column points at the undeclared name"""
        with pytest.raises(UnknownVariableError) as excinfo:
            problem("ring: x\nideal:\n x + q")
        assert excinfo.value.line == 3
        assert excinfo.value.column == 6
        assert str(excinfo.value) == "line 3, column 6: Unknown variable 'q'"

    def test_unknown_variable_is_syntax_error(self):
        """Test callers can catch one exception type"""
        with pytest.raises(ProblemSyntaxError, match="Unknown variable 'w'"):
            problem("ring: x, y\nideal:\n  x*y\n  w")

    def test_missing_ring(self):
        """Test a file without a ring line"""
        with pytest.raises(ProblemSyntaxError, match="Missing 'ring:'"):
            problem("ideal:\n x")

    def test_missing_section(self):
        """Test a file without generators"""
        with pytest.raises(ProblemSyntaxError, match="Missing 'ideal:'"):
            problem("ring: x, y\n")

    def test_unknown_header(self):
        """Test unknown keys are reported with their line"""
        with pytest.raises(ProblemSyntaxError, match="Unknown header 'colour'") as excinfo:
            problem("ring: x\ncolour: red\nideal:\n x")
        assert excinfo.value.line == 2
        assert excinfo.value.column == 1

    def test_duplicate_header(self):
        """Test a repeated header"""
        with pytest.raises(ProblemSyntaxError, match="given twice"):
            problem("ring: x\nseed: 1\nseed: 2\nideal:\n x")

    def test_duplicate_variable(self):
        """Test a variable declared twice"""
        with pytest.raises(ProblemSyntaxError, match="declared twice"):
            problem("ring: x, x\nideal:\n x")

    def test_invalid_variable_name(self):
        """Test names must be identifiers"""
        with pytest.raises(ProblemSyntaxError, match="Invalid variable name"):
            problem("ring: x, 2y\nideal:\n x")

    def test_unknown_order_and_division(self):
        """Test header values are validated"""
        with pytest.raises(ProblemSyntaxError, match="Unknown term order 'grevlex'"):
            problem("ring: x\norder: grevlex\nideal:\n x")
        with pytest.raises(ProblemSyntaxError, match="Unknown division 'riquier'"):
            problem("ring: x\ndivision: riquier\nideal:\n x")

    def test_unknown_analysis(self):
        """Test the analyses header lists known commands"""
        with pytest.raises(ProblemSyntaxError, match="Unknown analysis 'homology'"):
            problem("ring: x\nanalyses: resolve, homology\nideal:\n x")

    def test_integer_headers(self):
        """Test seed and caps must be integers"""
        with pytest.raises(ProblemSyntaxError, match="'itercap' expects an integer"):
            problem("ring: x\nitercap: many\nideal:\n x")

    def test_line_without_colon(self):
        """Test a stray line before the section"""
        with pytest.raises(ProblemSyntaxError, match="Expected 'key: value'") as excinfo:
            problem("ring: x\n  oops\nideal:\n x")
        assert excinfo.value.line == 2
        assert excinfo.value.column == 3

    def test_tuple_in_ideal(self):
        """Test tuples are only accepted in module sections"""
        with pytest.raises(ProblemSyntaxError, match="Tuples need"):
            problem("ring: x\nideal:\n (x, 1)")

    def test_module_arity(self):
        """Test every tuple has rank entries"""
        with pytest.raises(ProblemSyntaxError, match="Expected 2 entries, found 1"):
            problem("ring: x\nmodule rank 2:\n (x)")
        with pytest.raises(ProblemSyntaxError, match="Expected a tuple"):
            problem("ring: x\nmodule rank 2:\n x, 1")

    def test_not_a_polynomial(self):
        """Test rational functions are rejected"""
        with pytest.raises(ProblemSyntaxError, match="Not a polynomial"):
            parse_polynomial("1/x", ['x'])

    def test_unparsable_expression(self):
        """Test malformed expressions"""
        with pytest.raises(ProblemSyntaxError, match="Cannot parse"):
            parse_polynomial("x +", ['x'])
        with pytest.raises(ProblemSyntaxError, match="Empty expression"):
            parse_polynomial("   ", ['x'])

    def test_zero_generators_are_dropped(self):
        """Test zero generators are ignored with a warning"""
        spec = problem("ring: x, y\nideal:\n  0\n  x - x")
        assert spec.generators == []
        assert spec.nvars == 2

    def test_comments_and_blank_lines(self):
        """Test comments anywhere on a line"""
        spec = problem("# header\n\nring: x, y  # variables\nideal:\n  x*y  # product\n\n  y^2\n")
        assert len(spec.generators) == 2

    def test_missing_problem_file(self):
        """Test loading a file that does not exist"""
        with pytest.raises(FileNotFoundError, match="Problem file not found"):
            load_problem("/nonexistent/problem.txt")


class TestConfigurationErrors:
    """Test invalid configuration files"""

    def write_config(self, content):
        with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
            f.write(content)
            return f.name

    def test_unknown_order(self):
        """Test an unknown term order in the settings"""
        path = self.write_config("settings:\n  order: revlex\n")
        try:
            with pytest.raises(ValueError, match="Unknown term order"):
                load_config(path)
        finally:
            os.unlink(path)

    def test_unknown_format(self):
        """Test an unknown output format"""
        path = self.write_config("settings:\n  output_format: xml\n")
        try:
            with pytest.raises(ValueError, match="Unknown output format"):
                load_config(path)
        finally:
            os.unlink(path)

    def test_workers(self):
        """Test the worker count must be positive"""
        path = self.write_config("settings:\n  max_workers: 0\n")
        try:
            with pytest.raises(ValueError, match="max_workers must be at least 1"):
                load_config(path)
        finally:
            os.unlink(path)

    def test_not_a_mapping(self):
        """Test a YAML list is rejected"""
        path = self.write_config("- pommaret\n- janet\n")
        try:
            with pytest.raises(ValueError, match="must be a mapping"):
                load_config(path)
        finally:
            os.unlink(path)


class TestPipelineErrors:
    """Test how command failures become report statuses"""

    def setup_method(self):
        """Set up test fixtures"""
        self.pipeline = AnalysisPipeline(AnalysisConfig(limits=Limits()))

    def test_polynomial_input_for_monomial_command(self):
        """Test primary decomposition rejects polynomials"""
        report = self.pipeline.run('primary', problem("ring: x, y\nideal:\n x*y - y^2"))
        assert report.status == 'error'
        assert report.exit_code == 1
        assert "monomial" in report.error

    def test_module_input_for_ideal_command(self):
        """Test ideal-only commands reject modules"""
        report = self.pipeline.run('saturate', problem("ring: x, y\nmodule rank 2:\n (x, y)"))
        assert report.exit_code == 1
        assert "ideals only" in report.error

    def test_thomas_resolution(self):
        """Test resolutions need a division of Schreyer type"""
        report = self.pipeline.run('resolve', problem("ring: x, y\ndivision: thomas\nideal:\n x^2\n y^2"))
        assert report.exit_code == 1
        assert "Pommaret or the Janet" in report.error

    def test_not_quasi_stable(self):
        """Test Trung invariants of a non quasi-stable ideal are reported as divergence"""
        report = self.pipeline.run('trung', problem("ring: x, y\nideal:\n x*y"))
        assert report.status == 'diverged'
        assert report.exit_code == 2
        assert report.results['witness'] == 0

    def test_iteration_cap(self):
        """Test a hit cap is reported with the partial basis"""
        pipeline = AnalysisPipeline(AnalysisConfig(limits=Limits()), {'max_iterations': 0})
        report = pipeline.run('complete', problem("ring: x, y, z\ndivision: janet\nideal:\n"
                                                  "  z^2 - y^2 - 2*x^2\n  x*z + x*y\n  y*z + y^2 + x^2"))
        assert report.status == 'limit'
        assert report.exit_code == 3
        assert report.caps['hit'] is True
        assert report.caps['max_iterations'] == 0
        assert report.results['partial_basis']['size'] == 3

    def test_unknown_command(self):
        """Test commands are validated before running"""
        with pytest.raises(ValueError, match="Unknown command 'solve'"):
            self.pipeline.run('solve', problem("ring: x\nideal:\n x"))

    def test_internal_check_failure(self):
        """Test failed consistency checks become error reports"""
        def broken(ctx):
            raise AssertionError("ranks differ")

        with patch.dict('pipeline.HANDLERS', {'resolve': broken}):
            report = self.pipeline.run('resolve', problem("ring: x\nideal:\n x"))
        assert report.status == 'error'
        assert report.error == "Internal consistency check failed: ranks differ"

    def test_empty_spec(self):
        """Test an empty generator list is the zero ideal"""
        spec = ProblemSpec(variables=['x', 'y'], generators=[])
        report = self.pipeline.run('complete', spec)
        assert report.exit_code == 0
        assert report.results['basis']['size'] == 0


class TestLimits:
    """Test configured caps in the library"""

    def test_coordinate_search_gives_up(self):
        """Test the search raises once rounds and attempts are exhausted"""
        gens = [parse_polynomial("x*y", ['x', 'y'])]
        limits = Limits(elementary_rounds=0, escalation_attempts=0)
        with pytest.raises(LimitExceededError, match="No delta-regular coordinates") as excinfo:
            find_delta_regular_coordinates(gens, TermOrder('degrevlex'), limits)
        assert excinfo.value.partial is None

    def test_limit_error_is_not_value_error(self):
        """Test caps are distinguished from invalid input"""
        assert not issubclass(LimitExceededError, ValueError)
        assert issubclass(UnknownVariableError, ValueError)

    def test_zero_element(self):
        """Test zero elements have no leading term"""
        with pytest.raises(ValueError, match="no leading term"):
            ModuleElement.zero(2).leading(TermOrder('degrevlex'))


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
