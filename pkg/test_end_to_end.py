#!/usr/bin/env python3
"""
End-to-End Tests with Sample Problems

This module runs the command-line entry point on the problem files shipped
in problems/ and checks exit codes, report contents, output files,
configuration files and environment defaults.
"""

import json
import os
import shutil
import tempfile
from unittest.mock import patch

import pytest

from main import main
from reporter import load_report

PROBLEM_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'problems')
JANET_BASIS = {"z^2 - y^2 - 2*x^2", "x*z + x*y", "y*z + y^2 + x^2", "x^3"}


def problem_path(name):
    return os.path.join(PROBLEM_DIR, name)


def run_json(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestCompletionCommands:
    """Test completion and delta-regularity commands"""

    def test_janet_completion(self, capsys):
        """Test the Janet basis adds x^3"""
        code, data = run_json(capsys, 'complete', problem_path('janet_example.txt'))
        assert code == 0
        basis = data['results']['basis']
        assert basis['division'] == 'janet'
        assert set(basis['generators']) == JANET_BASIS
        assert basis['degree'] == 3

    def test_pommaret_override_diverges(self, capsys):
        """Test the command line wins over the problem header"""
        code, data = run_json(capsys, 'complete', problem_path('janet_example.txt'), '--division', 'pommaret')
        assert code == 2
        assert data['status'] == 'diverged'
        witness = data['results']['witness']
        assert witness['generator'] == 'x^3'
        assert witness['variable'] == 'y'

    def test_iteration_cap(self, capsys):
        """Test a hit cap exits with 3"""
        code, data = run_json(capsys, 'complete', problem_path('janet_example.txt'), '--itercap', '0')
        assert code == 3
        assert data['caps']['hit'] is True

    def test_environment_cap(self, capsys):
        """Test caps default to the environment"""
        with patch.dict(os.environ, {'INVOLUTIVE_ITERCAP': '0'}):
            code, data = run_json(capsys, 'complete', problem_path('janet_example.txt'))
        assert code == 3
        assert data['caps']['max_iterations'] == 0

    def test_delta_check(self, capsys):
        """Test the Janet route reports the witness"""
        code, data = run_json(capsys, 'delta-check', problem_path('janet_example.txt'))
        assert code == 2
        assert data['results']['delta_regular'] is False
        assert data['results']['witness']['variable'] == 'y'

    def test_regular_coordinates(self, capsys):
        """Test the search finds a Pommaret basis and is reproducible"""
        code, first = run_json(capsys, 'regular-coords', problem_path('janet_example.txt'), '--seed', '3')
        assert code == 0
        assert first['results']['coordinate_change']['identity'] is False
        assert first['results']['basis']['division'] == 'pommaret'
        _, second = run_json(capsys, 'regular-coords', problem_path('janet_example.txt'), '--seed', '3')
        assert first == second

    def test_reordered_variables(self, capsys):
        """Test the variable order changes the Janet basis"""
        code, data = run_json(capsys, 'complete', problem_path('twisted_cubic_reordered.txt'))
        assert code == 0
        assert data['results']['basis']['size'] == 5

    def test_module(self, capsys):
        """Test completion of a submodule of rank 2"""
        code, data = run_json(capsys, 'complete', problem_path('module_rank2.txt'))
        assert code == 0
        assert data['problem']['rank'] == 2
        assert all('e' in t for t in data['results']['basis']['leading_terms'])

    def test_zero_ideal(self, capsys):
        """Test the zero ideal has the empty basis"""
        code, data = run_json(capsys, 'complete', problem_path('zero_ideal.txt'))
        assert code == 0
        assert data['results']['basis']['size'] == 0


class TestAnalysisCommands:
    """Test structure and resolution commands"""

    def test_analyze(self, capsys):
        """Test the structure report of the Cohen-Macaulay example"""
        code, data = run_json(capsys, 'analyze', problem_path('cohen_macaulay.txt'))
        assert code == 0
        results = data['results']
        assert results['dimension'] == 1
        assert results['depth'] == 1
        assert results['cohen_macaulay'] is True
        assert results['regularity'] == 3
        assert results['hilbert']['multiplicity'] == 5

    def test_resolve(self, capsys):
        """Test the ranks of the resolution"""
        code, data = run_json(capsys, 'resolve', problem_path('resolution_ranks.txt'))
        assert code == 0
        assert data['results']['ranks'] == [6, 8, 3]
        assert data['results']['projective_dimension'] == 2

    def test_projective_dimensions_of_ideal_and_quotient(self, capsys):
        """Test analyze reports pd(P/I) and resolve reports pd(I) under distinct keys"""
        code, analyzed = run_json(capsys, 'analyze', problem_path('cohen_macaulay.txt'))
        assert code == 0
        code, resolved = run_json(capsys, 'resolve', problem_path('cohen_macaulay.txt'))
        assert code == 0
        assert 'projective_dimension' not in analyzed['results']
        assert analyzed['results']['quotient_projective_dimension'] == 3 - analyzed['results']['depth'] == 2
        assert resolved['results']['projective_dimension'] == 1

    def test_betti_of_nonminimal_resolution(self, capsys):
        """Test minimization removes trivial summands"""
        code, data = run_json(capsys, 'betti', problem_path('nonminimal.txt'))
        assert code == 0
        assert data['results']['ranks'] == [5, 6, 2]
        assert data['results']['minimal_input'] is False
        assert data['results']['eliminated'] > 0

    def test_betti_of_inhomogeneous_input(self, capsys):
        """Test Betti numbers are skipped for inhomogeneous input"""
        code, data = run_json(capsys, 'betti', problem_path('resolution_ranks.txt'))
        assert code == 0
        assert data['results']['skipped'] is True

    def test_regularity(self, capsys):
        """Test regularity 13"""
        code, data = run_json(capsys, 'regularity', problem_path('regularity_13.txt'))
        assert code == 0
        assert data['results']['regularity'] == 13
        assert data['results']['basis']['size'] == 9

    def test_trung(self, capsys):
        """Test the invariants of the pure powers"""
        code, data = run_json(capsys, 'trung', problem_path('powers.txt'))
        assert code == 0
        assert data['results']['regularity'] == 22

    def test_primary(self, capsys):
        """Test the primary decomposition of the mixed powers"""
        code, data = run_json(capsys, 'primary', problem_path('mixed_powers.txt'))
        assert code == 0
        assert data['results']['components']
        assert data['results']['sequential_chain'][-1] == ['1']

    def test_saturate(self, capsys):
        """Test a saturated ideal"""
        code, data = run_json(capsys, 'saturate', problem_path('cohen_macaulay.txt'))
        assert code == 0
        assert data['results']['saturated'] is True


class TestOutputAndConfiguration:
    """Test output files, formats and configuration files"""

    def setup_method(self):
        """Set up test fixtures"""
        self.temp_dir = tempfile.mkdtemp()

    def teardown_method(self):
        """Clean up test fixtures"""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_output_file(self, capsys):
        """Test --output writes the report"""
        target = os.path.join(self.temp_dir, 'reports', 'janet.json')
        assert main(['complete', problem_path('janet_example.txt'), '--output', target]) == 0
        assert capsys.readouterr().out == ''
        report = load_report(target)
        assert set(report.results['basis']['generators']) == JANET_BASIS

    def test_text_format(self, capsys):
        """Test the text format on stdout"""
        assert main(['betti', problem_path('nonminimal.txt'), '--format', 'text']) == 0
        out = capsys.readouterr().out
        assert "INVOLUTIVE ANALYSIS - BETTI" in out
        assert "betti table:" in out

    def test_timing(self, capsys):
        """Test --timing adds the duration"""
        code, data = run_json(capsys, 'complete', problem_path('twisted_cubic.txt'), '--timing')
        assert code == 0
        assert 'timing' in data

    def test_batch_output_directory(self, capsys):
        """Test several problems write one report each"""
        paths = [problem_path('twisted_cubic.txt'), problem_path('janet_example.txt')]
        code = main(['complete'] + paths + ['--division', 'pommaret', '--workers', '2', '--output', self.temp_dir])
        assert code == 2
        assert sorted(os.listdir(self.temp_dir)) == ['janet_example.json', 'twisted_cubic.json']
        assert "BATCH SUMMARY - COMPLETE" in capsys.readouterr().err

    def test_configuration_file(self, capsys):
        """Test settings from a configuration file"""
        path = os.path.join(self.temp_dir, 'config.yaml')
        with open(path, 'w', encoding='utf-8') as f:
            f.write("settings:\n  output_format: text\nlimits:\n  max_iterations: 0\n")
        code = main(['complete', problem_path('janet_example.txt'), '--config', path])
        assert code == 3
        assert "Status: limit (exit code 3)" in capsys.readouterr().out

    def test_invalid_configuration(self, capsys):
        """Test an invalid configuration file exits with 1"""
        path = os.path.join(self.temp_dir, 'config.yaml')
        with open(path, 'w', encoding='utf-8') as f:
            f.write("settings:\n  division: riquier\n")
        assert main(['complete', problem_path('twisted_cubic.txt'), '--config', path]) == 1
        assert "Failed to load configuration" in capsys.readouterr().err

    def test_missing_configuration(self, capsys):
        """Test a missing configuration file exits with 1"""
        assert main(['complete', problem_path('twisted_cubic.txt'), '--config', '/nonexistent.yaml']) == 1
        assert "Configuration file not found" in capsys.readouterr().err

    def test_parse_error(self, capsys):
        """Test a malformed problem exits with 1 and a position"""
        path = os.path.join(self.temp_dir, 'bad.txt')
        with open(path, 'w', encoding='utf-8') as f:
            f.write("ring: x\nideal:\n x + q\n")
        assert main(['complete', path]) == 1
        assert "line 3, column 6: Unknown variable 'q'" in capsys.readouterr().err

    def test_missing_problem(self, capsys):
        """Test a missing problem file exits with 1"""
        assert main(['complete', os.path.join(self.temp_dir, 'missing.txt')]) == 1
        assert "Problem file not found" in capsys.readouterr().err

    def test_log_file(self, capsys):
        """Test --log-file records debug messages"""
        log_path = os.path.join(self.temp_dir, 'run.log')
        assert main(['complete', problem_path('twisted_cubic.txt'), '--log-file', log_path]) == 0
        with open(log_path, encoding='utf-8') as f:
            assert "DEBUG" in f.read()

    def test_unknown_command(self):
        """Test argparse rejects unknown commands"""
        with pytest.raises(SystemExit):
            main(['solve', problem_path('twisted_cubic.txt')])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
