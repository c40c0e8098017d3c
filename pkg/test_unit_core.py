#!/usr/bin/env python3
"""
Unit Tests for Core Functions

This module contains unit tests for the core algebra (term orders, module
elements, coordinate changes), the involutive divisions, the monomial ideal
helpers, configuration loading and the small utilities.
"""

import os
import tempfile
from unittest.mock import patch

import pytest
import yaml

from algebra import (CoordinateChange, ModuleElement, SchreyerOrder, TermOrder, apply_coordinate_change, cls,
                     format_monomial, linear_combine)
from config import (ENV_DEGREE_CAP, ENV_ITERATION_CAP, AnalysisConfig, AnalysisSettings, Limits, load_config,
                    save_config_to_yaml)
from divisions import (DivisionKind, assign_multiplicative, involutive_divisor, involutive_size,
                       is_involutive_monomial_set, multiplicative_variables)
from errors import AlgebraError
from monomial import (colon_monomial, colon_variable_power, exponents_of_degree, ideal_intersection, ideal_product,
                      ideal_sum, in_ideal, minimal_generators)
from problem import parse_polynomial
from utils import format_duration, setup_logging

XYZ = ['x', 'y', 'z']


def poly(text, names=XYZ):
    return parse_polynomial(text, names)


def term(mu, comp=0):
    return (tuple(mu), comp)


class TestTermOrders:
    """Test term comparison and leading terms"""

    def test_degrevlex_examples(self):
        """Test the degrevlex comparisons used throughout"""
        order = TermOrder('degrevlex')
        assert order.compare(term((1, 0, 1)), term((1, 1, 0))) == 1  # xz > xy
        assert order.compare(term((0, 0, 2)), term((0, 2, 0))) == 1  # z^2 > y^2
        assert order.compare(term((0, 1, 1)), term((0, 1, 1))) == 0

    def test_lex_and_deglex(self):
        """Test lex compares the largest variable first and deglex the degree first"""
        lex = TermOrder('lex')
        assert lex.compare(term((0, 0, 1)), term((2, 0, 0))) == 1
        deglex = TermOrder('deglex')
        assert deglex.compare(term((0, 1, 1)), term((2, 0, 0))) == 1
        assert deglex.compare(term((0, 0, 1)), term((2, 0, 0))) == -1

    def test_component_tie_break(self):
        """Test the lower component wins on equal exponents"""
        order = TermOrder()
        assert order.compare(term((1, 0), 0), term((1, 0), 1)) == 1

    def test_only_degrevlex_is_class_respecting(self):
        """Test the class respecting flag"""
        assert TermOrder('degrevlex').class_respecting
        assert not TermOrder('lex').class_respecting
        assert not TermOrder('deglex').class_respecting

    def test_unknown_order_rejected(self):
        """Test an unknown order name"""
        with pytest.raises(AlgebraError, match="Unknown term order"):
            TermOrder('revlex')

    def test_leading_terms(self):
        """Test leading term and coefficient of sample polynomials"""
        order = TermOrder('degrevlex')
        assert poly("y*z + y^2 + x^2").leading(order) == (term((0, 1, 1)), 1)
        assert poly("z^2 - z + x").leading_term(order) == term((0, 0, 2))
        assert ModuleElement.constant(3, 5).leading(order) == (term((0, 0, 0)), 5)

    def test_zero_has_no_leading_term(self):
        """Test the zero element"""
        with pytest.raises(AlgebraError, match="no leading term"):
            ModuleElement.zero(3).leading(TermOrder())

    def test_schreyer_order_uses_generator_leads(self):
        """Test the induced order on a free module"""
        order = TermOrder('degrevlex')
        leads = [term((2, 0, 0)), term((0, 0, 2))]  # x^2, z^2
        schreyer = SchreyerOrder(order, leads)
        # z * e_0 -> x^2 z, x * e_1 -> x z^2 ; x^2 z is smaller in degrevlex
        assert schreyer.compare(((0, 0, 1), 0), ((1, 0, 0), 1)) == -1
        assert schreyer.base == order

    def test_class(self):
        """Test the class of an exponent"""
        assert cls((0, 2, 1)) == 1
        assert cls((0, 0, 0)) == 2


class TestModuleElements:
    """Test arithmetic and rendering of module elements"""

    def test_rational_coefficients_render(self):
        """Test rendering in the input grammar"""
        f = poly("x^2*y - z/2")
        assert f.to_string(XYZ) == "x^2*y - 1/2*z"
        assert poly("3*x - 2").to_string(XYZ) == "3*x - 2"

    def test_monic(self):
        """Test division by the leading coefficient"""
        f = poly("2*z^2 - 4*x")
        assert f.monic(TermOrder()) == poly("z^2 - 2*x")

    def test_leading_term_is_cached_per_order(self):
        """Test repeated leading term queries reuse the last result and follow a change of order"""
        class CountingOrder(TermOrder):
            calls = 0

            def key(self, t):
                CountingOrder.calls += 1
                return super().key(t)

        f = poly("x*z + y^3")
        order = CountingOrder('degrevlex')
        assert f.leading_term(order) == term((0, 3, 0))
        first = CountingOrder.calls
        assert first > 0
        assert f.leading(order) == (term((0, 3, 0)), 1)
        assert f.leading_exponent(order) == (0, 3, 0)
        assert CountingOrder.calls == first
        assert f.leading_term(TermOrder('lex')) == term((1, 0, 1))
        assert f.leading_term(TermOrder('degrevlex')) == term((0, 3, 0))

    def test_linear_combine(self):
        """Test x*(xz - y) + 1*(xy) = x^2 z"""
        result = linear_combine([(1, (1, 0, 0), poly("x*z - y")), (1, (0, 0, 0), poly("x*y"))])
        assert result == poly("x^2*z")

    def test_rank_mismatch(self):
        """Test adding elements of different rank"""
        a = ModuleElement.monomial((1, 0), rank=1)
        b = ModuleElement.monomial((1, 0), comp=1, rank=2)
        with pytest.raises(AlgebraError, match="Rank mismatch"):
            a + b

    def test_module_product_and_components(self):
        """Test polynomial times module element and component extraction"""
        e = ModuleElement.from_components([poly("x", ['x', 'y']), poly("y", ['x', 'y'])], 2)
        scaled = e * poly("y", ['x', 'y'])
        assert scaled.component(0) == poly("x*y", ['x', 'y'])
        assert scaled.component(1) == poly("y^2", ['x', 'y'])
        assert scaled.rank == 2

    def test_homogeneity(self):
        """Test the homogeneity flag"""
        assert poly("x^2 - y*z").is_homogeneous()
        assert not poly("z^2 - z + x").is_homogeneous()


class TestCoordinateChanges:
    """Test linear changes of coordinates"""

    def test_elementary_substitution(self):
        """Test xy under x = x + y"""
        change = CoordinateChange.elementary(2, 0, 1, 1)
        result = apply_coordinate_change(poly("x*y", ['x', 'y']), change)
        assert result == poly("y^2 + x*y", ['x', 'y'])

    def test_identity_and_inverse(self):
        """Test identity and round trip through the inverse"""
        f = poly("x^2 - y*z + 3")
        assert apply_coordinate_change(f, CoordinateChange.identity(3)) == f
        change = CoordinateChange([[1, 2, 0], [0, 1, -3], [0, 0, 1]])
        back = apply_coordinate_change(apply_coordinate_change(f, change), change.inverse())
        assert back == f

    def test_binomial_expansion(self):
        """Test x^2 under x = x + y"""
        change = CoordinateChange([[1, 1], [0, 1]])
        assert apply_coordinate_change(poly("x^2", ['x', 'y']), change) == poly("x^2 + 2*x*y + y^2", ['x', 'y'])

    def test_singular_matrix_rejected(self):
        """Test a singular matrix"""
        with pytest.raises(AlgebraError, match="Singular"):
            CoordinateChange([[1, 1], [1, 1]])

    def test_describe(self):
        """Test the human readable substitution list"""
        change = CoordinateChange.elementary(3, 1, 2, -2)
        assert change.describe(XYZ) == ["y = y - 2*z"]
        assert CoordinateChange.identity(3).describe(XYZ) == []


class TestInvolutiveDivisions:
    """Test multiplicative variables and involutive divisibility"""

    def test_janet_assignment(self):
        """Test Janet sets of z^2, xz, yz"""
        terms = [term((0, 0, 2)), term((1, 0, 1)), term((0, 1, 1))]
        assignment = assign_multiplicative(DivisionKind.JANET, terms)
        assert assignment.multiplicative == [frozenset({0, 1, 2}), frozenset({0}), frozenset({0, 1})]
        assert involutive_size(assignment) == 6

    def test_pommaret_assignment(self):
        """Test the Pommaret rule depends on the class only"""
        assert multiplicative_variables(DivisionKind.POMMARET, [term((1, 1))], 0) == frozenset({0})
        terms = [term((0, 0, 2)), term((1, 0, 1)), term((0, 1, 1))]
        assert involutive_size(assign_multiplicative(DivisionKind.POMMARET, terms)) == 6

    def test_janet_singleton(self):
        """Test every variable is Janet multiplicative for a single term"""
        assert multiplicative_variables(DivisionKind.JANET, [term((1, 1))], 0) == frozenset({0, 1})

    def test_thomas_assignment(self):
        """Test the Thomas rule uses coordinate maxima"""
        assignment = assign_multiplicative(DivisionKind.THOMAS, [term((2, 0)), term((0, 2))])
        assert assignment.multiplicative == [frozenset({0}), frozenset({1})]

    def test_janet_is_per_component(self):
        """Test Janet sets are computed separately in each component"""
        assignment = assign_multiplicative(DivisionKind.JANET, [term((0, 2), 0), term((1, 1), 1)])
        assert assignment.multiplicative == [frozenset({0, 1}), frozenset({0, 1})]

    def test_empty_assignment(self):
        """Test an empty set"""
        assert involutive_size(assign_multiplicative(DivisionKind.JANET, [])) == 0

    def test_involutive_divisor(self):
        """Test involutive divisors for the Pommaret division"""
        assignment = assign_multiplicative(DivisionKind.POMMARET, [term((0, 2)), term((1, 1))])
        assert involutive_divisor(assignment, term((1, 2))) == 0
        assert involutive_divisor(assignment, term((1, 1))) == 1
        single = assign_multiplicative(DivisionKind.POMMARET, [term((1, 1))])
        assert involutive_divisor(single, term((1, 2))) is None

    def test_local_involution(self):
        """Test the local involution test on monomial sets"""
        ok, failure = is_involutive_monomial_set(DivisionKind.POMMARET, [term((2, 0)), term((2, 1)), term((0, 2))])
        assert ok and failure is None
        ok, failure = is_involutive_monomial_set(DivisionKind.POMMARET, [term((1, 1))])
        assert not ok and failure == (0, 1)
        assert is_involutive_monomial_set(DivisionKind.JANET, []) == (True, None)


class TestMonomialIdeals:
    """Test the monomial ideal helpers"""

    def test_minimal_generators(self):
        """Test redundant generators are removed"""
        assert minimal_generators([(0, 2, 1), (0, 2, 0), (1, 1, 0), (0, 2, 0)]) == [(0, 2, 0), (1, 1, 0)]

    def test_membership(self):
        """Test ideal membership"""
        assert in_ideal((1, 3), [(0, 2)])
        assert not in_ideal((3, 1), [(0, 2)])

    def test_colon_ideals(self):
        """Test colon by a variable power and by a monomial"""
        assert colon_variable_power([(0, 2), (1, 1)], 0) == [(0, 1)]
        assert colon_monomial([(0, 2), (1, 1)], (0, 1)) == [(0, 1), (1, 0)]

    def test_ideal_operations(self):
        """Test sum, product and intersection"""
        assert ideal_sum([(2, 0)], [(0, 2)]) == [(0, 2), (2, 0)]
        assert ideal_product([(1, 0)], [(1, 0), (0, 1)]) == [(1, 1), (2, 0)]
        assert ideal_intersection([(0, 1)], [(1, 0), (0, 2)]) == [(0, 2), (1, 1)]

    def test_exponent_enumeration(self):
        """Test the number of monomials of a given degree"""
        assert len(list(exponents_of_degree(3, 2))) == 6
        assert list(exponents_of_degree(2, -1)) == []

    def test_format_monomial(self):
        """Test monomial rendering"""
        assert format_monomial((2, 0, 1), XYZ) == "x^2*z"
        assert format_monomial((0, 0, 0), XYZ) == "1"


class TestConfigurationLoading:
    """Test configuration loading and validation"""

    def _write(self, data):
        with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
            yaml.dump(data, f)
            return f.name

    def test_load_valid_yaml_config(self):
        """Test loading a valid YAML configuration"""
        path = self._write({
            'settings': {'division': 'janet', 'order': 'degrevlex', 'seed': 7, 'output_format': 'text',
                         'max_workers': 2},
            'limits': {'max_iterations': 500, 'max_degree': 20, 'escalation_attempts': 3},
        })
        try:
            config = load_config(path)
            assert isinstance(config, AnalysisConfig)
            assert config.settings.division == 'janet'
            assert config.settings.seed == 7
            assert config.settings.output_format == 'text'
            assert config.settings.max_workers == 2
            assert config.limits.max_iterations == 500
            assert config.limits.max_degree == 20
            assert config.limits.escalation_attempts == 3
        finally:
            os.unlink(path)

    def test_load_config_missing_file(self):
        """Test loading configuration from non-existent file"""
        with pytest.raises(FileNotFoundError):
            load_config('/nonexistent/config.yaml')

    def test_load_config_empty_file(self):
        """Test an empty configuration file"""
        with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
            path = f.name
        try:
            with pytest.raises(ValueError, match="empty"):
                load_config(path)
        finally:
            os.unlink(path)

    def test_invalid_division(self):
        """Test validation of the division name"""
        path = self._write({'settings': {'division': 'gerdt'}})
        try:
            with pytest.raises(ValueError, match="Unknown division"):
                load_config(path)
        finally:
            os.unlink(path)

    def test_negative_limit(self):
        """Test validation of limits"""
        path = self._write({'settings': {}, 'limits': {'max_degree': -1}})
        try:
            with pytest.raises(ValueError, match="non-negative"):
                load_config(path)
        finally:
            os.unlink(path)

    def test_environment_caps(self):
        """Test default caps taken from the environment"""
        with patch.dict(os.environ, {ENV_ITERATION_CAP: '77', ENV_DEGREE_CAP: '9'}):
            limits = Limits.from_environment()
        assert limits.max_iterations == 77
        assert limits.max_degree == 9

    def test_file_wins_over_environment(self):
        """Test explicit limits in the file win over the environment"""
        path = self._write({'settings': {}, 'limits': {'max_iterations': 12}})
        try:
            with patch.dict(os.environ, {ENV_ITERATION_CAP: '77', ENV_DEGREE_CAP: '9'}):
                config = load_config(path)
            assert config.limits.max_iterations == 12
            assert config.limits.max_degree == 9
        finally:
            os.unlink(path)

    def test_bad_environment_value(self):
        """Test a non-integer environment cap"""
        with patch.dict(os.environ, {ENV_ITERATION_CAP: 'many'}):
            with pytest.raises(ValueError, match=ENV_ITERATION_CAP):
                Limits.from_environment()

    def test_default_caps(self):
        """Test the documented default caps"""
        limits = Limits()
        assert limits.iteration_cap(3) == 80
        assert limits.round_cap(4) == 80
        assert limits.check_degree(5) == 8

    def test_save_and_reload(self):
        """Test saving configuration to YAML and reading it back"""
        config = AnalysisConfig(settings=AnalysisSettings(division='janet', seed=3),
                                limits=Limits(max_iterations=40))
        with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
            path = f.name
        try:
            save_config_to_yaml(config, path)
            loaded = load_config(path)
            assert loaded.settings.division == 'janet'
            assert loaded.settings.seed == 3
            assert loaded.limits.max_iterations == 40
        finally:
            os.unlink(path)


class TestUtilities:
    """Test utility functions"""

    def test_format_duration(self):
        """Test duration formatting"""
        assert format_duration(0.35) == "0.35s"
        assert format_duration(125) == "2m 5s"
        assert format_duration(3725) == "1h 2m 5s"

    def test_setup_logging_with_file(self):
        """Test the log file records debug messages"""
        import logging
        with tempfile.TemporaryDirectory() as tmp:
            log_file = os.path.join(tmp, 'run.log')
            setup_logging('WARNING', log_file)
            logging.getLogger('completion').debug("adjoined element")
            for handler in logging.getLogger().handlers:
                handler.flush()
            with open(log_file, encoding='utf-8') as f:
                assert "adjoined element" in f.read()
            logging.getLogger().handlers.clear()


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
