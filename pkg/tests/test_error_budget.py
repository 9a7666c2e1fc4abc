"""
Tests for the circuit failure bound and the constraint penalty
"""

import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcodesign.error_budget import (
    ErrorBudgetInput,
    benefit_ceiling,
    circuit_error_bound,
    constraint_penalty,
    crossover_gate_error,
    crossover_gate_error_bisect,
    fig7_sweep,
    idle_error_from_clock,
    idle_error_table,
    p_circuit,
)


class TestBound:
    def test_constrained_idle_term(self):
        result = circuit_error_bound(ErrorBudgetInput(108, 95, 0.0, 1e-4))
        assert result.p_circuit == pytest.approx(4.465e-5)
        assert result.term_cross == 0.0 and result.term_gate_pair == 0.0
        assert result.beneficial_vs_idle

    def test_unconstrained_idle_term(self):
        assert p_circuit(108, 48, 0.0, 1e-4) == pytest.approx(1.128e-5)

    def test_terms_add_up(self):
        r = circuit_error_bound(ErrorBudgetInput(108, 48, 1e-5, 1e-4))
        assert r.p_circuit == pytest.approx(r.term_idle_pair + r.term_cross + r.term_gate_pair)
        assert r.term_gate_pair == pytest.approx(5778 * 1e-10)

    @pytest.mark.property_based
    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 500), st.integers(0, 500), st.floats(0, 1e-2), st.floats(0, 1e-2))
    def test_gates_and_idles_are_interchangeable(self, n, m, p, q):
        assert p_circuit(n, m, p, q) == pytest.approx(p_circuit(m, n, q, p), rel=1e-12, abs=1e-300)

    def test_not_clamped(self):
        r = circuit_error_bound(ErrorBudgetInput(108, 95, 0.5, 0.5))
        assert r.exceeds_one
        assert r.p_circuit > 1.0

    def test_bound_above_one_is_reported(self, caplog):
        with caplog.at_level(logging.WARNING, logger="qcodesign.error_budget"):
            circuit_error_bound(ErrorBudgetInput(108, 95, 0.5, 0.5))
        assert "exceeds 1" in caplog.text

    def test_bound_below_one_is_quiet(self, caplog):
        with caplog.at_level(logging.WARNING, logger="qcodesign.error_budget"):
            circuit_error_bound(ErrorBudgetInput(108, 48, 1e-5, 1e-4))
        assert caplog.records == []

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n_gates=-1, idle_ticks=0, gate_error=0.0, idle_error=0.0),
            dict(n_gates=1, idle_ticks=0, gate_error=1.5, idle_error=0.0),
            dict(n_gates=1, idle_ticks=0, gate_error=0.0, idle_error=-0.1),
            dict(n_gates=1, idle_ticks=0, gate_error=0.0, idle_error=0.0, t2=0.0),
        ],
    )
    def test_invalid_inputs(self, kwargs):
        with pytest.raises(ValueError):
            ErrorBudgetInput(**kwargs)


class TestIdleError:
    def test_from_clock(self):
        assert idle_error_from_clock(30e-9, 60e-3) == pytest.approx(5e-7)
        assert idle_error_from_clock(30e-9, 0.3e-3) == pytest.approx(1e-4)

    def test_saturates(self):
        assert idle_error_from_clock(1.0, 1e-3) == 1.0

    def test_table(self):
        assert [t2 for t2, _ in idle_error_table(30e-9)] == [0.3e-3, 60e-3]


class TestCrossover:
    @pytest.mark.parametrize("m", [48, 95])
    @pytest.mark.parametrize("q", [1e-4, 1e-5, 1e-6])
    def test_closed_form_matches_bisection(self, m, q):
        closed = crossover_gate_error(108, m, q)
        assert closed == pytest.approx(crossover_gate_error_bisect(108, m, q), rel=1e-9)
        assert p_circuit(108, m, closed, q) == pytest.approx(q, rel=1e-9)

    def test_reference_crossover(self):
        p_star = crossover_gate_error(108, 48, 1e-4)
        assert p_star == pytest.approx(8.69e-5, rel=2e-3)
        assert abs(p_circuit(108, 48, p_star, 1e-4) - 1e-4) < 1e-12

    def test_no_crossover_when_ceiling_reaches_q(self):
        assert benefit_ceiling(108, 16, 1e-2) >= 1e-2
        assert crossover_gate_error(108, 16, 1e-2) is None
        assert crossover_gate_error_bisect(108, 16, 1e-2) is None

    def test_zero_idle_error(self):
        assert crossover_gate_error(108, 48, 0.0) is None

    @pytest.mark.property_based
    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(2, 300),
        st.integers(0, 200),
        st.floats(1e-7, 1e-3),
    )
    def test_more_idles_lower_the_crossover(self, n, m, q):
        lo = crossover_gate_error(n, m, q)
        hi = crossover_gate_error(n, m + 1, q)
        if lo is not None and hi is not None:
            assert hi <= lo


class TestSweep:
    def test_curve_grid(self):
        curves = fig7_sweep()
        assert len(curves) == 6
        assert [(c.q, c.m) for c in curves[:2]] == [(1e-4, 48), (1e-4, 95)]
        assert all(len(c.p) == 51 for c in curves)

    def test_curves_are_monotone(self):
        for curve in fig7_sweep():
            assert np.all(np.diff(curve.p_circuit) > 0)

    def test_constrained_curve_lies_above(self):
        curves = fig7_sweep()
        for unconstrained, constrained in zip(curves[::2], curves[1::2]):
            assert np.all(constrained.p_circuit > unconstrained.p_circuit)

    def test_unsorted_grid(self):
        with pytest.raises(ValueError):
            fig7_sweep(p_grid=[1e-3, 1e-5])


class TestPenalty:
    def test_ceiling_ratio_disagrees_with_claim(self):
        report = constraint_penalty()
        assert report.ceiling_ratio == pytest.approx(3.958, rel=1e-3)
        assert report.ceiling_discrepancy

    def test_crossover_ratio(self):
        report = constraint_penalty()
        assert report.crossover_ratio == pytest.approx(2.005, rel=5e-3)
        assert report.crossover_unconstrained > report.crossover_constrained
        assert report.crossover_discrepancy

    def test_no_idles_means_no_ratio(self):
        report = constraint_penalty(m_constrained=0, m_unconstrained=0)
        assert report.ceiling_ratio is None
        assert report.ceiling_discrepancy
