"""
Tests for the electronics feasibility predicates
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_instances
from qcodesign.circuit import CircuitBuilder, GateKind
from qcodesign.constraints import (
    BLOCK_SAME_PROTOCOL,
    ONE_MEASUREMENT_PER_BLOCK,
    PARK_CROSSTALK,
    PRECEDENCE,
    ConstraintSet,
    check_block_protocol,
    check_measurement_exclusivity,
    check_park_crosstalk,
    check_precedence,
    conflict_masks,
    is_feasible,
    violations_to_json,
)
from qcodesign.exceptions import IncompleteAssignmentError
from qcodesign.layout import ArchModel, fully_connected_arch
from qcodesign.scheduling import schedule_greedy


def _serial(circuit):
    """Every gate in its own tick, in id order"""
    t, tick = {}, 0
    for gate in circuit.gates:
        t[gate.id] = tick
        tick += gate.duration_ticks
    return t


class TestPrecedence:
    def test_dependency_violation(self):
        b = CircuitBuilder(1)
        b.add(GateKind.PREP, 0)
        b.add(GateKind.MSR, 0)
        c = b.build()
        report = is_feasible(c, {0: 0, 1: 0}, ConstraintSet.all_off(fully_connected_arch(1)))
        assert not report.feasible
        assert report.constraints_violated() == [PRECEDENCE]

    def test_long_gate_blocks_its_successor(self):
        b = CircuitBuilder(1, {GateKind.PREP: 3})
        b.add(GateKind.PREP, 0)
        b.add(GateKind.MSR, 0)
        c = b.build()
        cs = ConstraintSet.all_off(fully_connected_arch(1))
        assert not is_feasible(c, {0: 0, 1: 2}, cs)
        assert is_feasible(c, {0: 0, 1: 3}, cs)

    def test_incomplete_assignment(self, parallel_pair):
        cs = ConstraintSet.all_off(fully_connected_arch(2))
        with pytest.raises(IncompleteAssignmentError):
            is_feasible(parallel_pair, {0: 0}, cs)
        with pytest.raises(IncompleteAssignmentError):
            is_feasible(parallel_pair, {0: 0, 1: -1}, cs)

    def test_precedence_cannot_be_switched_off(self, two_qubit_arch):
        assert ConstraintSet.all_off(two_qubit_arch).precedence
        assert ConstraintSet.all_off(two_qubit_arch).enabled() == [PRECEDENCE]


class TestBlockProtocol:
    def test_mixed_kinds_in_one_block(self, parallel_pair, two_qubit_arch):
        report = is_feasible(parallel_pair, {0: 0, 1: 0}, ConstraintSet(two_qubit_arch, block_same_protocol=True))
        assert report.constraints_violated() == [BLOCK_SAME_PROTOCOL]
        assert report.violations[0].blocks == (0,)
        assert report.violations[0].gates == (0, 1)

    def test_same_kind_is_fine(self, two_qubit_arch):
        b = CircuitBuilder(2)
        b.add(GateKind.X_HALF_PI, 0)
        b.add(GateKind.X_HALF_PI, 1)
        assert is_feasible(b.build(), {0: 0, 1: 0}, ConstraintSet.all_on(two_qubit_arch))

    def test_separate_blocks_are_independent(self, parallel_pair):
        cs = ConstraintSet.all_on(fully_connected_arch(2))
        assert is_feasible(parallel_pair, {0: 0, 1: 0}, cs)

    def test_switched_off(self, parallel_pair, two_qubit_arch):
        assert is_feasible(parallel_pair, {0: 0, 1: 0}, ConstraintSet.all_off(two_qubit_arch))


class TestMeasurementExclusivity:
    def test_two_measurements_in_a_block(self, two_qubit_arch):
        b = CircuitBuilder(2)
        b.add(GateKind.MSR, 0)
        b.add(GateKind.MSR, 1)
        c = b.build()
        report = is_feasible(c, {0: 0, 1: 0}, ConstraintSet(two_qubit_arch, one_measurement_per_block=True))
        assert report.constraints_violated() == [ONE_MEASUREMENT_PER_BLOCK]
        # same kind, so the protocol predicate is satisfied
        assert is_feasible(c, {0: 0, 1: 0}, ConstraintSet(two_qubit_arch, block_same_protocol=True))


class TestParkCrosstalk:
    def _arch(self):
        return ArchModel.from_dict({
            "n_qubits": 2,
            "blocks": [[0], [1]],
            "neighbor_pairs": [[0, 1]],
            "signal_overlap": {"0": [1]},
        })

    def test_overlapped_qubit_running_other_kind(self, parallel_pair):
        report = is_feasible(parallel_pair, {0: 0, 1: 0}, ConstraintSet(self._arch(), park_crosstalk=True))
        assert report.constraints_violated() == [PARK_CROSSTALK]

    def test_parked_overlapped_qubit(self, parallel_pair):
        assert is_feasible(parallel_pair, {0: 0, 1: 1}, ConstraintSet(self._arch(), park_crosstalk=True))

    def test_empty_overlap_never_fires(self, bs9, bs9_arch):
        cs = ConstraintSet(bs9_arch, park_crosstalk=True)
        assert conflict_masks(bs9, cs) == conflict_masks(bs9, ConstraintSet.all_off(bs9_arch))


class TestDirectChecks:
    def test_precedence_reports_the_gate_pair(self):
        b = CircuitBuilder(1)
        b.add(GateKind.PREP, 0)
        b.add(GateKind.MSR, 0)
        c = b.build()
        found = check_precedence(c, {0: 0, 1: 0})
        assert found
        assert {v.constraint for v in found} == {PRECEDENCE}
        assert all(v.gates == (0, 1) for v in found)
        assert check_precedence(c, {0: 0, 1: 1}) == []

    def test_block_protocol_names_the_kinds(self, parallel_pair, two_qubit_arch):
        cs = ConstraintSet.all_on(two_qubit_arch)
        found = check_block_protocol(parallel_pair, {0: 0, 1: 0}, cs)
        assert len(found) == 1
        assert found[0].message == "block 0 mixes XHalfPi, ZHalfPi at tick 0"
        assert check_block_protocol(parallel_pair, {0: 0, 1: 1}, cs) == []

    def test_measurement_count_per_block(self, two_qubit_arch):
        b = CircuitBuilder(2)
        b.add(GateKind.MSR, 0)
        b.add(GateKind.MSR, 1)
        c = b.build()
        found = check_measurement_exclusivity(c, {0: 0, 1: 0}, ConstraintSet.all_on(two_qubit_arch))
        assert [(v.blocks, v.gates) for v in found] == [((0,), (0, 1))]
        assert found[0].message == "block 0 measures 2 qubits at tick 0"
        assert check_measurement_exclusivity(c, {0: 0, 1: 0}, ConstraintSet.all_on(fully_connected_arch(2))) == []

    def test_park_crosstalk_without_overlap(self, parallel_pair, two_qubit_arch):
        assert check_park_crosstalk(parallel_pair, {0: 0, 1: 0}, ConstraintSet.all_on(two_qubit_arch)) == []

    def test_park_crosstalk_reports_both_blocks(self, parallel_pair):
        arch = ArchModel.from_dict({
            "n_qubits": 2,
            "blocks": [[0], [1]],
            "neighbor_pairs": [[0, 1]],
            "signal_overlap": {"0": [1]},
        })
        found = check_park_crosstalk(parallel_pair, {0: 0, 1: 0}, ConstraintSet.all_on(arch))
        assert [(v.constraint, v.gates, v.blocks) for v in found] == [(PARK_CROSSTALK, (0, 1), (0, 1))]


class TestReports:
    def test_violations_are_sorted_and_serializable(self, two_qubit_arch):
        b = CircuitBuilder(2)
        b.add(GateKind.MSR, 0)
        b.add(GateKind.MSR, 1)
        b.add(GateKind.X_HALF_PI, 0)
        b.add(GateKind.Z_HALF_PI, 1)
        c = b.build()
        report = is_feasible(c, {0: 0, 1: 0, 2: 1, 3: 1}, ConstraintSet.all_on(two_qubit_arch))
        ticks = [v.tick for v in report.violations]
        assert ticks == sorted(ticks)
        assert set(report.by_constraint()) == {BLOCK_SAME_PROTOCOL, ONE_MEASUREMENT_PER_BLOCK}
        payload = violations_to_json(list(report.violations))
        assert payload[0]["constraint"] in (BLOCK_SAME_PROTOCOL, ONE_MEASUREMENT_PER_BLOCK)
        assert set(payload[0]) == {"constraint", "tick", "gates", "blocks", "message"}

    def test_label(self, two_qubit_arch):
        assert ConstraintSet.all_on(two_qubit_arch).label() == "on"
        assert ConstraintSet.all_off(two_qubit_arch).label() == "off"


@pytest.mark.property_based
class TestProperties:
    @settings(max_examples=100, deadline=None)
    @given(small_instances())
    def test_serial_schedule_is_always_feasible(self, instance):
        circuit, cs = instance
        assert is_feasible(circuit, _serial(circuit), cs)

    @settings(max_examples=100, deadline=None)
    @given(small_instances())
    def test_enabling_constraints_only_adds_violations(self, instance):
        circuit, cs = instance
        t = {g.id: 0 for g in circuit.gates}
        on = is_feasible(circuit, t, ConstraintSet.all_on(cs.arch))
        off = is_feasible(circuit, t, ConstraintSet.all_off(cs.arch))
        assert set(off.violations) <= set(on.violations)

    @settings(max_examples=100, deadline=None)
    @given(small_instances())
    def test_masks_agree_with_checks(self, instance):
        circuit, cs = instance
        masks = conflict_masks(circuit, cs)
        for a in circuit.gates:
            for b in circuit.gates:
                if a.id >= b.id or circuit.graph.has_edge(a.id, b.id):
                    continue
                if any(q in b.qubits for q in a.qubits):
                    continue
                t = _serial(circuit)
                t[a.id] = t[b.id] = 10_000
                shared = {v.gates for v in is_feasible(circuit, t, cs).violations if v.tick == 10_000}
                assert bool((masks[a.id] >> b.id) & 1) == ((a.id, b.id) in shared)

    @settings(max_examples=50, deadline=None)
    @given(small_instances())
    def test_greedy_output_is_feasible(self, instance):
        circuit, cs = instance
        s = schedule_greedy(circuit, cs)
        assert is_feasible(circuit, s.assignment, cs)

    @settings(max_examples=50, deadline=None)
    @given(small_instances(), st.integers(1, 5))
    def test_uniform_delay_keeps_schedules_feasible(self, instance, delay):
        circuit, cs = instance
        t = schedule_greedy(circuit, cs).assignment
        assert is_feasible(circuit, {g: tick + delay for g, tick in t.items()}, cs)
