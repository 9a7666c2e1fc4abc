"""
Tests for the chip layout model and routing density
"""

import json

import pytest

from qcodesign.circuit import Gate, GateKind
from qcodesign.exceptions import ArchError, ConfigError
from qcodesign.layout import (
    TABLE2_CONTROLLABLE,
    ArchModel,
    RoutingNode,
    consistent_lines_per_qubit,
    controllable_qubits,
    default_bs9_21_arch,
    fully_connected_arch,
    load_arch,
    load_routing_nodes,
    overlap_example_arch,
    routing_table,
    save_arch,
)


class TestDefaultArch:
    def test_shape(self, bs9_arch):
        assert bs9_arch.n_qubits == 21
        assert len(bs9_arch.blocks) == 16
        assert bs9_arch.n_cphase_switches == 24
        assert sorted(bs9_arch.block_sizes()) == [1] * 11 + [2] * 5

    def test_blocks_partition_the_qubits(self, bs9_arch):
        members = sorted(q for b in bs9_arch.blocks for q in b.qubit_members)
        assert members == list(range(21))

    def test_every_check_pair_is_wired(self, bs9):
        arch = default_bs9_21_arch()
        for gate in bs9.gates:
            if gate.kind is GateKind.CPHASE:
                assert arch.allows_pair(*gate.qubits)
        assert len(arch.neighbor_pairs) == 24

    def test_block_lookup(self, bs9_arch):
        assert bs9_arch.block_of(9) == bs9_arch.block_of(10)
        assert bs9_arch.block_of(0) != bs9_arch.block_of(1)
        cp = Gate(0, GateKind.CPHASE, (0, 9))
        assert bs9_arch.blocks_of_gate(cp) == (bs9_arch.block_of(0), bs9_arch.block_of(9))

    def test_overlap_example(self):
        arch = overlap_example_arch()
        assert arch.overlapped_by(4) == frozenset({17, 18})
        assert arch.overlapped_by(3) == frozenset()


class TestArchValidation:
    def test_uncovered_qubit(self):
        with pytest.raises(ArchError, match="do not cover"):
            ArchModel.from_dict({"n_qubits": 3, "blocks": [[0], [1]]})

    def test_qubit_in_two_blocks(self):
        with pytest.raises(ArchError):
            ArchModel.from_dict({"n_qubits": 2, "blocks": [[0, 1], [1]]})

    def test_pair_out_of_range(self):
        with pytest.raises(ArchError):
            ArchModel.from_dict({"n_qubits": 2, "blocks": [[0], [1]], "neighbor_pairs": [[0, 5]]})

    def test_self_overlap(self):
        with pytest.raises(ArchError):
            ArchModel.from_dict({"n_qubits": 2, "blocks": [[0], [1]], "signal_overlap": {"0": [0]}})

    def test_pairs_are_unordered(self):
        arch = ArchModel.from_dict({"n_qubits": 2, "blocks": [[0, 1]], "neighbor_pairs": [[1, 0]]})
        assert arch.allows_pair(0, 1) and arch.allows_pair(1, 0)

    def test_fully_connected(self):
        arch = fully_connected_arch(4)
        assert len(arch.blocks) == 4
        assert len(arch.neighbor_pairs) == 6


class TestArchFiles:
    def test_round_trip(self, tmp_path):
        arch = overlap_example_arch()
        loaded = load_arch(save_arch(arch, tmp_path / "arch.json"))
        assert loaded.to_dict() == arch.to_dict()

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "arch.json"
        path.write_text("[")
        with pytest.raises(ArchError):
            load_arch(path)

    def test_broken_partition_file(self, tmp_path):
        path = tmp_path / "arch.json"
        path.write_text(json.dumps({"n_qubits": 2, "blocks": [[0]]}))
        with pytest.raises(ArchError):
            load_arch(path)


class TestRouting:
    def test_routing_table_reconstruction(self):
        rows = routing_table(load_routing_nodes())
        assert {r.name: r.controllable_qubits for r in rows} == TABLE2_CONTROLLABLE
        assert [r.controllable_qubits for r in rows] == [0, 1, 2, 3, 5]

    def test_controllable_qubits_floor(self):
        assert controllable_qubits(RoutingNode(name="x", channels=23)) == 1
        assert controllable_qubits(RoutingNode(name="x", channels=24)) == 2

    def test_lines_override(self):
        rows = routing_table(load_routing_nodes(effective_lines_per_qubit=15))
        assert [r.controllable_qubits for r in rows] == [0, 1, 1, 2, 4]

    def test_consistent_lines_per_qubit(self):
        rows = [(4, 0), (19, 1), (27, 2), (40, 3), (62, 5)]
        assert consistent_lines_per_qubit(rows) == [11, 12]

    def test_malformed_routing_file(self, tmp_path):
        path = tmp_path / "nodes.csv"
        path.write_text("name,channels,eff_lines\n45nm,lots,12\n")
        with pytest.raises(ConfigError):
            load_routing_nodes(path)
