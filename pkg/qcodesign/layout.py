"""
Chip layout: qubit grid, CMOS control blocks, CPHASE switches, routing density
"""

import csv
import json
import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from qcodesign.circuit import Gate
from qcodesign.data import DEFAULT_ARCH, OVERLAP_EXAMPLE_ARCH, ROUTING_NODES, data_path
from qcodesign.exceptions import ArchError, ConfigError

logger = logging.getLogger(__name__)

# Gates and ohmic contacts wired straight to every qubit
DIRECT_LINES_PER_QUBIT = 15
# Floor-division calibration that reproduces the routing-table rows
EFFECTIVE_LINES_PER_QUBIT = 12

TABLE2_CONTROLLABLE = {"350nm": 0, "130nm": 1, "90nm": 2, "65nm": 3, "45nm": 5}


class ControlBlock(BaseModel):
    """One CMOS block sharing a single waveform generator"""

    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    qubit_members: Tuple[int, ...] = Field(min_length=1)

    @field_validator("qubit_members")
    @classmethod
    def validate_members(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if len(set(v)) != len(v):
            raise ValueError(f"block members must be distinct, got {list(v)}")
        return v


class RoutingNode(BaseModel):
    """A CMOS process node and how many routing channels it offers"""

    model_config = ConfigDict(frozen=True)

    name: str
    channels: int = Field(ge=0)
    effective_lines_per_qubit: int = Field(default=EFFECTIVE_LINES_PER_QUBIT, ge=1)


class ArchModel(BaseModel):
    """
    The 100 mK chip model

    Blocks partition the qubits; CPhase may only run on neighbor_pairs;
    signal_overlap maps a qubit to the qubits its control lines pass over.
    """

    model_config = ConfigDict(frozen=True)

    n_qubits: int = Field(ge=0)
    blocks: Tuple[ControlBlock, ...]
    n_cphase_switches: int = Field(default=0, ge=0)
    neighbor_pairs: FrozenSet[Tuple[int, int]] = frozenset()
    signal_overlap: Dict[int, FrozenSet[int]] = Field(default_factory=dict)

    @field_validator("blocks", mode="before")
    @classmethod
    def coerce_blocks(cls, v: Any) -> Any:
        """Accept the file form: a list of member lists"""
        out = []
        for i, b in enumerate(v):
            if isinstance(b, (list, tuple)):
                out.append({"id": i, "qubit_members": tuple(b)})
            else:
                out.append(b)
        return out

    @field_validator("neighbor_pairs", mode="before")
    @classmethod
    def coerce_pairs(cls, v: Any) -> Any:
        pairs = set()
        for pair in v:
            a, b = pair
            pairs.add((min(a, b), max(a, b)))
        return frozenset(pairs)

    @model_validator(mode="after")
    def validate_layout(self) -> "ArchModel":
        seen: Dict[int, int] = {}
        for block in self.blocks:
            for q in block.qubit_members:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"block {block.id} names qubit {q} outside 0..{self.n_qubits - 1}")
                if q in seen:
                    raise ValueError(f"qubit {q} is in blocks {seen[q]} and {block.id}")
                seen[q] = block.id
        if len(seen) != self.n_qubits:
            missing = sorted(set(range(self.n_qubits)) - set(seen))
            raise ValueError(f"blocks do not cover qubits {missing}")
        if [b.id for b in self.blocks] != list(range(len(self.blocks))):
            raise ValueError("block ids must be 0..len(blocks)-1 in order")

        for a, b in self.neighbor_pairs:
            if a == b or not (0 <= a < self.n_qubits and 0 <= b < self.n_qubits):
                raise ValueError(f"invalid neighbor pair ({a}, {b})")
        for q, over in self.signal_overlap.items():
            if not 0 <= q < self.n_qubits or any(not 0 <= y < self.n_qubits for y in over):
                raise ValueError(f"signal_overlap entry for qubit {q} is out of range")
            if q in over:
                raise ValueError(f"qubit {q} cannot overlap itself")
        return self

    @cached_property
    def block_index(self) -> Tuple[int, ...]:
        index = [0] * self.n_qubits
        for block in self.blocks:
            for q in block.qubit_members:
                index[q] = block.id
        return tuple(index)

    def block_of(self, q: int) -> int:
        return self.block_index[q]

    def blocks_of_gate(self, gate: Gate) -> Tuple[int, ...]:
        """Blocks a gate locks while it runs (both blocks for a CPhase)"""
        return tuple(sorted({self.block_index[q] for q in gate.qubits}))

    def allows_pair(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.neighbor_pairs

    def overlapped_by(self, q: int) -> FrozenSet[int]:
        return self.signal_overlap.get(q, frozenset())

    def block_sizes(self) -> List[int]:
        return [len(b.qubit_members) for b in self.blocks]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_qubits": self.n_qubits,
            "blocks": [list(b.qubit_members) for b in self.blocks],
            "n_cphase_switches": self.n_cphase_switches,
            "neighbor_pairs": [list(p) for p in sorted(self.neighbor_pairs)],
            "signal_overlap": {
                str(q): sorted(over) for q, over in sorted(self.signal_overlap.items())
            },
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ArchModel":
        """
        Build an arch from its file form

        Raises:
            ArchError: If the layout breaks an invariant
        """
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ArchError(f"Invalid architecture: {e}") from e

    def __repr__(self) -> str:
        return f"ArchModel(qubits={self.n_qubits}, blocks={len(self.blocks)})"


def load_arch(path: Union[str, Path]) -> ArchModel:
    """
    Load an architecture JSON file

    Raises:
        OSError: If the file cannot be read
        ArchError: If the file is not a valid architecture
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ArchError(f"Invalid JSON in arch file {path}: {e}") from e
    arch = ArchModel.from_dict(data)
    logger.info(f"✅ Loaded arch from: {path} ({len(arch.blocks)} blocks)")
    return arch


def save_arch(arch: ArchModel, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(arch.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"💾 Saved arch to: {path}")
    return path


@lru_cache(maxsize=None)
def default_bs9_21_arch() -> ArchModel:
    """
    The default BS9(21) layout: 21 qubits in 16 blocks, 24 CPHASE switches

    Example:
        >>> arch = default_bs9_21_arch()
        >>> len(arch.blocks), arch.n_cphase_switches
        (16, 24)
    """
    return load_arch(data_path(DEFAULT_ARCH))


def overlap_example_arch() -> ArchModel:
    """Default layout with a few control lines routed over neighbouring qubits"""
    return load_arch(data_path(OVERLAP_EXAMPLE_ARCH))


def fully_connected_arch(n_qubits: int, blocks: Optional[Sequence[Sequence[int]]] = None) -> ArchModel:
    """
    Fully connected layout for circuits without a chip file

    Every qubit pair may run a CPhase; blocks default to one per qubit.
    """
    members = blocks if blocks is not None else [[q] for q in range(n_qubits)]
    return ArchModel(
        n_qubits=n_qubits,
        blocks=[list(b) for b in members],
        neighbor_pairs=list(combinations(range(n_qubits), 2)),
    )


def controllable_qubits(r: RoutingNode) -> int:
    return r.channels // r.effective_lines_per_qubit


@dataclass(frozen=True)
class RoutingRow:
    name: str
    channels: int
    controllable_qubits: int


def routing_table(nodes: Sequence[RoutingNode]) -> List[RoutingRow]:
    """One row per process node with its controllable qubit count"""
    return [RoutingRow(n.name, n.channels, controllable_qubits(n)) for n in nodes]


def load_routing_nodes(
    path: Optional[Union[str, Path]] = None,
    effective_lines_per_qubit: Optional[int] = None,
) -> List[RoutingNode]:
    """
    Read routing node data (CSV: name,channels,eff_lines)

    Args:
        path: CSV file, defaults to the bundled routing table
        effective_lines_per_qubit: Override the per-row eff_lines column

    Raises:
        ConfigError: If a row is malformed
    """
    path = Path(path) if path else data_path(ROUTING_NODES)
    nodes = []
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            try:
                eff = effective_lines_per_qubit or int(row.get("eff_lines") or EFFECTIVE_LINES_PER_QUBIT)
                nodes.append(RoutingNode(
                    name=row["name"],
                    channels=int(row["channels"]),
                    effective_lines_per_qubit=eff,
                ))
            except (KeyError, ValueError, ValidationError) as e:
                raise ConfigError(f"Malformed routing row {row} in {path}: {e}") from e
    logger.debug(f"Loaded {len(nodes)} routing nodes from {path}")
    return nodes


def consistent_lines_per_qubit(
    rows: Sequence[Tuple[int, int]],
    max_lines: int = 64,
) -> List[int]:
    """
    Integer lines-per-qubit values L with floor(channels / L) == qubits on every row

    Args:
        rows: (channels, controllable qubits) pairs
        max_lines: Largest L to try

    Example:
        >>> consistent_lines_per_qubit([(4, 0), (19, 1), (27, 2), (40, 3), (62, 5)])
        [11, 12]
    """
    return [
        lines for lines in range(1, max_lines + 1)
        if all(channels // lines == qubits for channels, qubits in rows)
    ]


__all__ = [
    "DIRECT_LINES_PER_QUBIT",
    "EFFECTIVE_LINES_PER_QUBIT",
    "TABLE2_CONTROLLABLE",
    "ControlBlock",
    "RoutingNode",
    "RoutingRow",
    "ArchModel",
    "load_arch",
    "save_arch",
    "default_bs9_21_arch",
    "overlap_example_arch",
    "fully_connected_arch",
    "controllable_qubits",
    "routing_table",
    "load_routing_nodes",
    "consistent_lines_per_qubit",
]
