"""
qcodesign gen - generate or validate a circuit and print its gate census
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

import typer

from qcodesign.circuit import (
    Circuit,
    census,
    critical_path_length,
    generate_bs9_21_half_round,
    load_circuit,
    protocol_set_size,
    save_circuit,
    validate_circuit,
)
from qcodesign.cli.utils import (
    console,
    create_table,
    handle_errors,
    load_run_config,
    output_dir,
    print_success,
)
from qcodesign.config import RunConfig
from qcodesign.exceptions import CircuitError, ConfigError

logger = logging.getLogger(__name__)

CIRCUIT_FILE = "circuit.json"


def resolve_circuit(config: RunConfig, source: Optional[Path] = None, bs9: bool = True) -> Circuit:
    """
    Circuit for a run: explicit file, then the configured file, then the generator

    Raises:
        CircuitError: If the circuit file is malformed or fails validation
        ConfigError: If no source is available
    """
    path = source or (Path(config.circuit) if config.circuit else None)
    if path is not None:
        circuit = load_circuit(path)
    elif bs9:
        circuit = generate_bs9_21_half_round()
    else:
        raise ConfigError("No circuit source: pass --bs9, --in or set 'circuit' in the config")

    report = validate_circuit(circuit)
    if not report.ok:
        first = report.violations[0]
        raise CircuitError(
            f"Invalid circuit ({', '.join(report.kinds())}): {first.message}"
        )
    return circuit


def run_gen(config: RunConfig, out: Path, source: Optional[Path] = None, bs9: bool = True) -> Tuple[Circuit, Path]:
    circuit = resolve_circuit(config, source, bs9)
    path = save_circuit(circuit, out / CIRCUIT_FILE)
    logger.info(f"🧬 Circuit with {len(circuit)} gates written to {path}")
    return circuit, path


def gen(
    bs9: bool = typer.Option(True, "--bs9/--no-bs9", help="Use the built-in BS9(21) half-round generator"),
    source: Optional[Path] = typer.Option(None, "--in", help="Circuit JSON to validate instead of generating"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory"),
    config_path: Optional[Path] = typer.Option(None, "--config", "-c", help="Run config (YAML/JSON)"),
):
    """
    🧬 Generate the BS9(21) circuit (or validate one) and print its gate census

    Examples:
        qcodesign gen --bs9
        qcodesign gen --in my_circuit.json --out results/
    """
    with handle_errors():
        config = load_run_config(config_path)
        circuit, path = run_gen(config, output_dir(config, out), source, bs9)
        cns = census(circuit)

        console.print(create_table(
            "🧮 Gate census",
            ["kind", "count"],
            [[kind.label, cns[kind]] for kind in cns.kinds_present()] + [["total", cns.total]],
        ))
        console.print(cns.format_line())
        print_success("Circuit ready", {
            "File": path,
            "Gates": len(circuit),
            "Critical path (ticks)": critical_path_length(circuit),
            "Protocol set size": protocol_set_size(cns, config.layout.cphase_protocols),
        })
