"""
Utility functions for CLI
"""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence

import typer
from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table

from qcodesign.config import DEFAULT_CONFIG_FILE, RunConfig
from qcodesign.exceptions import ConfigError, InfeasibleError, QCodesignError

console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3


_level_from_flag = False


def setup_logging(level: Optional[str] = None) -> None:
    """Route library logging through rich on stderr; an explicit level wins over the config"""
    global _level_from_flag
    _level_from_flag = level is not None
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, RichHandler):
            root.removeHandler(handler)
    root.addHandler(RichHandler(console=err_console, show_path=False, rich_tracebacks=False))
    root.setLevel((level or "WARNING").upper())


def print_success(message: str, details: Optional[Dict[str, Any]] = None) -> None:
    """Print success message with optional details"""
    text = f"[bold green]✅ {message}[/bold green]"

    if details:
        text += "\n"
        for key, value in details.items():
            text += f"\n[bold]{key}:[/bold] {value}"

    console.print(Panel.fit(text, border_style="green", title="Success"))


def print_error(message: str, hint: Optional[str] = None) -> None:
    """Print error message with optional hint"""
    text = f"[bold red]❌ {message}[/bold red]"

    if hint:
        text += f"\n\n[dim]💡 Hint: {hint}[/dim]"

    console.print(Panel.fit(text, border_style="red", title="Error"))


def print_warning(message: str) -> None:
    console.print(f"[yellow]⚠️  {message}[/yellow]")


def print_info(message: str) -> None:
    console.print(f"[cyan]ℹ️  {message}[/cyan]")


def create_table(
    title: str,
    columns: Sequence[str],
    rows: Sequence[Sequence[Any]],
    show_header: bool = True,
    box_style: box.Box = box.ROUNDED,
) -> Table:
    """Create a formatted table; cells are stringified"""
    table = Table(title=title, box=box_style, show_header=show_header, header_style="bold magenta")

    styles = ["cyan", "green", "yellow", "blue", "magenta"]
    for i, col in enumerate(columns):
        table.add_column(col, style=styles[i % len(styles)])

    for row in rows:
        table.add_row(*["-" if cell is None else str(cell) for cell in row])

    return table


def exit_code_for(error: BaseException) -> int:
    """Stable exit-code contract"""
    if isinstance(error, InfeasibleError):
        return EXIT_INFEASIBLE
    if isinstance(error, QCodesignError):
        return EXIT_CONFIG
    if isinstance(error, OSError):
        return EXIT_IO
    return EXIT_CONFIG


_HINTS = {
    EXIT_INFEASIBLE: "Relax a constraint with --constraints off or edit the arch file",
    EXIT_IO: "Check that the path exists and is writable",
}


@contextmanager
def handle_errors() -> Iterator[None]:
    """Turn library errors into a printed message and a typer exit code"""
    try:
        yield
    except (QCodesignError, OSError, ValueError) as e:
        code = exit_code_for(e)
        print_error(str(e), _HINTS.get(code))
        raise typer.Exit(code=code) from e


def load_run_config(config_path: Optional[Path], **overrides: Any) -> RunConfig:
    """
    Load a RunConfig and apply CLI overrides (flags > file > defaults)

    Without --config, ./qcodesign.yaml is used when present.
    """
    if config_path is None and Path(DEFAULT_CONFIG_FILE).is_file():
        config_path = Path(DEFAULT_CONFIG_FILE)
    config = RunConfig.load(config_path) if config_path else RunConfig.create_default()
    config = config.with_overrides(**overrides)
    if not _level_from_flag:
        logging.getLogger().setLevel(config.log_level)
    return config


def output_dir(config: RunConfig, out: Optional[Path]) -> Path:
    path = out if out is not None else Path(config.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def constraint_settings(choice: str) -> List[str]:
    """Expand --constraints on|off|both"""
    choice = choice.lower()
    if choice == "both":
        return ["off", "on"]
    if choice in ("on", "off"):
        return [choice]
    raise ConfigError(f"Unsupported constraints setting: {choice}. Supported: on, off, both")


def ns(value: Optional[float]) -> Optional[float]:
    """Nanoseconds to seconds"""
    return None if value is None else value * 1e-9
