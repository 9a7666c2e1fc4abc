#!/usr/bin/env python3
"""
qcodesign CLI - Main entry point

Usage:
    qcodesign --help
    qcodesign gen --bs9
    qcodesign schedule --constraints both
    qcodesign audit
    qcodesign sweep
    qcodesign report
"""

import sys
from typing import Optional

import click
import typer
from dotenv import load_dotenv
from rich.panel import Panel

from qcodesign.cli.commands import audit, gen, init, report, schedule, sweep
from qcodesign.cli.utils import EXIT_CONFIG, console, setup_logging

# Create CLI app
app = typer.Typer(
    name="qcodesign",
    help="⚛️  qcodesign - QEC micro-architecture co-design for Bacon-Shor BS9(21)",
    add_completion=False,
    rich_markup_mode="rich",
    no_args_is_help=True,
)

app.command(name="gen")(gen.gen)
app.command(name="schedule")(schedule.schedule)
app.command(name="audit")(audit.audit)
app.command(name="sweep")(sweep.sweep)
app.command(name="report")(report.report)
app.command(name="init")(init.init)


@app.callback()
def callback(
    log_level: Optional[str] = typer.Option(
        None, "--log-level", help="DEBUG, INFO, WARNING or ERROR (default: config or WARNING)"
    ),
):
    """Load .env and route logging to stderr"""
    load_dotenv()
    setup_logging(log_level)


@app.command()
def version():
    """Show qcodesign version"""
    from qcodesign import __version__

    console.print()
    console.print(Panel.fit(
        f"[bold cyan]⚛️  qcodesign v{__version__}[/bold cyan]\n"
        "[dim]Scheduling, control-plane and error-budget co-design[/dim]",
        border_style="cyan",
    ))
    console.print()


def main():
    """Main entry point for CLI"""
    try:
        code = app(standalone_mode=False)
    except click.UsageError as e:
        e.show()
        sys.exit(EXIT_CONFIG)
    except click.exceptions.Abort:
        console.print("\n[yellow]⏸️  Interrupted[/yellow]")
        sys.exit(130)
    sys.exit(code if isinstance(code, int) else 0)


if __name__ == "__main__":
    main()
