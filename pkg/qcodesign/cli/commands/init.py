"""
qcodesign init - write a default run configuration
"""

from pathlib import Path

import typer

from qcodesign.cli.utils import console, handle_errors, print_success
from qcodesign.config import DEFAULT_CONFIG_FILE, RunConfig
from qcodesign.exceptions import ConfigError

ENV_EXAMPLE = """# qcodesign environment variables
# Any ${VAR} string in the run config is expanded from the environment.

# QCODESIGN_OUT=qcodesign-out
"""


def run_init(path: Path, force: bool = False) -> Path:
    """
    Save the default RunConfig to `path`

    Raises:
        ConfigError: If the file exists and force is False
    """
    if path.exists() and not force:
        raise ConfigError(f"{path} already exists; pass --force to overwrite")
    return RunConfig.create_default().save(path)


def init(
    path: Path = typer.Argument(Path(DEFAULT_CONFIG_FILE), help="Config file to write (.yaml or .json)"),
    force: bool = typer.Option(False, "--force", "-f", help="Overwrite an existing file"),
    env_example: bool = typer.Option(False, "--env-example", help="Also write .env.example"),
):
    """
    🪄 Write a default run configuration

    Examples:
        qcodesign init
        qcodesign init runs/fast.json --force
    """
    with handle_errors():
        written = run_init(path, force)
        if env_example:
            (written.parent / ".env.example").write_text(ENV_EXAMPLE, encoding="utf-8")

        print_success("Configuration created", {"File": written})
        console.print("\nNext steps:")
        console.print(f"  1. [cyan]edit {written}[/cyan]")
        console.print(f"  2. [cyan]qcodesign schedule --config {written}[/cyan]")
        console.print(f"  3. [cyan]qcodesign report --config {written}[/cyan]")
