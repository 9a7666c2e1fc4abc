"""
Bundled data files: default architecture, routing nodes, exchange calibration
"""

from pathlib import Path
from typing import List

from qcodesign.exceptions import DataFileNotFoundError

DEFAULT_ARCH = "bs9_21_arch.json"
OVERLAP_EXAMPLE_ARCH = "bs9_21_arch_overlap.json"
ROUTING_NODES = "routing_nodes.csv"
EXCHANGE_CALIBRATION = "exchange_calibration.csv"


def get_data_dir() -> Path:
    """Get the bundled data directory path"""
    return Path(__file__).parent


def list_data_files() -> List[str]:
    """
    List all bundled data files

    Returns:
        Sorted list of file names

    Example:
        >>> from qcodesign.data import list_data_files
        >>> list_data_files()
        ['bs9_21_arch.json', 'bs9_21_arch_overlap.json', ...]
    """
    data_dir = get_data_dir()
    return sorted(
        p.name for p in data_dir.iterdir()
        if p.suffix in (".json", ".csv", ".yaml")
    )


def data_path(name: str) -> Path:
    """
    Resolve a bundled data file

    Args:
        name: File name inside the data directory

    Returns:
        Absolute path to the file

    Raises:
        DataFileNotFoundError: If the file doesn't exist
    """
    path = get_data_dir() / name
    if not path.exists():
        available = list_data_files()
        raise DataFileNotFoundError(
            f"Data file '{name}' not found. "
            f"Available files: {', '.join(available)}"
        )
    return path


__all__ = [
    "DEFAULT_ARCH",
    "OVERLAP_EXAMPLE_ARCH",
    "ROUTING_NODES",
    "EXCHANGE_CALIBRATION",
    "get_data_dir",
    "list_data_files",
    "data_path",
]
