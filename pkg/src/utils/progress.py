"""
Progress bars for long loops, switched on per run by the CLI.
"""
from typing import Iterable, TypeVar

from tqdm import tqdm

T = TypeVar("T")

_enabled = False


def set_progress(enabled: bool) -> None:
    global _enabled
    _enabled = bool(enabled)


def progress_enabled() -> bool:
    return _enabled


def progress(iterable: Iterable[T], desc: str) -> tqdm:
    """tqdm over `iterable`, silent unless the current run asked for progress."""
    return tqdm(iterable, desc=desc, disable=not _enabled)
