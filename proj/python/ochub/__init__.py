"""Object-centric event data hub: append-only store, quality checks, imports and exports."""

from ._core import (
    ConflictError,
    FormatError,
    HubError,
    IoError,
    NotFoundError,
    Store,
    UnsupportedError,
    run_cli,
)

__all__ = [
    "ConflictError",
    "FormatError",
    "HubError",
    "IoError",
    "NotFoundError",
    "Store",
    "UnsupportedError",
    "run_cli",
]
