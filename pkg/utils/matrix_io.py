"""Plain-text matrix exchange format.

Layout::

    # kind=ensemble-sum r=100        (optional metadata line)
    n
    v11 v12 ... v1n
    ...

Values are written with 17 significant digits so a write/read cycle is lossless.
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .errors import DataFormatError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def format_metadata(metadata: Dict[str, object]) -> str:
    """Render a metadata dict as a ``# key=value ...`` comment line."""
    parts = [f"{key}={value}" for key, value in metadata.items() if value is not None]
    return "# " + " ".join(parts)


def parse_metadata(line: str) -> Dict[str, str]:
    """Parse a ``# key=value ...`` comment line; values stay strings."""
    body = line.lstrip("#").strip()
    metadata: Dict[str, str] = {}
    for token in body.split():
        if "=" not in token:
            raise DataFormatError(f"Malformed metadata token {token!r}", row=1)
        key, value = token.split("=", 1)
        metadata[key] = value
    return metadata


def write_matrix(path: PathLike, M: np.ndarray, metadata: Optional[Dict[str, object]] = None) -> Path:
    """Write a square matrix (or a vector, as a 1-row block) in the text format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    M = np.atleast_2d(np.asarray(M, dtype=float))

    lines = []
    if metadata:
        lines.append(format_metadata(metadata))
    lines.append(str(M.shape[1] if M.shape[0] == 1 else M.shape[0]))
    for row in M:
        lines.append(" ".join(f"{v:.17g}" for v in row))

    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {M.shape[0]}x{M.shape[1]} matrix to {path}")
    return path


def read_matrix(path: PathLike) -> Tuple[np.ndarray, Dict[str, str]]:
    """
    Read a matrix written by :func:`write_matrix`.

    Returns:
        (matrix, metadata) where metadata is empty when no header line exists

    Raises:
        DataFormatError: If the order line or any row is malformed
    """
    path = Path(path)
    raw = [line.strip() for line in path.read_text(encoding="utf-8").splitlines()]
    lines = [(i + 1, line) for i, line in enumerate(raw) if line]

    metadata: Dict[str, str] = {}
    if lines and lines[0][1].startswith("#"):
        metadata = parse_metadata(lines[0][1])
        lines = lines[1:]
    if not lines:
        raise DataFormatError(f"{path} holds no matrix")

    lineno, header = lines[0]
    try:
        n = int(header)
    except ValueError:
        raise DataFormatError(f"Expected matrix order, got {header!r}", row=lineno)

    rows = []
    for lineno, line in lines[1:]:
        fields = line.split()
        if len(fields) != n:
            raise DataFormatError(f"Expected {n} values, found {len(fields)}", row=lineno)
        try:
            rows.append([float(v) for v in fields])
        except ValueError as e:
            raise DataFormatError(f"Non-numeric value: {e}", row=lineno)

    if len(rows) not in (1, n):
        raise DataFormatError(f"Expected {n} rows, found {len(rows)}")
    M = np.array(rows, dtype=float)
    return (M[0] if len(rows) == 1 and n != 1 else M), metadata
