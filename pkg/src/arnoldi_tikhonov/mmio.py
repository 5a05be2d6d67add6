"""MatrixMarket ``array`` format reader/writer for dense real data.

Values are written column-major with 17 significant digits, which
round-trips IEEE doubles exactly. Vectors are stored as n-by-1 arrays.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import MatrixFormatError

__all__ = ["save_matrix", "load_matrix", "load_vector"]

HEADER = "%%MatrixMarket matrix array real general"


def save_matrix(path, M) -> None:
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M[:, None]
    if M.ndim != 2:
        raise ValueError(f"can only save 1-d or 2-d arrays, got {M.ndim} dimensions")
    rows, cols = M.shape
    body = "\n".join(map("{:.17g}".format, M.ravel(order="F").tolist()))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{HEADER}\n{rows} {cols}\n")
        if body:
            fh.write(body)
            fh.write("\n")


def load_matrix(path) -> np.ndarray:
    """Read a dense matrix; parse problems raise :class:`MatrixFormatError`
    with the 1-based line number."""
    lines = Path(path).read_text(encoding="ascii").splitlines()
    if not lines:
        raise MatrixFormatError("empty file", line=1)
    banner = lines[0].split()
    if len(banner) != 5 or banner[0] != "%%MatrixMarket":
        raise MatrixFormatError(f"expected '{HEADER}', got {lines[0]!r}", line=1)
    if [b.lower() for b in banner[1:]] != ["matrix", "array", "real", "general"]:
        raise MatrixFormatError(f"unsupported MatrixMarket type {' '.join(banner[1:])!r}", line=1)

    i = 1
    while i < len(lines) and (not lines[i].strip() or lines[i].lstrip().startswith("%")):
        i += 1
    if i == len(lines):
        raise MatrixFormatError("missing size line", line=i + 1)
    size = lines[i].split()
    try:
        rows, cols = (int(tok) for tok in size)
    except ValueError:
        raise MatrixFormatError(f"size line must hold two integers, got {lines[i]!r}", line=i + 1) from None
    if rows < 0 or cols < 0:
        raise MatrixFormatError("negative dimension", line=i + 1)

    first = i + 1
    data = lines[first:]
    while data and not data[-1].strip():
        data.pop()
    if len(data) != rows * cols:
        raise MatrixFormatError(
            f"expected {rows * cols} values, found {len(data)}", line=first + min(len(data), rows * cols) + 1
        )
    try:
        values = np.array(data, dtype=float)
    except ValueError:
        for k, text in enumerate(data):
            try:
                float(text)
            except ValueError:
                raise MatrixFormatError(f"cannot parse value {text!r}", line=first + k + 1) from None
        raise
    return values.reshape((rows, cols), order="F")


def load_vector(path) -> np.ndarray:
    M = load_matrix(path)
    if M.ndim != 2 or M.shape[1] != 1:
        raise MatrixFormatError(f"expected an n-by-1 array, got shape {M.shape}")
    return M[:, 0]
