"""Shared plain-text serialization for matrices and value columns.

Matrix layout: first line ``rows cols``; then rows*cols lines in row-major
order, each ``re im`` printed with 17 significant digits so every finite
double round-trips bit-exactly.  Value files hold one decimal per line.
"""

from __future__ import annotations

import math
import os
import tempfile

import numpy as np

from .numkit import as_matrix


class MatrixFormatError(ValueError):
    """Malformed matrix or value file; messages name the offending line."""


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` via a same-directory temp file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".commlab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_matrix(m) -> str:
    m = as_matrix(m)
    rows, cols = m.shape
    lines = [f"{rows} {cols}"]
    for z in m.reshape(-1):
        lines.append(f"{z.real:.17g} {z.imag:.17g}")
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise MatrixFormatError("line 1: missing header 'rows cols'")
    head = lines[0].split()
    if len(head) != 2:
        raise MatrixFormatError(f"line 1: header must be 'rows cols', got {lines[0]!r}")
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError:
        raise MatrixFormatError(f"line 1: non-integer header {lines[0]!r}") from None
    if rows < 0 or cols < 0:
        raise MatrixFormatError("line 1: negative dimensions")
    need = rows * cols
    entries = np.empty(need, dtype=np.complex128)
    count = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        parts = raw.split()
        if len(parts) != 2:
            raise MatrixFormatError(f"line {lineno}: expected 're im', got {raw!r}")
        try:
            re, im = float(parts[0]), float(parts[1])
        except ValueError:
            raise MatrixFormatError(f"line {lineno}: bad decimal literal {raw!r}") from None
        if not (math.isfinite(re) and math.isfinite(im)):
            raise MatrixFormatError(f"line {lineno}: non-finite entry")
        if count >= need:
            raise MatrixFormatError(f"line {lineno}: more than rows*cols entries")
        entries[count] = complex(re, im)
        count += 1
    if count != need:
        raise MatrixFormatError(f"expected {need} entries, found {count}")
    return entries.reshape(rows, cols)


def save_matrix(path: str | os.PathLike, m) -> None:
    atomic_write(path, format_matrix(m))


def load_matrix(path: str | os.PathLike) -> np.ndarray:
    try:
        with open(path) as handle:
            text = handle.read()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_matrix(text)
    except MatrixFormatError as exc:
        raise MatrixFormatError(f"{path}: {exc}") from None


def format_values(values) -> str:
    vals = np.asarray(values, dtype=np.float64).reshape(-1)
    if not np.isfinite(vals).all():
        raise MatrixFormatError("non-finite value")
    return "\n".join(f"{x:.17g}" for x in vals) + "\n"


def save_values(path: str | os.PathLike, values) -> None:
    atomic_write(path, format_values(values))


def load_values(path: str | os.PathLike) -> np.ndarray:
    try:
        with open(path) as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from exc
    out = []
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            x = float(raw.strip())
        except ValueError:
            raise MatrixFormatError(
                f"{path}: line {lineno}: bad decimal literal {raw!r}"
            ) from None
        if not math.isfinite(x):
            raise MatrixFormatError(f"{path}: line {lineno}: non-finite value")
        out.append(x)
    return np.asarray(out, dtype=np.float64)
