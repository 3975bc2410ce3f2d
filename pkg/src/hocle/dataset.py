"""Loading feature matrices and label vectors from text files."""

import re

import numpy as np

from .exceptions import Empty, NonNumeric, RaggedRows

_WS = re.compile(r"[ \t]+")


def _split(line, fmt):
    if fmt == "csv":
        return [f.strip() for f in line.split(",")]
    if fmt in ("whitespace", "ws"):
        return _WS.split(line.strip())
    raise ValueError(f"unknown format {fmt!r}")


def _is_number(token):
    try:
        float(token)
    except ValueError:
        return False
    return True


def load_matrix(path, format="csv"):
    """Read an ``n x d`` matrix of finite floats from a delimited text file.

    Parameters
    ----------
    path : str or path-like
        File to read.
    format : {"csv", "whitespace"}
        Field separator: commas, or runs of spaces/tabs (``"ws"`` is accepted
        as an alias).

    Returns
    -------
    ndarray of shape (n, d), float64

    Notes
    -----
    A first line containing any non-numeric field is taken to be a header and
    skipped. Blank lines are ignored.
    """
    with open(path, "r", newline=None) as fh:
        lines = [ln.rstrip("\r\n") for ln in fh]
    lines = [ln for ln in lines if ln.strip()]
    if lines and not all(_is_number(t) for t in _split(lines[0], format)):
        lines = lines[1:]
    if not lines:
        raise Empty(f"{path}: no data rows")

    rows = []
    width = None
    for lineno, line in enumerate(lines, start=1):
        fields = _split(line, format)
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise RaggedRows(
                f"{path}: row {lineno} has {len(fields)} fields, expected {width}")
        try:
            rows.append([float(t) for t in fields])
        except ValueError as exc:
            raise NonNumeric(f"{path}: row {lineno}: {exc}") from None

    X = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(X)):
        raise NonNumeric(f"{path}: non-finite value in data")
    return X


def load_labels(path):
    """Read one label token per line and map tokens to ``0..c-1``.

    Ids are assigned in order of first appearance, so ``"b a b"`` becomes
    ``[0, 1, 0]``.
    """
    with open(path, "r", newline=None) as fh:
        tokens = [ln.strip() for ln in fh]
    tokens = [t for t in tokens if t]
    if not tokens:
        raise Empty(f"{path}: no labels")
    ids = {}
    out = np.empty(len(tokens), dtype=np.int64)
    for i, tok in enumerate(tokens):
        out[i] = ids.setdefault(tok, len(ids))
    return out
