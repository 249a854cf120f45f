"""Flat-file IO: covariance CSVs and content hashing."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

__all__ = [
    "SYMMETRY_TOL",
    "read_covariance_csv",
    "sha256_path",
    "write_covariance_csv",
]

SYMMETRY_TOL = 1e-9


def read_covariance_csv(path) -> np.ndarray:
    """Load an n x n covariance matrix from comma-separated rows.

    Symmetry is validated to SYMMETRY_TOL relative to the largest entry,
    then the matrix is symmetrized exactly.
    """
    rows = []
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError:
            raise ValueError(f"{path}: line {line_no}: not a row of numbers") \
                from None
    if not rows:
        raise ValueError(f"{path}: empty covariance file")
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError(f"{path}: expected a square {n}x{n} matrix")
    m = np.array(rows, dtype=float)
    tol = SYMMETRY_TOL * max(1.0, float(np.abs(m).max()))
    if float(np.abs(m - m.T).max()) > tol:
        raise ValueError(f"{path}: matrix is not symmetric within {SYMMETRY_TOL}")
    return (m + m.T) / 2.0


def write_covariance_csv(path, m: np.ndarray) -> None:
    """Write with shortest round-trip float formatting, so identical
    inputs produce byte-identical files."""
    lines = [",".join(repr(float(x)) for x in row) for row in m]
    Path(path).write_text("\n".join(lines) + "\n")


def sha256_path(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
