"""Parameter recovery from a covariance matrix, numeric and symbolic.

Both solvers iterate vertices in the certificate ordering.  For each
vertex v the row for a source s is the plain covariance row when there
is no half-trek from v to s, and the residual row (covariances with the
already-recovered incoming coefficients of s regressed out) when s is
half-trek reachable, in which case the ordering guarantees s was solved
earlier.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .algebra import RatFn, SingularMatrixError, gauss_solve_ratfn, sigma_poly
from .graphs import MixedGraph
from .identify import Certificate

__all__ = [
    "DegenerateSigmaError",
    "PIVOT_RTOL",
    "SYMBOLIC_MAX_VERTICES",
    "a_entry",
    "b_entry",
    "evaluate_lambda_symbolic",
    "recover_lambda_numeric",
    "recover_lambda_symbolic",
    "recover_omega",
]

PIVOT_RTOL = 1e-10
SYMBOLIC_MAX_VERTICES = 8


class DegenerateSigmaError(ValueError):
    """The covariance matrix lies off the generic set: a linear system
    in the recovery became numerically singular."""

    def __init__(self, vertex: int):
        super().__init__(
            f"numerically singular system while solving the incoming "
            f"coefficients of vertex {vertex}; the covariance matrix is "
            f"degenerate for this graph")
        self.vertex = vertex


def _lambda_of(lam: Mapping[tuple[int, int], float], l: int, i: int) -> float:
    try:
        return lam[(l, i)]
    except KeyError:
        raise ValueError(f"missing coefficient l_{l}_{i}") from None


def a_entry(g: MixedGraph, sigma: np.ndarray,
            lam: Mapping[tuple[int, int], float], i: int, j: int) -> float:
    """sigma_ij minus the parent contributions of i."""
    val = sigma[i - 1, j - 1]
    for l in g.parents(i):
        val -= _lambda_of(lam, l, i) * sigma[l - 1, j - 1]
    return val


def b_entry(g: MixedGraph, sigma: np.ndarray,
            lam: Mapping[tuple[int, int], float], i: int, j: int) -> float:
    """Error covariance expression for the pair (i, j)."""
    val = a_entry(g, sigma, lam, i, j)
    for k in g.parents(j):
        val -= _lambda_of(lam, k, j) * a_entry(g, sigma, lam, i, k)
    return val


def _solve_partial_pivot(m: np.ndarray, rhs: np.ndarray, vertex: int) -> np.ndarray:
    """Gaussian elimination with partial pivoting and a relative pivot
    threshold; raises DegenerateSigmaError on a failed pivot."""
    k = len(rhs)
    aug = np.hstack([m.astype(float, copy=True), rhs.reshape(-1, 1).astype(float)])
    row_scale = np.maximum(np.abs(aug).max(axis=1), 1e-300)
    for col in range(k):
        r = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[r, col]) < PIVOT_RTOL * row_scale[r]:
            raise DegenerateSigmaError(vertex)
        if r != col:
            aug[[col, r]] = aug[[r, col]]
            row_scale[[col, r]] = row_scale[[r, col]]
        factors = aug[col + 1:, col] / aug[col, col]
        aug[col + 1:, col:] -= np.outer(factors, aug[col, col:])
    sol = np.empty(k)
    for i in range(k - 1, -1, -1):
        sol[i] = (aug[i, k] - aug[i, i + 1:k] @ sol[i + 1:]) / aug[i, i]
    return sol


def recover_lambda_numeric(g: MixedGraph, cert: Certificate,
                           sigma: np.ndarray) -> np.ndarray:
    """Edge coefficient matrix recovered from sigma; support inside D."""
    n = g.n
    if sigma.shape != (n, n):
        raise ValueError(f"covariance matrix must be {n}x{n}")
    lam = np.zeros((n, n))
    for v in cert.ordering:
        pa = g.parents(v)
        k = len(pa)
        if k == 0:
            continue
        htr = g.half_trek_reachable(v)
        rows = []
        for s in sorted(cert.sets[v]):
            if s in htr:
                rows.append(sigma[s - 1, :] - lam[:, s - 1] @ sigma)
            else:
                rows.append(sigma[s - 1, :])
        m = np.array([[row[p - 1] for p in pa] for row in rows])
        rhs = np.array([row[v - 1] for row in rows])
        sol = _solve_partial_pivot(m, rhs, v)
        for p, val in zip(pa, sol):
            lam[p - 1, v - 1] = val
    return lam


def recover_omega(sigma: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Error covariance via the rearranged model equation, symmetrized."""
    if sigma.shape != lam.shape:
        raise ValueError("shape mismatch between sigma and lambda")
    eye = np.eye(len(sigma))
    omega = (eye - lam).T @ sigma @ (eye - lam)
    return (omega + omega.T) / 2.0


def _symbolic_a_row(g: MixedGraph, lam: dict[tuple[int, int], RatFn],
                    s: int, targets, full: bool) -> list[RatFn]:
    out = []
    for j in targets:
        expr = RatFn(sigma_poly(s, j))
        if full:
            for l in g.parents(s):
                expr = expr - lam[(l, s)] * RatFn(sigma_poly(l, j))
        out.append(expr)
    return out


def recover_lambda_symbolic(g: MixedGraph, cert: Certificate,
                            max_vertices: int = SYMBOLIC_MAX_VERTICES,
                            ) -> dict[tuple[int, int], RatFn]:
    """Edge coefficients as exact rational functions of the covariances.

    Returns one entry per directed edge; coefficients of absent edges
    are identically zero.  Raises SingularMatrixError when a system is
    symbolically singular, which contradicts a valid certificate, and
    TermCapError when expression swell exceeds the configured cap.
    """
    if g.n > max_vertices:
        raise ValueError(
            f"symbolic recovery is capped at {max_vertices} vertices; "
            f"got {g.n}")
    lam: dict[tuple[int, int], RatFn] = {}
    for v in cert.ordering:
        pa = g.parents(v)
        if not pa:
            continue
        htr = g.half_trek_reachable(v)
        matrix = []
        rhs = []
        for s in sorted(cert.sets[v]):
            row = _symbolic_a_row(g, lam, s, list(pa) + [v], full=s in htr)
            matrix.append(row[:-1])
            rhs.append(row[-1])
        try:
            sol = gauss_solve_ratfn(matrix, rhs)
        except SingularMatrixError as exc:
            raise SingularMatrixError(
                f"symbolically singular system at vertex {v}; the source "
                f"set {sorted(cert.sets[v])} does not satisfy the half-trek "
                f"criterion") from exc
        for p, x in zip(pa, sol):
            lam[(p, v)] = x
    return lam


def evaluate_lambda_symbolic(lam: Mapping[tuple[int, int], RatFn],
                             sigma: np.ndarray) -> np.ndarray:
    """Numeric matrix obtained by evaluating the symbolic coefficients."""
    from .algebra import sigma_var

    n = len(sigma)
    assignment = {sigma_var(i, j): sigma[i - 1, j - 1]
                  for i in range(1, n + 1) for j in range(i, n + 1)}
    out = np.zeros((n, n))
    for (i, j), fn in lam.items():
        out[i - 1, j - 1] = fn.evaluate(assignment)
    return out
