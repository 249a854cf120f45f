"""Generators of the model ideal: the equality constraints a graph
imposes on covariance matrices.

One generator arises per vertex pair that carries no bidirected edge
and is not consumed by the identification systems (neither endpoint
sits in the other's certificate set).  Each generator is the numerator
of the symbolic error-covariance expression for the pair after all edge
coefficients are substituted; its cleared denominator is a product of
elimination pivots and is recorded alongside, since it vanishes only
off the generic set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .algebra import Poly, RatFn, canonicalize_constraint, sigma_poly, sigma_var
from .graphs import MixedGraph
from .identify import Certificate
from .recovery import recover_lambda_symbolic

__all__ = [
    "ConstraintSet",
    "b_ij_ratfn",
    "evaluate_constraints",
    "model_ideal_generators",
]


@dataclass
class ConstraintSet:
    """Canonical generator polynomials in the covariance entries."""

    n: int
    generators: list[Poly]
    pairs: list[tuple[int, int]]
    denominators: list[Poly] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.generators)


def b_ij_ratfn(g: MixedGraph, lam: Mapping[tuple[int, int], RatFn],
               i: int, j: int) -> RatFn:
    """Symbolic error-covariance expression for the pair (i, j), with
    every edge coefficient replaced by its recovered rational function."""

    def a_of(x: int, y: int) -> RatFn:
        expr = RatFn(sigma_poly(x, y))
        for l in g.parents(x):
            expr = expr - lam[(l, x)] * RatFn(sigma_poly(l, y))
        return expr

    expr = a_of(i, j)
    for k in g.parents(j):
        expr = expr - lam[(k, j)] * a_of(i, k)
    return expr


def qualifying_pairs(g: MixedGraph, cert: Certificate) -> list[tuple[int, int]]:
    """Vertex pairs that generate constraints: no bidirected edge and
    neither endpoint used in the other's identification system."""
    out = []
    for i in range(1, g.n + 1):
        for j in range(i + 1, g.n + 1):
            if g.has_bidirected(i, j):
                continue
            if i in cert.sets[j] or j in cert.sets[i]:
                continue
            out.append((i, j))
    return out


def model_ideal_generators(g: MixedGraph, cert: Certificate) -> ConstraintSet:
    """Canonicalized generators of the model ideal for a certified graph.

    The generator count must equal C(n, 2) - |D| - |B|; a mismatch means
    the certificate double-used a vertex pair and is reported as an
    error rather than silently producing a wrong generating set.
    """
    lam = recover_lambda_symbolic(g, cert)
    pairs = qualifying_pairs(g, cert)
    expected = g.n * (g.n - 1) // 2 - len(g.directed) - len(g.bidirected)
    if len(pairs) != expected:
        raise RuntimeError(
            f"generator count {len(pairs)} does not match "
            f"C(n,2) - |D| - |B| = {expected}; certificate sets double-use "
            f"a vertex pair")
    generators: list[Poly] = []
    denominators: list[Poly] = []
    for i, j in pairs:
        expr = b_ij_ratfn(g, lam, i, j)
        generators.append(canonicalize_constraint(expr.num))
        denominators.append(expr.den)
    return ConstraintSet(n=g.n, generators=generators, pairs=pairs,
                         denominators=denominators)


def evaluate_constraints(cs: ConstraintSet, sigma: np.ndarray) -> list[float]:
    """Scaled residual of each generator at sigma, in generator order.

    The residual is |f(sigma)| / (1 + sum of absolute term values), so
    tolerances are dimensionless.
    """
    if sigma.shape != (cs.n, cs.n):
        raise ValueError(f"covariance matrix must be {cs.n}x{cs.n}")
    assignment = {sigma_var(i, j): sigma[i - 1, j - 1]
                  for i in range(1, cs.n + 1) for j in range(i, cs.n + 1)}
    out = []
    for gen in cs.generators:
        value, scale = gen.evaluate_scaled(assignment)
        out.append(abs(value) / (1.0 + scale))
    return out
