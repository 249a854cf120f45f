"""Forward simulation of model covariance matrices and seeded sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import MixedGraph, enumerate_treks

__all__ = [
    "COND_LIMIT",
    "ParamPair",
    "off_model_sigma",
    "sample_model_instance",
    "simulate_sigma",
    "trek_rule_sigma",
]

COND_LIMIT = 1e12
_SPECTRAL_RADIUS = 0.8


@dataclass(frozen=True)
class ParamPair:
    """Edge coefficients and error covariance for a mixed graph.

    lam has support inside the directed edges; omega is symmetric with
    off-diagonal support inside the bidirected edges.
    """

    lam: np.ndarray
    omega: np.ndarray

    def validate(self, g: MixedGraph) -> None:
        n = g.n
        if self.lam.shape != (n, n) or self.omega.shape != (n, n):
            raise ValueError(f"parameter matrices must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                if self.lam[i, j] != 0 and (i + 1, j + 1) not in g.directed:
                    raise ValueError(
                        f"lambda[{i + 1},{j + 1}] nonzero without an edge "
                        f"{i + 1} -> {j + 1}")
        if not np.array_equal(self.omega, self.omega.T):
            raise ValueError("omega must be symmetric")
        for i in range(n):
            for j in range(i + 1, n):
                if self.omega[i, j] != 0 and not g.has_bidirected(i + 1, j + 1):
                    raise ValueError(
                        f"omega[{i + 1},{j + 1}] nonzero without an edge "
                        f"{i + 1} <-> {j + 1}")


def _check_pd(m: np.ndarray, what: str) -> None:
    try:
        np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise ValueError(f"{what} is not positive definite") from None


def simulate_sigma(g: MixedGraph, params: ParamPair) -> np.ndarray:
    """Model covariance for the given parameters, symmetrized and
    verified positive definite."""
    params.validate(g)
    n = g.n
    m = np.eye(n) - params.lam
    if np.linalg.cond(m) >= COND_LIMIT:
        raise ValueError("I - lambda is singular or too ill-conditioned")
    _check_pd(params.omega, "omega")
    # sigma = (I - L)^-T omega (I - L)^-1
    x = np.linalg.solve(m.T, params.omega)
    sigma = np.linalg.solve(m.T, x.T).T
    sigma = (sigma + sigma.T) / 2.0
    _check_pd(sigma, "the simulated covariance")
    return sigma


def trek_rule_sigma(g: MixedGraph, params: ParamPair) -> np.ndarray:
    """Covariance assembled entry by entry as sums of trek monomials.

    Only defined for acyclic graphs, where the trek set is finite.
    """
    params.validate(g)
    n = g.n
    sigma = np.zeros((n, n))
    for v in range(1, n + 1):
        for w in range(v, n + 1):
            total = 0.0
            for trek in enumerate_treks(g, v, w):
                total += trek.value(params.lam, params.omega)
            sigma[v - 1, w - 1] = total
            sigma[w - 1, v - 1] = total
    return sigma


def sample_model_instance(g: MixedGraph, seed: int) -> tuple[ParamPair, np.ndarray]:
    """Deterministic generic model instance for (g, seed).

    Edge coefficients draw magnitudes from [0.2, 0.9] with random sign;
    if the spectral radius exceeds 0.8 the whole matrix is rescaled,
    which keeps I - lambda well conditioned on cyclic graphs.  The error
    covariance gets bidirected entries from [-0.5, 0.5] and a diagonally
    dominant diagonal, so it is always positive definite.
    """
    rng = np.random.default_rng(seed)
    n = g.n
    lam = np.zeros((n, n))
    for i, j in sorted(g.directed):
        magnitude = rng.uniform(0.2, 0.9)
        sign = 1.0 if rng.random() < 0.5 else -1.0
        lam[i - 1, j - 1] = sign * magnitude
    if g.directed:
        radius = max(abs(np.linalg.eigvals(lam)))
        if radius > _SPECTRAL_RADIUS:
            lam *= _SPECTRAL_RADIUS / radius
    omega = np.zeros((n, n))
    for i, j in sorted(g.bidirected):
        val = rng.uniform(-0.5, 0.5)
        omega[i - 1, j - 1] = val
        omega[j - 1, i - 1] = val
    for i in range(n):
        omega[i, i] = 1.0 + np.abs(omega[i, :]).sum()
    params = ParamPair(lam=lam, omega=omega)
    return params, simulate_sigma(g, params)


def off_model_sigma(n: int, seed: int) -> np.ndarray:
    """A positive definite matrix almost surely outside any fixed model:
    A A^T + n I with standard normal A."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    return a @ a.T + n * np.eye(n)
