"""Property census over labeled mixed graphs.

Exhaustive mode enumerates every labeled graph on n vertices (one bit
per possible directed pair and per possible bidirected pair); random
mode samples graphs from a seeded generator.  Each examined graph is
checked for agreement between the two identifiability decisions, the
counting fixpoint implication, the edge-count bound, certificate
validity, the generator-count formula, and a round-trip parameter
recovery on certified graphs.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from multiprocessing import get_context

import numpy as np

from .graphs import MixedGraph
from .identify import (edge_count_bound, htc_identify, linear_identify,
                       quasi_linear_vertices, verify_certificate)
from .constraints import qualifying_pairs
from .recovery import (DegenerateSigmaError, recover_lambda_numeric,
                       recover_omega)
from .simulate import sample_model_instance

__all__ = [
    "CensusCapError",
    "CensusSummary",
    "EXHAUSTIVE_MAX_VERTICES",
    "examine_graph",
    "graph_count",
    "graph_from_index",
    "random_mixed_graph",
    "run_census",
]

EXHAUSTIVE_MAX_VERTICES = 4
ROUNDTRIP_RTOL = 1e-7
OFF_SUPPORT_TOL = 1e-8

VERDICT_HTC = "htc-identifiable"
VERDICT_QUASI = "quasi-linear-only"
VERDICT_NONE = "not-identifiable-by-htc"


class CensusCapError(RuntimeError):
    """Exhaustive enumeration was requested beyond the supported size."""


@dataclass
class CensusSummary:
    mode: str
    n: int
    total: int
    counts: dict[str, int]
    violations: list[str]
    elapsed_s: float
    jobs: int
    samples: int | None = None
    seed: int | None = None

    @property
    def summary_hash(self) -> str:
        payload = {
            "mode": self.mode,
            "n": self.n,
            "total": self.total,
            "counts": dict(sorted(self.counts.items())),
            "violations": self.violations,
            "samples": self.samples,
            "seed": self.seed,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "total": self.total,
            "counts": dict(sorted(self.counts.items())),
            "violations": self.violations,
            "elapsed_s": self.elapsed_s,
            "jobs": self.jobs,
            "samples": self.samples,
            "seed": self.seed,
            "summary_hash": self.summary_hash,
        }


def _pair_tables(n: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    directed = [(i, j) for i in range(1, n + 1)
                for j in range(1, n + 1) if i != j]
    bidirected = [(i, j) for i in range(1, n + 1)
                  for j in range(i + 1, n + 1)]
    return directed, bidirected


def graph_count(n: int) -> int:
    dp, bp = _pair_tables(n)
    return 1 << (len(dp) + len(bp))


def graph_from_index(n: int, index: int) -> MixedGraph:
    """Decode the graph whose edge sets are the bits of ``index``."""
    dp, bp = _pair_tables(n)
    directed = [pair for bit, pair in enumerate(dp) if index >> bit & 1]
    offset = len(dp)
    bidirected = [pair for bit, pair in enumerate(bp)
                  if index >> (offset + bit) & 1]
    return MixedGraph(n, directed, bidirected)


def random_mixed_graph(n: int, rng: np.random.Generator,
                       p_directed: float = 0.25,
                       p_bidirected: float = 0.2) -> MixedGraph:
    """Independent-edge random mixed graph (cycles and bows included)."""
    dp, bp = _pair_tables(n)
    directed = [pair for pair in dp if rng.random() < p_directed]
    bidirected = [pair for pair in bp if rng.random() < p_bidirected]
    return MixedGraph(n, directed, bidirected)


def examine_graph(g: MixedGraph, tag: str, instance_seed: int,
                  ) -> tuple[str, list[str]]:
    """Verdict plus any property violations for one graph."""
    violations: list[str] = []
    cert = htc_identify(g)
    lin = linear_identify(g)
    if (cert is None) != (lin is None):
        violations.append(
            f"{tag}: greedy and recursive identifiability decisions disagree")
    quasi = quasi_linear_vertices(g)
    if lin is not None and len(quasi) != g.n:
        violations.append(
            f"{tag}: linearly certified but counting fixpoint incomplete")
    verdict = VERDICT_NONE
    if cert is not None:
        verdict = VERDICT_HTC
        if not edge_count_bound(g):
            violations.append(f"{tag}: certified graph exceeds the edge bound")
        if not verify_certificate(g, cert):
            violations.append(f"{tag}: certificate failed re-verification")
        expected = g.n * (g.n - 1) // 2 - len(g.directed) - len(g.bidirected)
        got = len(qualifying_pairs(g, cert))
        if got != expected:
            violations.append(
                f"{tag}: generator count {got} != C(n,2)-|D|-|B| = {expected}")
        params, sigma = sample_model_instance(g, instance_seed)
        try:
            lam_hat = recover_lambda_numeric(g, cert, sigma)
        except DegenerateSigmaError:
            violations.append(
                f"{tag}: policy-sampled covariance hit a singular system")
        else:
            omega_hat = recover_omega(sigma, lam_hat)
            lam_scale = max(1.0, float(np.abs(params.lam).max()))
            om_scale = max(1.0, float(np.abs(params.omega).max()))
            if float(np.abs(lam_hat - params.lam).max()) > ROUNDTRIP_RTOL * lam_scale:
                violations.append(f"{tag}: lambda round-trip error too large")
            if float(np.abs(omega_hat - params.omega).max()) > ROUNDTRIP_RTOL * om_scale:
                violations.append(f"{tag}: omega round-trip error too large")
            off = _off_support_max(g, omega_hat)
            if off > OFF_SUPPORT_TOL:
                violations.append(
                    f"{tag}: recovered omega has off-support entry {off:.3e}")
    elif len(quasi) == g.n:
        verdict = VERDICT_QUASI
    return verdict, violations


def _off_support_max(g: MixedGraph, omega: np.ndarray) -> float:
    worst = 0.0
    for i in range(1, g.n + 1):
        for j in range(i + 1, g.n + 1):
            if not g.has_bidirected(i, j):
                worst = max(worst, abs(float(omega[i - 1, j - 1])))
    return worst


def _exhaustive_range(args) -> tuple[dict[str, int], list[str]]:
    n, start, stop = args
    counts = {VERDICT_HTC: 0, VERDICT_QUASI: 0, VERDICT_NONE: 0}
    violations: list[str] = []
    for index in range(start, stop):
        g = graph_from_index(n, index)
        verdict, bad = examine_graph(g, f"graph {index}", instance_seed=index)
        counts[verdict] += 1
        violations.extend(bad)
    return counts, violations


def _random_chunk(args) -> tuple[dict[str, int], list[str]]:
    n, seeds = args
    counts = {VERDICT_HTC: 0, VERDICT_QUASI: 0, VERDICT_NONE: 0}
    violations: list[str] = []
    for seed in seeds:
        g = random_mixed_graph(n, np.random.default_rng(seed))
        verdict, bad = examine_graph(g, f"sample seed {seed}", instance_seed=seed)
        counts[verdict] += 1
        violations.extend(bad)
    return counts, violations


def run_census(max_vertices: int, jobs: int = 1, samples: int | None = None,
               seed: int = 0) -> CensusSummary:
    """Exhaustive census on max_vertices vertices, or a random census
    when ``samples`` is given.  Results are independent of ``jobs``."""
    start_time = time.perf_counter()
    jobs = max(1, jobs)
    if samples is None:
        if max_vertices > EXHAUSTIVE_MAX_VERTICES:
            raise CensusCapError(
                f"exhaustive census is capped at "
                f"{EXHAUSTIVE_MAX_VERTICES} vertices; use random sampling")
        total = graph_count(max_vertices)
        chunk = max(1, total // (jobs * 16))
        tasks = [(max_vertices, lo, min(lo + chunk, total))
                 for lo in range(0, total, chunk)]
        results = _run_tasks(_exhaustive_range, tasks, jobs)
        mode = "exhaustive"
    else:
        sample_seeds = [seed * 1_000_003 + i for i in range(samples)]
        chunk = max(1, samples // (jobs * 16))
        tasks = [(max_vertices, sample_seeds[lo:lo + chunk])
                 for lo in range(0, samples, chunk)]
        results = _run_tasks(_random_chunk, tasks, jobs)
        total = samples
        mode = "random"
    counts = {VERDICT_HTC: 0, VERDICT_QUASI: 0, VERDICT_NONE: 0}
    violations: list[str] = []
    for sub_counts, sub_violations in results:
        for key, val in sub_counts.items():
            counts[key] += val
        violations.extend(sub_violations)
    return CensusSummary(
        mode=mode, n=max_vertices, total=total, counts=counts,
        violations=violations, elapsed_s=time.perf_counter() - start_time,
        jobs=jobs, samples=samples, seed=seed if mode == "random" else None)


def _run_tasks(fn, tasks, jobs):
    if jobs == 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with get_context("fork").Pool(jobs) as pool:
        return pool.map(fn, tasks)
