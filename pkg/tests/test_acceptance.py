"""Acceptance suite: one test per criterion, each printing a pass or
fail line with the measured quantity.  Run with ``pytest -s
tests/test_acceptance.py`` to see the lines as they happen."""

import time

import numpy as np
import pytest

from semident import (ParamPair, RatFn, canonicalize_constraint,
                      evaluate_constraints, htc_identify, has_subset_cycles,
                      model_ideal_generators, recover_lambda_numeric,
                      recover_lambda_symbolic, recover_omega, sigma_poly,
                      simulate_sigma, trek_rule_sigma)
from semident.census import random_mixed_graph, run_census
from semident.simulate import off_model_sigma, sample_model_instance

from graph_fixtures import (bowed_star5, complete_dag, forced_cycle6,
                            forced_cycle6_extended, iv_graph, verma_graph,
                            gadget_graph)
from test_constraints import gadget_constraint, verma_constraint
from test_recovery import _conditional_quotient


def _criterion(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num:02d}] {name}: {status}  {detail}".rstrip())
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def test_criterion_01_iv_closed_forms():
    start = time.perf_counter()
    g = iv_graph()
    lam = recover_lambda_symbolic(g, htc_identify(g))
    ok = (lam[(1, 2)] == RatFn(sigma_poly(1, 2), sigma_poly(1, 1))
          and lam[(2, 3)] == RatFn(sigma_poly(1, 3), sigma_poly(1, 2)))
    elapsed = time.perf_counter() - start
    _criterion(1, "instrumental-variable closed forms",
               ok and elapsed < 1.0, f"elapsed {elapsed:.3f}s")


def test_criterion_02_verma_generator():
    start = time.perf_counter()
    g = verma_graph()
    cs = model_ideal_generators(g, htc_identify(g))
    ok = (len(cs) == 1
          and cs.generators[0] == canonicalize_constraint(verma_constraint()))
    elapsed = time.perf_counter() - start
    _criterion(2, "verma generator", ok and elapsed < 5.0,
               f"count {len(cs)}, elapsed {elapsed:.3f}s")


def test_criterion_03_gadget_generator():
    start = time.perf_counter()
    g = gadget_graph()
    cs = model_ideal_generators(g, htc_identify(g))
    ok = (len(cs) == 1
          and cs.generators[0] == canonicalize_constraint(gadget_constraint()))
    elapsed = time.perf_counter() - start
    _criterion(3, "gadget generator", ok and elapsed < 5.0,
               f"count {len(cs)}, elapsed {elapsed:.3f}s")


def test_criterion_04_quadratic_roots():
    g = bowed_star5()
    lam = np.zeros((5, 5))
    lam[0, 1], lam[0, 2], lam[0, 3], lam[3, 4] = 0.25, 0.5, 0.4, 0.3
    omega = np.eye(5)
    for j in range(1, 5):
        omega[0, j] = omega[j, 0] = 0.1
    sigma = simulate_sigma(g, ParamPair(lam, omega))
    s = lambda i, j: sigma[i - 1, j - 1]

    def roots_of(fn):
        a = (fn(1.0) + fn(-1.0)) / 2 - fn(0.0)
        b = (fn(1.0) - fn(-1.0)) / 2
        c = fn(0.0)
        disc = b * b - 4 * a * c
        return sorted([(-b - np.sqrt(disc)) / (2 * a),
                       (-b + np.sqrt(disc)) / (2 * a)])

    # printed closed-form coefficients for the pair equations over (3, 4)
    def quad34(l):
        a = s(1, 1) ** 2 * s(3, 4) - s(1, 1) * s(1, 3) * s(1, 4)
        b = 2 * s(1, 2) * s(1, 3) * s(1, 4) - 2 * s(1, 1) * s(1, 2) * s(3, 4)
        c = (s(1, 2) ** 2 * s(3, 4) - s(1, 2) * s(1, 3) * s(2, 4)
             - s(1, 2) * s(1, 4) * s(2, 3) + s(1, 1) * s(2, 3) * s(2, 4))
        return a * l * l + b * l + c

    # analogue over (4, 5): eliminate the coefficients of 1 -> 4 and
    # 4 -> 5 from the equations for the pairs (4,2), (5,2), (5,4)
    def quad45(l):
        u = s(1, 2) - l * s(1, 1)
        v = s(2, 4) - l * s(1, 4)
        w = s(2, 5) - l * s(1, 5)
        return (s(4, 5) * u * v - s(4, 4) * w * u
                - s(1, 5) * v * v + s(1, 4) * w * v)

    r34 = roots_of(quad34)
    r45 = roots_of(quad45)
    ok34 = abs(r34[0] - 0.25) < 1e-9 and abs(r34[1] - 0.45) < 1e-9
    ok45 = abs(r45[0] - 0.25) < 1e-9 and abs(r45[1] - 0.354) < 5e-4
    common = [x for x in r34 if min(abs(x - y) for y in r45) < 1e-6]
    ok_common = len(common) == 1 and abs(common[0] - 0.25) < 1e-9
    _criterion(4, "quadratic roots on the bowed star",
               ok34 and ok45 and ok_common,
               f"roots34 {np.round(r34, 6)}, roots45 {np.round(r45, 6)}")


def test_criterion_05_edge_addition():
    g = forced_cycle6()
    cert = htc_identify(g)
    ok = (cert is not None
          and cert.sets[1] == frozenset({5})
          and cert.sets[3] == frozenset({1})
          and cert.sets[5] == frozenset({3})
          and has_subset_cycles(cert)
          and htc_identify(forced_cycle6_extended()) is None)
    _criterion(5, "forced subset cycle and edge addition", ok)


def test_criterion_06_equivalence_census():
    summary = run_census(4, jobs=4)
    ok = (summary.total == 262_144 and not summary.violations
          and summary.elapsed_s <= 600.0)
    _criterion(6, "exhaustive census on 4 vertices", ok,
               f"counts {summary.counts}, "
               f"violations {len(summary.violations)}, "
               f"elapsed {summary.elapsed_s:.1f}s")


def test_criterion_07_roundtrip_recovery():
    rng = np.random.default_rng(2024)
    done = 0
    cyclic_seen = 0
    worst_lam = worst_omega = worst_off = 0.0
    while done < 500:
        n = int(rng.integers(2, 9))
        g = random_mixed_graph(n, rng)
        cert = htc_identify(g)
        if cert is None:
            continue
        done += 1
        if not g.is_acyclic():
            cyclic_seen += 1
        params, sigma = sample_model_instance(g, int(rng.integers(1 << 30)))
        lam_hat = recover_lambda_numeric(g, cert, sigma)
        omega_hat = recover_omega(sigma, lam_hat)
        lam_err = np.abs(lam_hat - params.lam).max() / \
            max(1.0, np.abs(params.lam).max())
        omega_err = np.abs(omega_hat - params.omega).max() / \
            max(1.0, np.abs(params.omega).max())
        off = max((abs(omega_hat[i - 1, j - 1])
                   for i in range(1, n + 1) for j in range(i + 1, n + 1)
                   if not g.has_bidirected(i, j)), default=0.0)
        worst_lam = max(worst_lam, lam_err)
        worst_omega = max(worst_omega, omega_err)
        worst_off = max(worst_off, off)
    ok = (worst_lam <= 1e-7 and worst_omega <= 1e-7 and worst_off <= 1e-8
          and cyclic_seen > 0)
    _criterion(7, "round-trip recovery on 500 certified graphs", ok,
               f"max lambda err {worst_lam:.2e}, max omega err "
               f"{worst_omega:.2e}, max off-support {worst_off:.2e}, "
               f"cyclic graphs {cyclic_seen}")


def test_criterion_08_trek_rule_oracle():
    rng = np.random.default_rng(4096)
    done = 0
    worst = 0.0
    while done < 100:
        n = int(rng.integers(2, 7))
        g = random_mixed_graph(n, rng, p_directed=0.3, p_bidirected=0.3)
        if not g.is_acyclic():
            continue
        done += 1
        params, sigma = sample_model_instance(g, int(rng.integers(1 << 30)))
        delta = np.abs(trek_rule_sigma(g, params) - sigma).max()
        worst = max(worst, delta / max(1.0, np.abs(sigma).max()))
    _criterion(8, "trek rule matches the matrix formula", worst <= 1e-10,
               f"worst relative delta {worst:.2e} over {done} graphs")


def test_criterion_09_constraint_residuals():
    rng = np.random.default_rng(512)
    graphs_done = 0
    worst_on_model = 0.0
    min_hits = 100
    while graphs_done < 50:
        n = int(rng.integers(3, 7))
        g = random_mixed_graph(n, rng)
        cert = htc_identify(g)
        if cert is None:
            continue
        cs = model_ideal_generators(g, cert)
        if len(cs) == 0:
            continue
        graphs_done += 1
        for k in range(20):
            _, sigma = sample_model_instance(g, int(rng.integers(1 << 30)))
            worst_on_model = max(worst_on_model,
                                 max(evaluate_constraints(cs, sigma)))
        hits = [0] * len(cs)
        for k in range(100):
            sigma = off_model_sigma(n, int(rng.integers(1 << 30)))
            for idx, res in enumerate(evaluate_constraints(cs, sigma)):
                if res > 1e-6:
                    hits[idx] += 1
        min_hits = min(min_hits, min(hits))
    ok = worst_on_model <= 1e-8 and min_hits >= 99
    _criterion(9, "constraint vanishing and generic non-vanishing", ok,
               f"worst on-model residual {worst_on_model:.2e}, "
               f"min off-model hits {min_hits}/100")


def test_criterion_10_complete_dag_identity():
    rng = np.random.default_rng(1234)
    worst = 0.0
    for n in (3, 4, 5):
        g = complete_dag(n)
        cert = htc_identify(g)
        for _ in range(10):
            sigma = off_model_sigma(n, int(rng.integers(1 << 30)))
            lam_hat = recover_lambda_numeric(g, cert, sigma)
            for j in range(2, n + 1):
                for i in range(1, j):
                    conditioning = [p for p in g.parents(j) if p != i]
                    want = _conditional_quotient(sigma, i, j, conditioning)
                    worst = max(worst, abs(lam_hat[i - 1, j - 1] - want))
    _criterion(10, "complete-DAG conditional covariance identity",
               worst <= 1e-8, f"worst deviation {worst:.2e}")


def test_criterion_11_recovery_scaling():
    sizes = (5, 10, 20, 40)
    times = []
    for n in sizes:
        g = complete_dag(n)
        cert = htc_identify(g)
        _, sigma = sample_model_instance(g, 7)
        best = np.inf
        for _ in range(3):
            reps = 20 if n <= 10 else 3
            start = time.perf_counter()
            for _ in range(reps):
                lam_hat = recover_lambda_numeric(g, cert, sigma)
                recover_omega(sigma, lam_hat)
            best = min(best, (time.perf_counter() - start) / reps)
        times.append(best)
    slope = np.polyfit(np.log(sizes), np.log(times), 1)[0]
    _criterion(11, "recovery scales sub-quintically", slope <= 5.0,
               f"log-log slope {slope:.2f}, times "
               f"{[f'{t * 1e3:.2f}ms' for t in times]}")
