"""Command line front end.

Exit codes are stable: 0 ok, 2 parse or file error, 3 graph not
identifiable, 4 degenerate covariance input, 5 resource cap exceeded.
Every report embeds the tool version, the seed, and a content hash of
each input file, so runs are reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import TermCapError
from .census import CensusCapError, run_census
from .constraints import evaluate_constraints, model_ideal_generators
from .graphs import GraphParseError, parse_graph
from .identify import (edge_count_bound, has_subset_cycles, htc_identify,
                       quasi_linear_vertices)
from .io import read_covariance_csv, sha256_path, write_covariance_csv
from .recovery import (DegenerateSigmaError, recover_lambda_numeric,
                       recover_omega)
from .simulate import sample_model_instance

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_IDENTIFIABLE = 3
EXIT_DEGENERATE = 4
EXIT_RESOURCE = 5

VERIFY_THRESHOLD = 1e-6


class NotIdentifiableError(RuntimeError):
    pass


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for any randomized step (default 0)")
    sub.add_argument("--output-dir", type=Path, default=Path("."),
                     help="directory for generated files (default .)")
    sub.add_argument("--format", choices=("text", "json"), default="text",
                     help="report format on stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semident",
        description=("identifiability, parameter recovery, and covariance "
                     "constraints for linear Gaussian SEMs on mixed graphs"))
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("identify", help="decide identifiability of a graph")
    p.add_argument("graph", type=Path)
    _add_common(p)
    p.set_defaults(func=cmd_identify)

    p = subs.add_parser("recover", help="recover parameters from a covariance")
    p.add_argument("graph", type=Path)
    p.add_argument("sigma", type=Path)
    _add_common(p)
    p.set_defaults(func=cmd_recover)

    p = subs.add_parser("simulate", help="sample a model instance")
    p.add_argument("graph", type=Path)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = subs.add_parser("constraints", help="emit model ideal generators")
    p.add_argument("graph", type=Path)
    _add_common(p)
    p.set_defaults(func=cmd_constraints)

    p = subs.add_parser("verify", help="evaluate constraints at a covariance")
    p.add_argument("graph", type=Path)
    p.add_argument("sigma", type=Path)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("census", help="property census over labeled graphs")
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--samples", type=int, default=None,
                   help="random mode with this many sampled graphs")
    _add_common(p)
    p.set_defaults(func=cmd_census)
    return parser


def _load_graph(path: Path):
    return parse_graph(Path(path).read_text())


def _report(args, command: str, inputs: dict[str, Path], results: dict,
            started: float) -> dict:
    return {
        "command": command,
        "version": __version__,
        "seed": args.seed,
        "inputs": {name: {"path": str(p), "sha256": sha256_path(p)}
                   for name, p in inputs.items()},
        "results": results,
        "wall_time_s": round(time.perf_counter() - started, 6),
    }


def _emit(args, report: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        for line in text_lines:
            print(line)


def cmd_identify(args) -> int:
    started = time.perf_counter()
    g = _load_graph(args.graph)
    cert = htc_identify(g)
    quasi = quasi_linear_vertices(g)
    bound_ok = edge_count_bound(g)
    if cert is not None:
        verdict = "htc-identifiable"
    elif len(quasi) == g.n:
        verdict = "quasi-linear-only"
    else:
        verdict = "not-identifiable-by-htc"
    results: dict = {
        "verdict": verdict,
        "edge_count_bound_ok": bound_ok,
        "quasi_linear_vertices": sorted(quasi),
    }
    lines = [f"verdict: {verdict}", f"edge_count_bound_ok: {bound_ok}"]
    if cert is not None:
        results["certificate"] = cert.to_json_dict()
        results["subset_cycles"] = has_subset_cycles(cert)
        lines.append(f"order: {' '.join(map(str, cert.ordering))}")
        for v in g.vertices():
            members = " ".join(map(str, sorted(cert.sets[v]))) or "(empty)"
            lines.append(f"S[{v}]: {members}")
        lines.append(f"subset_cycles: {results['subset_cycles']}")
    report = _report(args, "identify", {"graph": args.graph}, results, started)
    _emit(args, report, lines)
    return EXIT_OK


def cmd_recover(args) -> int:
    started = time.perf_counter()
    g = _load_graph(args.graph)
    cert = htc_identify(g)
    if cert is None:
        raise NotIdentifiableError(f"{args.graph}: graph is not identifiable")
    sigma = read_covariance_csv(args.sigma)
    if sigma.shape != (g.n, g.n):
        raise ValueError(f"{args.sigma}: expected a {g.n}x{g.n} matrix")
    try:
        np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise DegenerateSigmaError(0) from None
    lam = recover_lambda_numeric(g, cert, sigma)
    omega = recover_omega(sigma, lam)
    off_support = [
        [i, j, float(omega[i - 1, j - 1])]
        for i in range(1, g.n + 1) for j in range(i + 1, g.n + 1)
        if not g.has_bidirected(i, j)
    ]
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    lam_path = out / "lambda.csv"
    omega_path = out / "omega.csv"
    write_covariance_csv(lam_path, lam)
    write_covariance_csv(omega_path, omega)
    results = {
        "lambda": {f"{i}->{j}": float(lam[i - 1, j - 1])
                   for i, j in sorted(g.directed)},
        "omega": {f"{i}<->{j}": float(omega[i - 1, j - 1])
                  for i, j in sorted(g.bidirected)},
        "omega_diagonal": [float(omega[i, i]) for i in range(g.n)],
        "off_support_residuals": off_support,
        "max_off_support_abs": max((abs(r[2]) for r in off_support), default=0.0),
        "files": {"lambda": str(lam_path), "omega": str(omega_path)},
    }
    report = _report(args, "recover",
                     {"graph": args.graph, "sigma": args.sigma},
                     results, started)
    (out / "recover_report.json").write_text(json.dumps(report, indent=2) + "\n")
    lines = [f"wrote {lam_path} and {omega_path}",
             f"max off-support residual: {results['max_off_support_abs']:.3e}"]
    _emit(args, report, lines)
    return EXIT_OK


def cmd_simulate(args) -> int:
    started = time.perf_counter()
    g = _load_graph(args.graph)
    params, sigma = sample_model_instance(g, args.seed)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    sigma_path = out / "sigma.csv"
    params_path = out / "params.json"
    write_covariance_csv(sigma_path, sigma)
    params_path.write_text(json.dumps({
        "seed": args.seed,
        "lambda": [[float(x) for x in row] for row in params.lam],
        "omega": [[float(x) for x in row] for row in params.omega],
    }, indent=2) + "\n")
    results = {"files": {"sigma": str(sigma_path), "params": str(params_path)}}
    report = _report(args, "simulate", {"graph": args.graph}, results, started)
    _emit(args, report, [f"wrote {sigma_path} and {params_path}"])
    return EXIT_OK


def _constraints_for(args):
    g = _load_graph(args.graph)
    cert = htc_identify(g)
    if cert is None:
        raise NotIdentifiableError(f"{args.graph}: graph is not identifiable")
    return g, model_ideal_generators(g, cert)


def cmd_constraints(args) -> int:
    started = time.perf_counter()
    g, cs = _constraints_for(args)
    expected = g.n * (g.n - 1) // 2 - len(g.directed) - len(g.bidirected)
    results = {
        "count": len(cs),
        "expected_count": expected,
        "generators": [
            {"pair": list(pair), "polynomial": gen.render(),
             "terms": gen.to_json(), "denominator": den.render()}
            for pair, gen, den in zip(cs.pairs, cs.generators, cs.denominators)
        ],
    }
    lines = [f"generators: {len(cs)} (expected {expected})"]
    for pair, gen in zip(cs.pairs, cs.generators):
        lines.append(f"pair ({pair[0]},{pair[1]}): {gen.render()}")
    report = _report(args, "constraints", {"graph": args.graph}, results, started)
    _emit(args, report, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    started = time.perf_counter()
    g, cs = _constraints_for(args)
    sigma = read_covariance_csv(args.sigma)
    residuals = evaluate_constraints(cs, sigma)
    rows = []
    lines = []
    for idx, (pair, residual) in enumerate(zip(cs.pairs, residuals)):
        verdict = "ok" if residual <= VERIFY_THRESHOLD else "violated"
        rows.append({"generator_index": idx, "pair": list(pair),
                     "residual": residual, "verdict": verdict})
        lines.append(f"generator {idx} pair ({pair[0]},{pair[1]}): "
                     f"residual {residual:.3e} {verdict}")
    if not rows:
        lines.append("no generators: the model imposes no equality constraints")
    results = {"threshold": VERIFY_THRESHOLD, "table": rows,
               "all_ok": all(r["verdict"] == "ok" for r in rows)}
    report = _report(args, "verify",
                     {"graph": args.graph, "sigma": args.sigma},
                     results, started)
    _emit(args, report, lines)
    return EXIT_OK


def cmd_census(args) -> int:
    started = time.perf_counter()
    summary = run_census(args.max_vertices, jobs=args.jobs,
                         samples=args.samples, seed=args.seed)
    results = summary.to_json_dict()
    lines = [
        f"mode: {summary.mode} on {summary.n} vertices",
        f"total graphs: {summary.total}",
    ]
    lines += [f"{verdict}: {count}"
              for verdict, count in sorted(summary.counts.items())]
    lines.append(f"violations: {len(summary.violations)}")
    lines.extend(summary.violations[:20])
    lines.append(f"summary hash: {summary.summary_hash}")
    report = _report(args, "census", {}, results, started)
    _emit(args, report, lines)
    return EXIT_OK if not summary.violations else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotIdentifiableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_IDENTIFIABLE
    except DegenerateSigmaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (TermCapError, CensusCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
