"""Command-line front end.

Subcommands: gen {planted|gnp|scale|amplify}, solve, verify, spectrum,
bench.  Exit codes: 0 success, 2 usage/validation, 3 guarantee-not-met,
4 size-limit.  All randomness flows from --seed; pass --no-timing to zero
wall-clock fields so reruns are byte-identical.

The env var STABLECUT_ORACLE_LIMIT overrides the exhaustive-enumeration cap
(default 22).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import combinatorial, dualsdp, generators, oracle, report, spectral
from .errors import DomainError, SizeLimitError, ValidationError
from .graph import WeightedGraph, load_graph, save_graph

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARANTEE = 3
EXIT_SIZE = 4


def _oracle_limit() -> int:
    raw = os.environ.get("STABLECUT_ORACLE_LIMIT")
    if raw is None:
        return oracle.DEFAULT_ENUM_LIMIT
    try:
        return int(raw)
    except ValueError as exc:
        raise ValidationError(f"bad STABLECUT_ORACLE_LIMIT value {raw!r}") from exc


def _dump_json(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)


def _load(path: str) -> WeightedGraph:
    try:
        return load_graph(path)
    except OSError as exc:
        raise ValidationError(f"cannot read graph file {path}: {exc}") from exc


def _sidecar_for(path: str) -> dict | None:
    stem, _ = os.path.splitext(path)
    candidate = stem + ".json"
    if os.path.exists(candidate):
        try:
            with open(candidate, "r", encoding="ascii") as fh:
                return json.load(fh)
        except (OSError, json.JSONDecodeError):
            return None
    return None


def _write_instance(outdir: str, stem: str, g: WeightedGraph, sidecar: dict) -> str:
    os.makedirs(outdir, exist_ok=True)
    gpath = os.path.join(outdir, stem + ".graph")
    save_graph(g, gpath)
    with open(os.path.join(outdir, stem + ".json"), "w", encoding="ascii") as fh:
        fh.write(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return gpath


# --- gen -----------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    if args.model == "planted":
        dist = generators.WeightDistribution.parse(args.dist)
        inst = generators.gen_planted(args.n, dist, args.gamma, args.seed)
        stem = f"planted_n{args.n}_g{args.gamma!r}_s{args.seed}"
        path = _write_instance(args.out, stem, inst.graph, inst.sidecar())
    elif args.model == "gnp":
        g = generators.gen_gnp_simple(args.n, args.p, args.seed)
        stem = f"gnp_n{args.n}_p{args.p!r}_s{args.seed}"
        sidecar = {"model": "gnp", "seed": args.seed, "params": {"n": args.n, "p": args.p}}
        path = _write_instance(args.out, stem, g, sidecar)
    elif args.model == "scale":
        base = _load(args.input)
        limit = _oracle_limit()
        scaled = generators.stabilize_by_scaling(base, args.gamma, seed=args.seed, limit=limit)
        verified = oracle.stability_report(scaled, limit)
        src = os.path.splitext(os.path.basename(args.input))[0]
        stem = f"{src}_scaled_g{args.gamma!r}"
        sidecar = {
            "model": "scale",
            "seed": args.seed,
            "params": {"input": os.path.basename(args.input), "gamma_target": args.gamma},
            "verified_gamma_star": "inf" if math.isinf(verified.gamma_star) else verified.gamma_star,
        }
        path = _write_instance(args.out, stem, scaled, sidecar)
    elif args.model == "amplify":
        base = _load(args.input)
        amplified = generators.cross_product_amplify(base, args.tau)
        src = os.path.splitext(os.path.basename(args.input))[0]
        stem = f"{src}_amplified_t{args.tau!r}"
        sidecar = {
            "model": "amplify",
            "params": {"input": os.path.basename(args.input), "tau": args.tau},
        }
        path = _write_instance(args.out, stem, amplified, sidecar)
    else:  # pragma: no cover - argparse restricts choices
        raise ValidationError(f"unknown model {args.model!r}")
    print(path)
    return EXIT_OK


# --- solve ---------------------------------------------------------------

_SOLVERS = ("greedy", "contract", "spectral", "dual", "oracle")


def cmd_solve(args: argparse.Namespace) -> int:
    g = _load(args.graph)
    limit = _oracle_limit()
    solvers = list(_SOLVERS) if args.solver == "all" else [args.solver]
    if "oracle" in solvers and args.solver == "all" and g.n > limit:
        solvers.remove("oracle")

    iter_log = None
    if args.iter_log:
        iter_log = open(args.iter_log, "w", encoding="ascii")
        iter_log.write("iter,trace,lambda_min,gap\n")

    try:
        rep = report.build_run_report(
            g,
            solvers=solvers,
            path=args.graph,
            generator_meta=_sidecar_for(args.graph),
            seed=args.seed,
            tol=args.tol,
            max_iter=args.max_iter,
            oracle_limit=limit,
            timing=not args.no_timing,
            gamma_hint=args.gamma,
        )
        if iter_log is not None and "dual" in solvers:
            # Rerun the dual solve with the logger; the solver is
            # deterministic so the trajectory matches the reported one.
            dualsdp.solve_min_trace(
                g,
                tol=args.tol,
                max_iter=args.max_iter,
                seed=args.seed,
                on_iteration=lambda i, tr, lam, gap: iter_log.write(
                    f"{i},{tr!r},{lam!r},{gap!r}\n"
                ),
            )
    finally:
        if iter_log is not None:
            iter_log.close()

    _dump_json(rep, args.output)
    if args.require_certified:
        dual_entry = rep["solvers"].get("dual")
        if not dual_entry or not dual_entry.get("certified"):
            print("guarantee not met: dual certificate absent", file=sys.stderr)
            return EXIT_GUARANTEE
    return EXIT_OK


# --- verify --------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    g = _load(args.graph)
    limit = _oracle_limit()
    out = {
        "schema": "stablecut-verify-report/1",
        "instance": {
            "path": args.graph,
            "n": g.n,
            "m": g.edge_count,
            "total_weight": g.total_weight,
        },
        "tolerances": {"tie_rel_tol": oracle.TIE_REL_TOL},
        "oracle": report.oracle_section(g, limit),
    }
    _dump_json(out, args.output)
    return EXIT_OK


# --- spectrum ------------------------------------------------------------


def cmd_spectrum(args: argparse.Namespace) -> int:
    g = _load(args.graph)
    limit = _oracle_limit()
    vals = np.linalg.eigvalsh(g.weights)
    if g.n <= min(report.AUTO_ORACLE_ATTACH, limit):
        candidate = oracle.brute_force_max_cut(g, limit)[0]
    else:
        candidate = spectral.spectral_partition(g)
    out = {
        "schema": "stablecut-spectrum-report/1",
        "instance": {
            "path": args.graph,
            "n": g.n,
            "m": g.edge_count,
            "total_weight": g.total_weight,
        },
        "eigenvalues": vals[::-1].tolist(),
        "tolerances": {
            "psd_rel_tol": spectral.PSD_REL_TOL,
            "tie_rel_tol": oracle.TIE_REL_TOL,
        },
        "conditions": report.conditions_section(
            g, candidate, min(report.AUTO_ORACLE_ATTACH, limit)
        ),
    }
    _dump_json(out, args.output)
    return EXIT_OK


# --- bench ---------------------------------------------------------------


def _instance_seed(base: int, n: int, gamma: float, trial: int) -> int:
    gbits = int(np.float64(gamma).view(np.uint64))
    ss = np.random.SeedSequence([int(base), int(n), gbits, int(trial)])
    return int(ss.generate_state(1, np.uint64)[0])


def _bench_cell(
    n: int,
    gamma: float,
    dist: generators.WeightDistribution,
    trials: int,
    solver: str,
    base_seed: int,
    tol: float,
    max_iter: int,
    limit: int,
    timing: bool,
) -> tuple[float, float, float]:
    recovered = 0
    certified = 0
    total_ms = 0.0
    for trial in range(trials):
        seed_i = _instance_seed(base_seed, n, gamma, trial)
        inst = generators.gen_planted(n, dist, gamma, seed_i)
        g = inst.graph
        t0 = time.perf_counter()
        if solver == "dual":
            cut, _, cert = dualsdp.extended_spectral_solve(
                g, tol=tol, max_iter=max_iter, seed=seed_i
            )
        elif solver == "greedy":
            cut, _ = combinatorial.find_max_cut_greedy(g)
            _, cert = combinatorial.greedy_applicability(g, gamma)
        elif solver == "spectral":
            cut = spectral.spectral_partition(g)
            cert = False
        elif solver == "oracle":
            cut, _, cert = oracle.brute_force_max_cut(g, limit)
        else:  # pragma: no cover - argparse restricts choices
            raise ValidationError(f"unknown bench solver {solver!r}")
        if timing:
            total_ms += (time.perf_counter() - t0) * 1000.0
        recovered += cut == inst.planted
        certified += bool(cert)
    return recovered / trials, certified / trials, total_ms / trials


def cmd_bench(args: argparse.Namespace) -> int:
    dist = generators.WeightDistribution.parse(args.dist)
    limit = _oracle_limit()
    ns = sorted({int(x) for x in args.n.split(",")})
    gammas = sorted({float(x) for x in args.gamma.split(",")})
    solvers = sorted({s for s in args.solver.split(",")})
    for s in solvers:
        if s not in ("dual", "greedy", "spectral", "oracle"):
            raise ValidationError(f"unknown bench solver {s!r}")

    rows = []
    for n in ns:
        for gamma in gammas:
            for solver in solvers:
                rec, cert, ms = _bench_cell(
                    n,
                    gamma,
                    dist,
                    args.trials,
                    solver,
                    args.seed,
                    args.tol,
                    args.max_iter,
                    limit,
                    not args.no_timing,
                )
                rows.append((n, gamma, dist.spec(), args.trials, solver, rec, cert, ms))

    rows.sort(key=lambda r: (r[0], r[1], r[4]))
    lines = ["n,gamma,dist,trials,solver,recovery_rate,certified_rate,mean_ms"]
    for n, gamma, dspec, trials, solver, rec, cert, ms in rows:
        lines.append(
            f"{n},{gamma!r},{dspec},{trials},{solver},{rec:.6f},{cert:.6f},{ms:.3f}"
        )
    text = "\n".join(lines) + "\n"
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    return EXIT_OK


# --- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablecut",
        description="Generate, certify, and solve gamma-stable Max-Cut instances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate instance files")
    gsub = gen.add_subparsers(dest="model", required=True)

    gp = gsub.add_parser("planted", help="planted-cut complete weighted graph")
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--gamma", type=float, required=True)
    gp.add_argument("--dist", default="uniform:0.5:1.5")
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("-o", "--out", default=".")
    gp.set_defaults(func=cmd_gen)

    gg = gsub.add_parser("gnp", help="unit-weight binomial random graph")
    gg.add_argument("--n", type=int, required=True)
    gg.add_argument("--p", type=float, required=True)
    gg.add_argument("--seed", type=int, default=0)
    gg.add_argument("-o", "--out", default=".")
    gg.set_defaults(func=cmd_gen)

    gs = gsub.add_parser("scale", help="rescale max-cut edges to a target stability")
    gs.add_argument("--input", required=True)
    gs.add_argument("--gamma", type=float, required=True)
    gs.add_argument("--seed", type=int, default=0)
    gs.add_argument("-o", "--out", default=".")
    gs.set_defaults(func=cmd_gen)

    ga = gsub.add_parser("amplify", help="double the graph to raise local stability")
    ga.add_argument("--input", required=True)
    ga.add_argument("--tau", type=float, default=1.0)
    ga.add_argument("-o", "--out", default=".")
    ga.set_defaults(func=cmd_gen)

    sv = sub.add_parser("solve", help="run solvers and emit a JSON run report")
    sv.add_argument("graph")
    sv.add_argument("--solver", default="all", choices=list(_SOLVERS) + ["all"])
    sv.add_argument("--seed", type=int, default=0)
    sv.add_argument("--tol", type=float, default=dualsdp.DEFAULT_TOL)
    sv.add_argument("--max-iter", type=int, default=dualsdp.DEFAULT_MAX_ITER)
    sv.add_argument("--gamma", type=float, default=None, help="stability hint for greedy applicability")
    sv.add_argument("--require-certified", action="store_true")
    sv.add_argument("--no-timing", action="store_true")
    sv.add_argument("--iter-log", default=None, help="stream dual iterations to CSV")
    sv.add_argument("-o", "--output", default=None)
    sv.set_defaults(func=cmd_solve)

    vf = sub.add_parser("verify", help="exact stability report (oracle only)")
    vf.add_argument("graph")
    vf.add_argument("-o", "--output", default=None)
    vf.set_defaults(func=cmd_verify)

    sp = sub.add_parser("spectrum", help="eigenvalues plus condition checks")
    sp.add_argument("graph")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_spectrum)

    bn = sub.add_parser("bench", help="seeded sweep over planted instances")
    bn.add_argument("--n", required=True, help="comma-separated vertex counts")
    bn.add_argument("--gamma", required=True, help="comma-separated gamma values")
    bn.add_argument("--trials", type=int, default=50)
    bn.add_argument("--dist", default="uniform:0.5:1.5")
    bn.add_argument("--seed", type=int, default=0)
    bn.add_argument("--solver", default="dual", help="comma-separated solvers")
    bn.add_argument("--tol", type=float, default=dualsdp.DEFAULT_TOL)
    bn.add_argument("--max-iter", type=int, default=dualsdp.DEFAULT_MAX_ITER)
    bn.add_argument("--no-timing", action="store_true")
    bn.add_argument("-o", "--out", default=None)
    bn.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
