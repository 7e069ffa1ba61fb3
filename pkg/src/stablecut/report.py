"""Assembly of machine-readable run reports.

A run report records the instance, per-solver outcomes, the exact oracle
section when the instance is small enough, and the sufficient-condition
verdicts.  All numeric fields carry their tolerance context in the
`tolerances` block; a skipped oracle section is explicit.
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import combinatorial, dualsdp, oracle, spectral
from .errors import SizeLimitError, ValidationError
from .graph import Cut, WeightedGraph

SCHEMA_ID = "stablecut-run-report/1"

# Solve/bench attach the exact oracle automatically up to this size.
AUTO_ORACLE_ATTACH = 16


def _num(x):
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self._t0 = time.perf_counter()

    def ms(self) -> float:
        if not self.enabled:
            return 0.0
        return (time.perf_counter() - self._t0) * 1000.0


def solver_entry_greedy(g: WeightedGraph, gamma_hint: float | None, timing: bool) -> dict:
    t = _Timer(timing)
    cut, trace = combinatorial.find_max_cut_greedy(g)
    entry = {
        "cut": cut.signs.tolist(),
        "value": cut_value_of(g, cut),
        "wall_ms": t.ms(),
        "trace": [s.to_json() for s in trace],
    }
    if gamma_hint is not None:
        flags, overall = combinatorial.greedy_applicability(g, gamma_hint)
        entry["applicability"] = {"gamma": gamma_hint, "per_iteration": flags, "overall": overall}
    return entry


def solver_entry_contract(g: WeightedGraph, timing: bool) -> dict:
    t = _Timer(timing)
    result = combinatorial.high_degree_solve(g)
    return {
        "cut": result.cut.signs.tolist(),
        "value": cut_value_of(g, result.cut),
        "wall_ms": t.ms(),
        "gamma": result.gamma,
        "component_count": result.component_count,
        "used_exhaustive": result.used_exhaustive,
        "heuristic": result.heuristic,
    }


def solver_entry_spectral(g: WeightedGraph, timing: bool) -> dict:
    t = _Timer(timing)
    cut = spectral.spectral_partition(g)
    return {
        "cut": cut.signs.tolist(),
        "value": cut_value_of(g, cut),
        "wall_ms": t.ms(),
    }


def solver_entry_dual(
    g: WeightedGraph, tol: float, max_iter: int, seed: int, jitter: bool, timing: bool
) -> dict:
    t = _Timer(timing)
    cut, sol, certified = dualsdp.extended_spectral_solve(
        g, tol=tol, max_iter=max_iter, seed=seed, jitter_retry=jitter
    )
    return {
        "cut": cut.signs.tolist(),
        "value": cut_value_of(g, cut),
        "wall_ms": t.ms(),
        "certified": certified,
        "trace": sol.trace,
        "lower_bound": sol.lower_bound,
        "gap": sol.gap,
        "lambda_min": sol.lambda_min,
        "iterations": sol.iterations,
        "converged": sol.converged,
    }


def solver_entry_oracle(g: WeightedGraph, limit: int, timing: bool) -> dict:
    t = _Timer(timing)
    cut, value, unique = oracle.brute_force_max_cut(g, limit)
    return {
        "cut": cut.signs.tolist(),
        "value": value,
        "wall_ms": t.ms(),
        "unique": unique,
    }


def cut_value_of(g: WeightedGraph, c: Cut) -> float:
    from .graph import cut_value

    return cut_value(g, c)


def oracle_section(g: WeightedGraph, limit: int) -> dict:
    rep = oracle.stability_report(g, limit)
    try:
        h = oracle.cheeger_constant(g, limit)
    except (SizeLimitError, ValidationError):
        h = None
    out = rep.to_json()
    out["cheeger"] = _num(h)
    return out


def conditions_section(g: WeightedGraph, candidate: Cut, oracle_limit: int) -> dict:
    d = spectral.build_diagonal_from_cut(g, candidate)
    cert = spectral.build_certificate(g, candidate)
    basic, refined = spectral.spectral_gamma_requirement(g, cert.eigvec)
    holds, margin = spectral.psd_sufficient_margin(g, candidate)
    verdicts = spectral.family_condition_checks(g, candidate, oracle_limit)
    gamma_local = oracle.local_stability_gamma(g, candidate)
    capped = min(gamma_local, spectral.LOCAL_GAMMA_CAP)
    stable_bound = spectral.stable_gw_bound(max(1.0, capped))
    total = g.total_weight
    gw: dict = {
        "gamma_local": _num(gamma_local),
        "ratio_bound": capped / (capped + 1.0),
        "stable_bound": stable_bound,
        "floor": spectral.GW_FLOOR,
        "best": max(stable_bound, spectral.GW_FLOOR),
        "tolerance_note": "ratio-dependent bound vs unconditional floor; max labeled 'best'",
    }
    if total > 0:
        r = cut_value_of(g, candidate) / total
        if 0.5 <= r <= 1.0:
            gw["achieved_ratio"] = r
            gw["achieved_bound"] = spectral.gw_bound(r)
    return {
        "certificate": {
            "lambda_n": cert.lambda_n,
            "lambda_n_minus_1": cert.lambda_n_minus_1,
            "psd": cert.psd,
            "residual": cert.residual,
            "diag_shift": d.tolist(),
        },
        "spectral_ratio": {"basic": _num(basic), "refined": _num(refined)},
        "psd_margin": {"holds": holds, "margin": margin},
        "families": [v.to_json() for v in verdicts],
        "gw": gw,
    }


def build_run_report(
    g: WeightedGraph,
    solvers: list[str],
    path: str | None,
    generator_meta: dict | None,
    seed: int,
    tol: float,
    max_iter: int,
    oracle_limit: int,
    timing: bool,
    gamma_hint: float | None = None,
) -> dict:
    entries: dict[str, dict] = {}
    for name in solvers:
        if name == "greedy":
            entries[name] = solver_entry_greedy(g, gamma_hint, timing)
        elif name == "contract":
            if g.is_simple():
                entries[name] = solver_entry_contract(g, timing)
            else:
                entries[name] = {"skipped": "weighted input (simple graphs only)"}
        elif name == "spectral":
            entries[name] = solver_entry_spectral(g, timing)
        elif name == "dual":
            entries[name] = solver_entry_dual(g, tol, max_iter, seed, True, timing)
        elif name == "oracle":
            entries[name] = solver_entry_oracle(g, oracle_limit, timing)
        else:
            raise ValidationError(f"unknown solver {name!r}")

    if g.n <= min(AUTO_ORACLE_ATTACH, oracle_limit):
        osec = oracle_section(g, oracle_limit)
        candidate = Cut(np.asarray(osec["max_cut"], dtype=np.int8))
    else:
        osec = {"skipped": f"n > limit ({g.n} > {min(AUTO_ORACLE_ATTACH, oracle_limit)})"}
        candidate = None
        best = -math.inf
        for entry in entries.values():
            if "cut" in entry and entry["value"] > best:
                best = entry["value"]
                candidate = Cut(np.asarray(entry["cut"], dtype=np.int8))

    report = {
        "schema": SCHEMA_ID,
        "instance": {
            "path": path,
            "n": g.n,
            "m": g.edge_count,
            "total_weight": g.total_weight,
            "generator": generator_meta,
        },
        "parameters": {
            "seed": seed,
            "tol": tol,
            "max_iter": max_iter,
            "oracle_limit": oracle_limit,
            "timing": timing,
        },
        "tolerances": {
            "tie_rel_tol": oracle.TIE_REL_TOL,
            "psd_rel_tol": spectral.PSD_REL_TOL,
            "kernel_residual_tol": 1e-10,
            "duality_gap_tol": tol,
            "note": "wall_ms is 0.0 when timing is disabled for reproducibility",
        },
        "solvers": entries,
        "oracle": osec,
    }
    if candidate is not None:
        report["conditions"] = conditions_section(g, candidate, min(AUTO_ORACLE_ATTACH, oracle_limit))
    return report
