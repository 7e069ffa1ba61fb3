"""Exponential-time ground truth on small instances.

Exact Max-Cut by enumeration, the stability factor gamma*, local stability,
edge distinctness, k-distinctness, the Cheeger constant, and a perturbation
attack used to validate gamma* from both sides.  Everything here is the
oracle the polynomial-time solvers are tested against.

Partitions are enumerated as bitmasks over vertices 1..n-1 with vertex 0
pinned to the +1 side, so each of the 2^(n-1) partitions appears exactly
once and ties resolve to the lowest mask.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, SizeLimitError, ValidationError
from .graph import Cut, Perturbation, WeightedGraph, apply_perturbation

__all__ = [
    "DEFAULT_ENUM_LIMIT",
    "TIE_REL_TOL",
    "StabilityReport",
    "brute_force_max_cut",
    "stability_report",
    "stability_gamma",
    "local_stability_gamma",
    "edge_distinctness_alpha",
    "k_distinctness",
    "cheeger_constant",
    "sample_perturbation_attack",
]

DEFAULT_ENUM_LIMIT = 22
TIE_REL_TOL = 1e-9

_CHUNK_BITS = 14


@dataclass(frozen=True)
class StabilityReport:
    """Exact stability profile of an instance.

    ``gamma_star`` is the infimum over alternative cuts T of the ratio
    w(cut edges only S has) / w(cut edges only T has); the instance is
    gamma-stable exactly for gamma < gamma_star.  ``worst_cut`` is the
    minimizing T (None when gamma_star is infinite).  A non-unique maximum
    reports gamma_star = 1 and alpha_star = k_star = 0, with the tying
    partition as witness.
    """

    max_cut: Cut
    max_value: float
    unique: bool
    gamma_star: float
    gamma_local: float
    alpha_star: float
    k_star: float
    worst_cut: Cut | None

    def to_json(self) -> dict:
        def num(x: float):
            return "inf" if math.isinf(x) else x

        return {
            "max_cut": self.max_cut.signs.tolist(),
            "max_value": self.max_value,
            "unique": self.unique,
            "gamma_star": num(self.gamma_star),
            "gamma_local": num(self.gamma_local),
            "alpha_star": self.alpha_star,
            "k_star": num(self.k_star),
            "worst_cut": None if self.worst_cut is None else self.worst_cut.signs.tolist(),
        }


def _check_size(g: WeightedGraph, limit: int) -> None:
    if g.n < 1:
        raise ValidationError("graph must have at least one vertex")
    if g.n > limit:
        raise SizeLimitError(
            f"n={g.n} exceeds the enumeration limit {limit}; "
            "raise the limit explicitly to force it"
        )


def _sign_chunks(n: int, chunk_bits: int = _CHUNK_BITS):
    """Yield (start_mask, signs) blocks covering all 2^(n-1) partitions."""
    total = 1 << (n - 1)
    step = min(1 << chunk_bits, total)
    shifts = np.arange(max(n - 1, 1), dtype=np.uint32)
    for start in range(0, total, step):
        masks = np.arange(start, min(start + step, total), dtype=np.uint32)
        signs = np.ones((masks.shape[0], n), dtype=np.int8)
        if n > 1:
            bits = (masks[:, None] >> shifts[None, : n - 1]) & 1
            signs[:, 1:] = 1 - 2 * bits.astype(np.int8)
        yield start, signs


def _signs_for_mask(n: int, mask: int) -> np.ndarray:
    signs = np.ones(n, dtype=np.int8)
    for v in range(1, n):
        if (mask >> (v - 1)) & 1:
            signs[v] = -1
    return signs


def _all_cut_values(w: np.ndarray, signs: np.ndarray) -> np.ndarray:
    s = signs.astype(np.float64)
    return (w.sum() - np.einsum("ki,kj,ij->k", s, s, w, optimize=True)) / 4.0


def _max_cut_scan(
    g: WeightedGraph, tie_rel_tol: float
) -> tuple[int, float, int, int | None]:
    """(best mask, best value, tie count, second tying mask or None)."""
    w = g.weights
    best = -np.inf
    for _, signs in _sign_chunks(g.n):
        vals = _all_cut_values(w, signs)
        best = max(best, float(vals.max()))
    tol = tie_rel_tol * max(1.0, abs(best))
    count = 0
    best_mask: int | None = None
    second: int | None = None
    for start, signs in _sign_chunks(g.n):
        vals = _all_cut_values(w, signs)
        hits = np.nonzero(vals >= best - tol)[0]
        count += hits.shape[0]
        for h in hits[:2]:
            mask = start + int(h)
            if best_mask is None:
                best_mask = mask
            elif second is None and mask != best_mask:
                second = mask
    return best_mask, best, count, second


def brute_force_max_cut(
    g: WeightedGraph, limit: int = DEFAULT_ENUM_LIMIT
) -> tuple[Cut, float, bool]:
    """Enumerate every partition; return (max cut, value, uniqueness flag).

    Two values tie when they agree within TIE_REL_TOL relative tolerance;
    the lowest enumeration mask wins ties, so the result is deterministic.
    """
    _check_size(g, limit)
    mask, value, count, _ = _max_cut_scan(g, TIE_REL_TOL)
    return Cut(_signs_for_mask(g.n, mask)), value, count == 1


def local_stability_gamma(g: WeightedGraph, c: Cut) -> float:
    """Min over vertices of (weight to the opposite side) / (weight to own side).

    The graph is gamma-locally stable w.r.t. c exactly for gamma below the
    returned value.  A vertex with no same-side weight contributes +inf.
    """
    if c.n != g.n:
        raise DimensionError(f"cut has {c.n} entries for a {g.n}-vertex graph")
    s = c.as_float()
    opposite = (g.weights * (s[:, None] * s[None, :] < 0)).sum(axis=1)
    own = g.weights.sum(axis=1) - opposite
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(own > 0, opposite / np.where(own > 0, own, 1.0), np.inf)
    return float(ratios.min()) if g.n else math.inf


def stability_report(
    g: WeightedGraph,
    limit: int = DEFAULT_ENUM_LIMIT,
    tie_rel_tol: float = TIE_REL_TOL,
) -> StabilityReport:
    """Full exact stability profile in one enumeration sweep.

    For every alternative partition T the sweep accumulates
      num = w(cut edges of S that T does not cut),
      den = w(cut edges of T that S does not cut),
    from which gamma* = min num/den (den > 0), alpha* = min (num-den)/(num+den),
    and k* = min (num-den)/hamming(S, T).  Partitions with num = den = 0 cut
    the same edge set as S and are skipped for gamma*/alpha* (they are the
    0/0 isolated-vertex flips), but still count for k*.
    """
    _check_size(g, limit)
    best_mask, max_value, count, second = _max_cut_scan(g, tie_rel_tol)
    n, w = g.n, g.weights
    max_cut = Cut(_signs_for_mask(n, best_mask))
    gamma_local = local_stability_gamma(g, max_cut)

    if count != 1:
        witness = None if second is None else Cut(_signs_for_mask(n, second))
        return StabilityReport(
            max_cut=max_cut,
            max_value=max_value,
            unique=False,
            gamma_star=1.0,
            gamma_local=gamma_local,
            alpha_star=0.0,
            k_star=0.0,
            worst_cut=witness,
        )

    iu, ju = np.nonzero(np.triu(g.support))
    wvec = w[iu, ju]
    s = max_cut.signs
    cs = s[iu] != s[ju]
    w_in = wvec * cs          # cut edges of the maximal cut
    w_out = wvec * ~cs        # everything else

    gamma_star = math.inf
    gamma_mask: int | None = None
    alpha_star = math.inf
    k_star = math.inf
    for start, signs in _sign_chunks(n):
        ct = signs[:, iu] != signs[:, ju]
        # Masked dot products so a T cutting exactly the same edge set as S
        # yields num = den = 0.0 with no floating residue.
        num = (~ct).astype(np.float64) @ w_in
        den = ct.astype(np.float64) @ w_out
        dist = (signs != s[None, :]).sum(axis=1)
        dist = np.minimum(dist, n - dist)

        local = np.arange(start, start + signs.shape[0])
        not_s = local != best_mask
        differs = (num > 0) | (den > 0)

        ok = not_s & differs & (den > 0)
        if ok.any():
            ratios = num[ok] / den[ok]
            i = int(np.argmin(ratios))
            if ratios[i] < gamma_star:
                gamma_star = float(ratios[i])
                gamma_mask = int(local[ok][i])

        ok = not_s & differs
        if ok.any():
            a = (num[ok] - den[ok]) / (num[ok] + den[ok])
            alpha_star = min(alpha_star, float(a.min()))

        if not_s.any():
            k = (num[not_s] - den[not_s]) / dist[not_s]
            k_star = min(k_star, float(k.min()))

    worst = None if gamma_mask is None else Cut(_signs_for_mask(n, gamma_mask))
    return StabilityReport(
        max_cut=max_cut,
        max_value=max_value,
        unique=True,
        gamma_star=gamma_star,
        gamma_local=gamma_local,
        alpha_star=alpha_star if math.isfinite(alpha_star) else 1.0,
        k_star=k_star,
        worst_cut=worst,
    )


def stability_gamma(g: WeightedGraph, limit: int = DEFAULT_ENUM_LIMIT) -> StabilityReport:
    """Alias for the full report; see stability_report."""
    return stability_report(g, limit)


def edge_distinctness_alpha(g: WeightedGraph, limit: int = DEFAULT_ENUM_LIMIT) -> float:
    """Largest alpha such that the maximal cut beats every T by more than
    alpha times the weight of their cut-edge symmetric difference.

    Non-unique maximum reports 0."""
    return stability_report(g, limit).alpha_star


def k_distinctness(g: WeightedGraph, limit: int = DEFAULT_ENUM_LIMIT) -> float:
    """Largest k such that the maximal cut beats every T by at least k per
    vertex of partition Hamming distance.  Non-unique maximum reports 0."""
    return stability_report(g, limit).k_star


def cheeger_constant(g: WeightedGraph, limit: int = DEFAULT_ENUM_LIMIT) -> float:
    """Exact min over nonempty U with |U| <= n/2 of |support edges leaving U| / |U|."""
    _check_size(g, limit)
    n = g.n
    if n < 2:
        raise ValidationError("Cheeger constant needs at least two vertices")
    iu, ju = np.nonzero(np.triu(g.support))
    half = n / 2.0
    best = math.inf
    for _, signs in _sign_chunks(n):
        # U = the -1 side, so U never contains vertex 0 and each subset of
        # {1..n-1} appears exactly once; the complement covers the rest.
        sizes = (signs == -1).sum(axis=1)
        boundary = (signs[:, iu] != signs[:, ju]).sum(axis=1).astype(np.float64)
        ok = (sizes >= 1) & (sizes <= half)
        if ok.any():
            best = min(best, float((boundary[ok] / sizes[ok]).min()))
        co = n - sizes
        ok = (co >= 1) & (co <= half)
        if ok.any():
            best = min(best, float((boundary[ok] / co[ok]).min()))
    return best


def sample_perturbation_attack(
    g: WeightedGraph,
    gamma: float,
    trials: int = 16,
    seed: int = 0,
    limit: int = DEFAULT_ENUM_LIMIT,
) -> bool:
    """True iff some gamma-perturbation dethrones the maximal cut.

    Tries the deterministic worst case (multiply the cut edges private to
    the worst alternative by gamma) plus `trials` random factor matrices.
    Succeeds exactly when gamma > gamma* up to tie tolerance; a non-unique
    base maximum counts as dethroned already.
    """
    if gamma < 1:
        raise ValidationError(f"gamma must be >= 1, got {gamma}")
    report = stability_report(g, limit)
    s0 = report.max_cut
    if not report.unique:
        return True

    def dethroned(perturbed: WeightedGraph) -> bool:
        cut, _, unique = brute_force_max_cut(perturbed, limit)
        return cut != s0 or not unique

    if report.worst_cut is not None and math.isfinite(report.gamma_star):
        t = report.worst_cut.signs
        s = s0.signs
        cut_t = t[:, None] != t[None, :]
        cut_s = s[:, None] != s[None, :]
        factors = np.where(cut_t & ~cut_s & g.support, gamma, 1.0)
        attacked = apply_perturbation(g, Perturbation(factors, gamma))
        if dethroned(attacked):
            return True

    rng = np.random.Generator(np.random.Philox(seed))
    n = g.n
    for _ in range(trials):
        up = np.triu(1.0 + (gamma - 1.0) * rng.random((n, n)), 1)
        f = up + up.T
        np.fill_diagonal(f, 1.0)
        attacked = apply_perturbation(g, Perturbation(f, gamma))
        if dethroned(attacked):
            return True
    return False
