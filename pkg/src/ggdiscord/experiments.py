"""Row generators for the figure reproductions and single-state reports.

Everything here returns plain lists of row dicts (or numpy arrays) so the
CLI and the test-suite share one code path.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InternalConsistencyError
from .families import discord_low_family, discord_up_family, match_family
from .gaussian_core import (
    StandardForm,
    mean_energy_per_mode,
    purity,
    symplectic_invariants,
    to_standard_form,
)
from .measures import (
    ggd_alternative,
    ggd_numeric,
    ggd_sts_closed,
    ggd_sts_closed_array,
    gqc_invariant,
    gqc_standard_form,
)
from .optimize import OptimizerOptions
from .sampling import SamplerConfig, sample_states

BISECT_RTOL = 1e-10
GOLDEN_TOL = 1e-8
B_MAX = 1e8
EPS_MAX = 1e4
EPS_SCAN = 241


# -- single state --------------------------------------------------------------


def state_report(sigma, both: bool = False, opts: Optional[OptimizerOptions] = None) -> dict:
    sf = to_standard_form(sigma)
    inv = symplectic_invariants(sf)
    report = {
        "a": sf.a, "b": sf.b, "c": sf.c, "d": sf.d,
        "detAlpha": inv.detAlpha, "detBeta": inv.detBeta,
        "detGamma": inv.detGamma, "detSigma": inv.detSigma,
        "nuMinus": inv.nuMinus, "nuPlus": inv.nuPlus,
        "purity": purity(sf),
        "energy_A": mean_energy_per_mode(sf)[0], "energy_B": mean_energy_per_mode(sf)[1],
    }
    converged = True
    if sf.is_squeezed_thermal():
        value, seed = ggd_sts_closed(sf)
        report["ggd"] = value
        report["ggd_method"] = "closed"
    if both or not sf.is_squeezed_thermal():
        res = ggd_numeric(sf, opts)
        converged = res.converged
        report["ggd_numeric"] = res.value
        if "ggd" not in report:
            report["ggd"] = res.value
            report["ggd_method"] = "numeric"
            seed = res.argmin
        report["ggd_converged"] = res.converged
    report["seed_m"], report["seed_lambda"], report["seed_theta"] = seed.m, seed.lam, seed.theta
    report["gqc"] = gqc_standard_form(sf)
    report["gqc_invariant"] = gqc_invariant(inv)
    report["converged"] = converged
    return report


# -- Fig. 1: GGD vs product-state variant --------------------------------------


def _fig1_row(args):
    sf, opts = args
    g = ggd_numeric(sf, opts)
    alt = ggd_alternative(sf, opts, warm_start=g)
    return {
        "a": sf.a, "b": sf.b, "c": sf.c, "d": sf.d,
        "ggd": g.value, "ggd_alternative": alt.value,
        "converged": g.converged and alt.converged,
    }


def fig1_rows(n: int, cfg: SamplerConfig, opts: Optional[OptimizerOptions] = None,
              jobs: int = 1, states: Optional[Sequence[StandardForm]] = None) -> list:
    opts = opts or OptimizerOptions()
    if states is None:
        states = sample_states(cfg, n, jobs)
    work = [(sf, opts) for sf in states]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_fig1_row, work, chunksize=16))
    else:
        rows = [_fig1_row(w) for w in work]
    for row in rows:
        if row["ggd_alternative"] > row["ggd"] + 1e-8:
            raise InternalConsistencyError(f"product-state variant above GGD: {row}")
    return rows


# -- Fig. 2 lower boundary -----------------------------------------------------


def lower_curve(cap: float, grid: int = 200) -> dict:
    """Low family with a = cap, eps on a uniform grid over [0, cap - 1]."""
    eps = np.linspace(0.0, cap - 1.0, grid)
    b = 1.0 + eps
    c = np.sqrt((cap + 1.0) * eps)
    return {
        "epsilon": eps,
        "discord": np.asarray(discord_low_family(cap, eps)),
        "ggd": ggd_sts_closed_array(cap, b, c),
    }


def fig2_lower_rows(k_list: Sequence[int], grid: int = 200) -> list:
    rows = []
    for k in sorted(k_list):
        cap = 2.0 ** k
        curve = lower_curve(cap, grid)
        for eps, dis, g in zip(curve["epsilon"], curve["discord"], curve["ggd"]):
            rows.append({"N": cap, "a": cap, "epsilon": eps, "discord": dis, "ggd": g})
    return rows


def lower_bound_at(discord, cap: float):
    """GGD of the low-family state with a = cap and the given discord.

    Returns nan where the discord exceeds the family's range.
    """
    target = np.atleast_1d(np.asarray(discord, dtype=float))
    lo = np.zeros_like(target)
    hi = np.full_like(target, cap - 1.0)
    d_max = discord_low_family(cap, cap - 1.0)
    while np.any(hi - lo > BISECT_RTOL * np.maximum(1.0, hi)):
        mid = 0.5 * (lo + hi)
        below = np.asarray(discord_low_family(cap, mid)) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    eps = 0.5 * (lo + hi)
    g = ggd_sts_closed_array(cap, 1.0 + eps, np.sqrt((cap + 1.0) * eps))
    return np.where(target <= d_max + 1e-12, g, np.nan)


# -- Fig. 2 upper boundary -----------------------------------------------------


def check_up_family_monotone(eps_values=(0.0, 0.1, 1.0, 10.0, 100.0), points: int = 2001):
    """Discord of the up family must increase with b at fixed epsilon."""
    for eps in eps_values:
        b = 1.0 + eps + np.geomspace(1e-9, 1e6, points)
        d = np.asarray(discord_up_family(b, eps))
        if not np.all(np.diff(d) > 0):
            raise InternalConsistencyError(f"up-family discord not monotone in b at eps={eps}")


def solve_up_b(target, eps, b_max: float = B_MAX):
    """b with discord_up_family(b, eps) = target (vectorised bisection in log b).

    Returns (b, reachable).
    """
    target, eps = np.broadcast_arrays(np.asarray(target, float), np.asarray(eps, float))
    # eps beyond b_max - 1 admits no b; clamp it and flag the point unreachable
    fits = eps <= b_max - 1.0
    eps = np.minimum(eps, b_max - 1.0)
    lo = 1.0 + eps
    hi = np.full(target.shape, b_max)
    reachable = fits & (np.asarray(discord_up_family(hi, eps)) >= target)
    while np.any(hi - lo > BISECT_RTOL * hi):
        mid = np.sqrt(lo * hi)
        below = np.asarray(discord_up_family(mid, eps)) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi), reachable


def _contour_ggd(target, eps, b_max):
    b, ok = solve_up_b(target, eps, b_max)
    a = b - eps
    c = np.sqrt(np.maximum((b + 1.0) * (a - 1.0), 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        g = ggd_sts_closed_array(a, b, c)
    return np.where(ok, g, -np.inf), b, ok


@dataclass
class UpperCurve:
    target: np.ndarray
    b: np.ndarray
    epsilon: np.ndarray
    ggd_max: np.ndarray
    reachable: np.ndarray


def upper_curve(targets, b_max: float = B_MAX, eps_max: float = EPS_MAX,
                scan: int = EPS_SCAN) -> UpperCurve:
    """Maximise closed-form GGD along each constant-discord contour of the up family.

    Coarse scan over eps in {0} U geomspace(1e-8, eps_max), then golden-section
    refinement in eps between the neighbours of the best scan point.
    """
    check_up_family_monotone()
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    if np.any(targets <= 0):
        raise ValueError("target discord values must be positive")
    grid = np.concatenate([[0.0], np.geomspace(1e-8, eps_max, scan - 1)])
    tt = np.repeat(targets[:, None], grid.size, axis=1)
    ee = np.broadcast_to(grid, tt.shape)
    g, _, _ = _contour_ggd(tt, ee, b_max)
    g = np.where(np.isfinite(g), g, -np.inf)
    best = np.argmax(g, axis=1)
    lo = grid[np.maximum(best - 1, 0)]
    hi = grid[np.minimum(best + 1, grid.size - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1 = _contour_ggd(targets, x1, b_max)[0]
    f2 = _contour_ggd(targets, x2, b_max)[0]
    while np.any(hi - lo > GOLDEN_TOL):
        left = f1 > f2
        hi = np.where(left, x2, hi)
        lo = np.where(left, lo, x1)
        x_new = np.where(left, hi - invphi * (hi - lo), lo + invphi * (hi - lo))
        f_new = _contour_ggd(targets, x_new, b_max)[0]
        x1, x2 = np.where(left, x_new, x2), np.where(left, x1, x_new)
        f1, f2 = np.where(left, f_new, f2), np.where(left, f1, f_new)
    eps_ref = 0.5 * (lo + hi)
    g_ref, b_ref, ok = _contour_ggd(targets, eps_ref, b_max)
    # keep the scan optimum when refinement does not improve on it
    g_scan = g[np.arange(targets.size), best]
    use_scan = g_scan > g_ref
    eps_opt = np.where(use_scan, grid[best], eps_ref)
    g_opt, b_opt, ok = _contour_ggd(targets, eps_opt, b_max)
    g_opt = np.where(ok, g_opt, np.nan)
    return UpperCurve(targets, b_opt, eps_opt, g_opt, ok)


def upper_bound_at(discord, b_max: float = B_MAX):
    return upper_curve(discord, b_max).ggd_max


def default_targets() -> np.ndarray:
    return np.round(np.arange(1, 321) * 0.025, 6)


def fig2_upper_rows(targets=None, b_max: float = B_MAX, eps_max: float = EPS_MAX) -> list:
    targets = default_targets() if targets is None else np.asarray(targets, float)
    curve = upper_curve(targets, b_max, eps_max)
    return [
        {"target_discord": t, "b": b, "epsilon": e, "ggd_max": g, "reachable": bool(ok)}
        for t, b, e, g, ok in zip(curve.target, curve.b, curve.epsilon, curve.ggd_max,
                                  curve.reachable)
    ]


# -- Fig. 2 cloud ----------------------------------------------------------------


def cloud_rows(states) -> list:
    rows = []
    for st in states:
        value = ggd_sts_closed(StandardForm(st.a, st.b, st.c, st.d))[0]
        match = match_family(st.a, st.b, st.c)
        discord = family = None
        if match is not None:
            family, param, eps = match
            discord = (discord_low_family(param, eps) if family == "low"
                       else discord_up_family(param, eps))
        rows.append({"a": st.a, "b": st.b, "c": st.c, "ggd": value,
                     "discord_if_on_family": discord, "family": family})
    return rows


def fig2_cloud_rows(n: int, cap: float, seed: int, boundary_fraction: float = 0.0,
                    jobs: int = 1) -> list:
    cfg = SamplerConfig(seed=seed, energy_cap=cap, family="sts",
                        boundary_fraction=boundary_fraction)
    return cloud_rows(sample_states(cfg, n, jobs))
