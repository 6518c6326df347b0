"""Bounded multi-start Nelder-Mead used by the numeric measures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize


@dataclass(frozen=True)
class OptimizerOptions:
    """Search settings shared by the numeric measures.

    ``starts`` counts every local search, fixed starting points included.
    Thermal factors are searched as log(m - 1) on
    [log(m_floor), log(m_max_factor * max(a, b))], squeezings as log(lam) on
    [log(lambda_min), -log(lambda_min)].
    """

    starts: int = 8
    seed: int = 0
    xatol: float = 1e-9
    max_evals: int = 10_000
    lambda_min: float = 1e-3
    m_max_factor: float = 1e3
    m_floor: float = 1e-13
    widen_factor: float = 1e3


@dataclass
class SearchOutcome:
    x: np.ndarray
    value: float
    converged: bool
    evaluations: int
    restarts_used: int
    widened: bool = False
    history: list = field(default_factory=list)


def local_search(fun, x0, bounds, opts: OptimizerOptions):
    # fatol=inf: terminate on simplex size alone
    return minimize(
        fun,
        np.asarray(x0, dtype=float),
        method="Nelder-Mead",
        bounds=bounds,
        options={
            "xatol": opts.xatol,
            "fatol": math.inf,
            "maxfev": opts.max_evals,
            "maxiter": opts.max_evals,
            "adaptive": len(x0) > 3,
        },
    )


def multistart(
    fun: Callable[[np.ndarray], float],
    starts: Sequence[Sequence[float]],
    bounds: Sequence[tuple],
    opts: OptimizerOptions,
) -> SearchOutcome:
    """Run a local search from each start and keep the best.

    Ties go to the lowest start index, so the reduction does not depend on
    evaluation order.
    """
    best = None
    evaluations = 0
    history = []
    for index, x0 in enumerate(starts):
        x0 = np.clip(np.asarray(x0, dtype=float),
                     [lo if lo is not None else -np.inf for lo, _ in bounds],
                     [hi if hi is not None else np.inf for _, hi in bounds])
        res = local_search(fun, x0, bounds, opts)
        evaluations += int(res.nfev)
        history.append((index, float(res.fun), bool(res.success)))
        if best is None or res.fun < best.fun:
            best = res
    return SearchOutcome(
        x=np.asarray(best.x, dtype=float),
        value=float(best.fun),
        converged=bool(best.success),
        evaluations=evaluations,
        restarts_used=len(starts),
        history=history,
    )


def widened(opts: OptimizerOptions) -> OptimizerOptions:
    return replace(
        opts,
        lambda_min=opts.lambda_min / opts.widen_factor,
        m_max_factor=opts.m_max_factor * opts.widen_factor,
    )
