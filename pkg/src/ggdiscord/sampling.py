"""Seeded random two-mode Gaussian states.

Generators are numpy ``PCG64`` streams. The stream for task ``i`` of a run
with seed ``s`` is ``PCG64(SeedSequence(s, spawn_key=(i,)))``; a run of n
draws is split into tasks of ``TASK_SIZE`` consecutive draws, so the draw
sequence depends only on (seed, n) and never on how tasks are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .families import StsFamilyPoint
from .gaussian_core import PHYSICAL_TOL, StandardForm, validate_physical

RNG_NAME = "numpy.random.PCG64 via SeedSequence(seed, spawn_key=(task,))"
TASK_SIZE = 10_000
MAX_CONSECUTIVE_REJECTIONS = 1000
C_MAX_TOL = 1e-10


class SamplerConfigError(ValueError):
    """The sampler configuration cannot produce physical states."""


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    energy_cap: Optional[float] = None
    a_range: tuple = (1.0, 50.0)
    b_range: tuple = (1.0, 50.0)
    family: str = "general"
    # probability that an sts draw is placed exactly on the physical boundary
    boundary_fraction: float = 0.0

    def __post_init__(self):
        if self.family not in ("general", "sts"):
            raise DomainError(f"unknown family {self.family!r}")
        if self.energy_cap is not None and self.energy_cap < 1.0:
            raise DomainError(f"energy cap {self.energy_cap} must be >= 1")
        if not 0.0 <= self.boundary_fraction <= 1.0:
            raise DomainError("boundary_fraction must lie in [0, 1]")
        for name in ("a_range", "b_range"):
            lo, hi = (float(x) for x in getattr(self, name))
            lo = max(lo, 1.0)
            if self.energy_cap is not None:
                hi = min(hi, float(self.energy_cap))
                lo = min(lo, hi)
            if hi < lo:
                raise DomainError(f"{name} is empty: [{lo}, {hi}]")
            object.__setattr__(self, name, (lo, hi))

    def describe(self) -> dict:
        return {
            "seed": self.seed,
            "family": self.family,
            "energy_cap": self.energy_cap,
            "a_range": list(self.a_range),
            "b_range": list(self.b_range),
            "boundary_fraction": self.boundary_fraction,
            "rng": RNG_NAME,
            "task_size": TASK_SIZE,
            "distribution": "a, b uniform; c uniform in [0, c_max]; d uniform in [-c, c] "
                            "(general) or d = -c (sts); rejection of unphysical draws",
        }


def make_rng(seed: int, task: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(task,))))


def random_general_state(cfg: SamplerConfig, rng: np.random.Generator,
                         tol: float = PHYSICAL_TOL) -> StandardForm:
    """Uniform draw over standard-form parameters, rejecting unphysical ones."""
    for _ in range(MAX_CONSECUTIVE_REJECTIONS):
        a = rng.uniform(*cfg.a_range)
        b = rng.uniform(*cfg.b_range)
        c = rng.uniform(0.0, math.sqrt(max(a * b - 1.0, 0.0)))
        d = rng.uniform(-c, c)
        sf = StandardForm(a, b, c, d)
        if validate_physical(sf, tol).valid:
            return sf
    raise SamplerConfigError(
        f"{MAX_CONSECUTIVE_REJECTIONS} consecutive rejections; check a_range/b_range"
    )


def sts_c_max_bisect(a: float, b: float, tol: float = C_MAX_TOL) -> float:
    """Largest c keeping (a, b, c, -c) physical, by bisection."""
    lo, hi = 0.0, math.sqrt(max(a * b - 1.0, 0.0))
    if validate_physical(StandardForm(a, b, hi, -hi)).valid:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if validate_physical(StandardForm(a, b, mid, -mid)).valid:
            lo = mid
        else:
            hi = mid
    return lo


def random_sts(cfg: SamplerConfig, rng: np.random.Generator) -> StsFamilyPoint:
    """Squeezed thermal state with a, b uniform under the energy cap."""
    if cfg.energy_cap is None:
        raise DomainError("squeezed thermal sampling needs an energy cap")
    a = rng.uniform(*cfg.a_range)
    b = rng.uniform(*cfg.b_range)
    c_max = sts_c_max_bisect(a, b)
    if cfg.boundary_fraction > 0.0 and rng.uniform() < cfg.boundary_fraction:
        c = c_max
    else:
        c = rng.uniform(0.0, c_max)
    return StsFamilyPoint(a, b, c, -1)


def _draw_task(args):
    cfg, task, count = args
    rng = make_rng(cfg.seed, task)
    draw = random_sts if cfg.family == "sts" else random_general_state
    return [draw(cfg, rng) for _ in range(count)]


def sample_states(cfg: SamplerConfig, n: int, jobs: int = 1) -> list:
    """``n`` states, identical for any ``jobs``."""
    tasks = [(cfg, t, min(TASK_SIZE, n - t * TASK_SIZE)) for t in range(math.ceil(n / TASK_SIZE))]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_draw_task, tasks))
    else:
        chunks = [_draw_task(t) for t in tasks]
    return [state for chunk in chunks for state in chunk]
