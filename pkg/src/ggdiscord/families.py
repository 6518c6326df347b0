"""Squeezed thermal state families and their closed-form entropic discord.

The two families sit on the physical boundary of the squeezed thermal
class, c^2 = (min(a, b) - 1)(max(a, b) + 1):

* low family, b <= a:  b = 1 + eps,  c = sqrt((a + 1) eps),      0 <= eps <= a - 1
* up family,  a <= b:  a = b - eps,  c = sqrt((b + 1)(b - eps - 1)), 0 <= eps <= b - 1

Both meet at the pure two-mode squeezed state a = b. Logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, UnphysicalStateError
from .gaussian_core import PHYSICAL_TOL, StandardForm, validate_physical

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class StsFamilyPoint:
    """A squeezed thermal state (d = sign_d * c), optionally tagged with the
    family it was built from and that family's parameter."""

    a: float
    b: float
    c: float
    sign_d: int = -1
    epsilon: Optional[float] = None
    family: Optional[str] = None

    def __post_init__(self):
        if self.sign_d not in (-1, 1):
            raise DomainError(f"sign_d must be +1 or -1, got {self.sign_d}")
        if self.c < 0:
            raise DomainError(f"c={self.c} must be >= 0")

    @property
    def d(self) -> float:
        return self.sign_d * self.c

    def standard_form(self) -> StandardForm:
        return StandardForm(self.a, self.b, self.c, self.d)


def boundary_tolerance(a: float, b: float) -> float:
    """Physicality slack for states built exactly on the boundary.

    Rounding in ab - c^2 grows like eps * ab; the default slack is kept for
    moderate a, b.
    """
    return PHYSICAL_TOL + 64.0 * _EPS * a * b


def _checked(point: StsFamilyPoint) -> StsFamilyPoint:
    report = validate_physical(point.standard_form(), boundary_tolerance(point.a, point.b))
    if not report.valid:
        raise UnphysicalStateError(
            f"family state {point} is unphysical (nu_minus={report.nu_minus:.12g})",
            nu_minus=report.nu_minus,
        )
    return point


def _check_eps(eps: float, upper: float, name: str):
    if not (0.0 <= eps <= upper + 1e-12 * max(1.0, upper)):
        raise DomainError(f"epsilon={eps} outside [0, {name}]")


def make_low_family(a: float, epsilon: float, sign_d: int = -1) -> StsFamilyPoint:
    a, epsilon = float(a), float(epsilon)
    if a < 1.0:
        raise DomainError(f"a={a} must be >= 1")
    _check_eps(epsilon, a - 1.0, "a - 1")
    epsilon = min(epsilon, a - 1.0)
    b = 1.0 + epsilon
    # c from the stored b, so the rounded state sits on the boundary
    c = math.sqrt((a + 1.0) * (b - 1.0))
    return _checked(StsFamilyPoint(a, b, c, sign_d, epsilon, "low"))


def make_up_family(b: float, epsilon: float, sign_d: int = -1) -> StsFamilyPoint:
    b, epsilon = float(b), float(epsilon)
    if b < 1.0:
        raise DomainError(f"b={b} must be >= 1")
    _check_eps(epsilon, b - 1.0, "b - 1")
    epsilon = min(epsilon, b - 1.0)
    a = b - epsilon
    c = math.sqrt((b + 1.0) * (a - 1.0))
    return _checked(StsFamilyPoint(a, b, c, sign_d, epsilon, "up"))


def make_pure_tmss(a: float, sign_d: int = -1) -> StsFamilyPoint:
    a = float(a)
    if a < 1.0:
        raise DomainError(f"a={a} must be >= 1")
    return _checked(StsFamilyPoint(a, a, math.sqrt(a * a - 1.0), sign_d, 0.0, "up"))


def make_sts(a: float, b: float, c: float, sign_d: int = -1) -> StsFamilyPoint:
    return _checked(StsFamilyPoint(float(a), float(b), float(c), sign_d))


def make_extot(a: float) -> StandardForm:
    """Classically correlated family b = a, c = a - 1, d = 0."""
    a = float(a)
    if a < 1.0:
        raise DomainError(f"a={a} must be >= 1")
    sf = StandardForm(a, a, a - 1.0, 0.0)
    report = validate_physical(sf, boundary_tolerance(a, a))
    if not report.valid:
        raise UnphysicalStateError(f"extot state a={a} is unphysical", nu_minus=report.nu_minus)
    return sf


def sts_c_max(a: float, b: float) -> float:
    """Largest c for which (a, b, c, -c) is physical."""
    lo, hi = min(a, b), max(a, b)
    return math.sqrt(max((lo - 1.0) * (hi + 1.0), 0.0))


def match_family(a: float, b: float, c: float, rtol: float = 1e-8):
    """Return ``(family, parameter, epsilon)`` when (a, b, c) lies on a family.

    ``parameter`` is a for the low family and b for the up family.
    """
    target = (min(a, b) - 1.0) * (max(a, b) + 1.0)
    if abs(c * c - target) > rtol * max(1.0, target):
        return None
    if b <= a:
        return "low", a, min(max(b - 1.0, 0.0), a - 1.0)
    return "up", b, min(max(b - a, 0.0), b - 1.0)


def _result(out: np.ndarray):
    return float(out) if out.ndim == 0 else out


def discord_low_family(a, epsilon):
    """Entropic discord of the low family; accepts scalars or arrays."""
    a = np.asarray(a, dtype=float)
    eps = np.asarray(epsilon, dtype=float)
    a, eps = np.broadcast_arrays(a, eps)
    if np.any(a < 1.0) or np.any(eps < 0.0) or np.any(eps > (a - 1.0) + 1e-12 * a):
        raise DomainError("low family requires a >= 1 and 0 <= epsilon <= a - 1")
    eps = np.minimum(eps, a - 1.0)
    y = a - eps
    with np.errstate(divide="ignore", invalid="ignore"):
        t_atanh = 4.0 * (a + 1.0) * np.arctanh(eps / (2.0 * a - eps + 2.0))
        # (1 - y) arcoth(y) -> 0 as y -> 1
        t_acoth = np.where(y > 1.0, eps * (1.0 - y) * np.log1p(2.0 / (y - 1.0)), 0.0)
        # -eps (eps + 2) ln(eps / (eps + 2)) -> 0 as eps -> 0
        t_log = np.where(eps > 0.0, eps * (eps + 2.0) * np.log1p(2.0 / eps), 0.0)
        out = (t_atanh + t_acoth + t_log) / (2.0 * (2.0 + eps))
    out = np.where(eps == 0.0, 0.0, out)
    return _result(out)


def discord_up_family(b, epsilon):
    """Entropic discord of the up family; accepts scalars or arrays.

    Uses (1-b)ln(b-1) + (b+1)ln(b+1) = 2 ln(b+1) + (b-1) log1p(2/(b-1)),
    which stays accurate for large b.
    """
    b = np.asarray(b, dtype=float)
    eps = np.asarray(epsilon, dtype=float)
    b, eps = np.broadcast_arrays(b, eps)
    if np.any(b < 1.0) or np.any(eps < 0.0) or np.any(eps > (b - 1.0) + 1e-12 * b):
        raise DomainError("up family requires b >= 1 and 0 <= epsilon <= b - 1")
    eps = np.minimum(eps, b - 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        top = 2.0 * np.log1p(b) + np.where(b > 1.0, (b - 1.0) * np.log1p(2.0 / (b - 1.0)), 0.0)
        bottom = 2.0 * np.log(eps + 2.0) + np.where(eps > 0.0, eps * np.log1p(2.0 / eps), 0.0)
    return _result(0.5 * (top - bottom))


def family_discord(point: StsFamilyPoint) -> float:
    if point.family == "low":
        return discord_low_family(point.a, point.epsilon)
    if point.family == "up":
        return discord_up_family(point.b, point.epsilon)
    match = match_family(point.a, point.b, point.c)
    if match is None:
        raise DomainError("state is not on a family with a closed-form discord")
    family, param, eps = match
    return discord_low_family(param, eps) if family == "low" else discord_up_family(param, eps)
