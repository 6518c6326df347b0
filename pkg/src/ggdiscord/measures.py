"""Geometric correlation measures for two-mode Gaussian states.

Gaussian geometric discord (GGD): the smallest squared Hilbert-Schmidt
distance between a state and the product state left behind by a Gaussian
measurement on mode B. For a seed covariance sigma_B and the resulting
posterior sigma_A of mode A it equals

    tr(rho^2) + tr(chi^2) - 2 tr(rho chi),   chi = sigma_A (+) sigma_B,

with every trace given by the Gaussian overlap formula.

Geometric quadrature correlations (GQC): the smallest squared Frobenius
distance between the covariance matrix and a product covariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError, InternalConsistencyError
from .gaussian_core import (
    PHYSICAL_TOL,
    SeedParams,
    StandardForm,
    SymplecticInvariants,
    direct_sum,
    gaussian_overlap,
    posterior_covariance,
    purity,
    require_physical,
    seed_covariance,
    seed_params_from_covariance,
    to_standard_form,
)
from .optimize import OptimizerOptions, SearchOutcome, multistart, widened

NEGATIVE_CLAMP = 1e-12


@dataclass(frozen=True)
class MeasureResult:
    value: float
    argmin: Union[SeedParams, tuple, None]
    converged: bool
    evaluations: int
    restarts_used: int
    widened: bool = False


def _clamp(value: float) -> float:
    if value < 0.0:
        if value < -NEGATIVE_CLAMP:
            raise InternalConsistencyError(f"squared distance evaluated to {value:.3e}")
        return 0.0
    return value


def _physical_sf(sf, tol: float = PHYSICAL_TOL) -> StandardForm:
    sf = to_standard_form(sf)
    require_physical(sf, tol)
    return sf


# -- reference objectives (matrix route) -------------------------------------


def hs_residual(sf: StandardForm, p: SeedParams) -> float:
    """Squared Hilbert-Schmidt distance between the state and its
    post-measurement product state for seed ``p``."""
    sigma = sf.matrix() if isinstance(sf, StandardForm) else np.asarray(sf, float)
    seed = seed_covariance(p)
    product = direct_sum(posterior_covariance(sigma, seed), seed)
    return (
        gaussian_overlap(sigma, sigma)
        + gaussian_overlap(product, product)
        - 2.0 * gaussian_overlap(sigma, product)
    )


def hs_residual_theta0(sf: StandardForm, m: float, lam: float) -> float:
    """Closed form of :func:`hs_residual` for an unrotated seed (theta = 0)."""
    if m < 1.0:
        raise DomainError(f"m={m} must be >= 1")
    if lam <= 0.0:
        raise DomainError(f"lambda={lam} must be > 0")
    a, b, c, d = sf.as_tuple()
    x = (a * (b + lam * m) - c * c) * (a * (b * lam + m) - d * d * lam)
    return (
        1.0 / math.sqrt(m * m * x / ((b * lam + m) * (b + lam * m)))
        - 4.0 / math.sqrt(x / lam)
        + 1.0 / math.sqrt((a * b - c * c) * (a * b - d * d))
    )


def hs_residual_product(sigma, p1: SeedParams, p2: SeedParams) -> float:
    """Squared Hilbert-Schmidt distance to an arbitrary product state."""
    sigma = sigma.matrix() if isinstance(sigma, StandardForm) else np.asarray(sigma, float)
    product = direct_sum(seed_covariance(p1), seed_covariance(p2))
    return (
        gaussian_overlap(sigma, sigma)
        + gaussian_overlap(product, product)
        - 2.0 * gaussian_overlap(sigma, product)
    )


def gqc_objective(sigma, p1: SeedParams, p2: SeedParams) -> float:
    """tr[(sigma - sigma_1 (+) sigma_2)^2]."""
    sigma = sigma.matrix() if isinstance(sigma, StandardForm) else np.asarray(sigma, float)
    diff = sigma - direct_sum(seed_covariance(p1), seed_covariance(p2))
    return float(np.trace(diff @ diff))


# -- scalar fast path used inside the optimizer --------------------------------


def _seed_entries(m, lam, theta):
    co, si = math.cos(theta), math.sin(theta)
    xx = m * lam * co * co + m * si * si / lam
    pp = m * co * co / lam + m * lam * si * si
    xp = -m * (lam * lam - 1.0) * co * si / lam
    return xx, xp, pp


def _posterior_entries(a, b, c, d, s):
    q00, q01, q11 = b + s[0], s[1], b + s[2]
    det_q = q00 * q11 - q01 * q01
    return a - c * c * q11 / det_q, c * d * q01 / det_q, a - d * d * q00 / det_q


def _distance_sq(a, b, c, d, s1, s2, purity_sigma):
    """Hilbert-Schmidt distance squared between standard form (a,b,c,d) and
    s1 (+) s2, each single-mode block given as (xx, xp, pp)."""
    det1 = s1[0] * s1[2] - s1[1] * s1[1]
    det2 = s2[0] * s2[2] - s2[1] * s2[1]
    p00, p01, p11 = a + s1[0], s1[1], a + s1[2]
    q00, q01, q11 = b + s2[0], s2[1], b + s2[2]
    det_q = q00 * q11 - q01 * q01
    # det(sigma + s1 (+) s2) = det Q * det(P - G Q^-1 G), G = diag(c, d)
    m00 = p00 - c * c * q11 / det_q
    m01 = p01 + c * d * q01 / det_q
    m11 = p11 - d * d * q00 / det_q
    det_sum = det_q * (m00 * m11 - m01 * m01)
    if det1 <= 0.0 or det2 <= 0.0 or det_sum <= 0.0:
        return math.inf
    return purity_sigma + 1.0 / math.sqrt(det1 * det2) - 8.0 / math.sqrt(det_sum)


def _decode(u, v, theta):
    return 1.0 + math.exp(u), math.exp(v), theta


def _encode(p: SeedParams, opts: OptimizerOptions):
    return [math.log(max(p.m - 1.0, opts.m_floor)), math.log(p.lam), p.theta]


def _seed_bounds(sf: StandardForm, opts: OptimizerOptions):
    m_max = opts.m_max_factor * max(sf.a, sf.b)
    v = -math.log(opts.lambda_min)
    return [(math.log(opts.m_floor), math.log(m_max)), (-v, v), (None, None)]


def _hit_outer_bounds(x, bounds) -> bool:
    """True when some seed sits on the upper m bound or on a lambda bound;
    the m = 1 floor is a genuine constraint and does not count."""
    for k in range(0, len(x), 3):
        (_, u_hi), (v_lo, v_hi) = bounds[k], bounds[k + 1]
        if u_hi - x[k] < 1e-6 or x[k + 1] - v_lo < 1e-6 or v_hi - x[k + 1] < 1e-6:
            return True
    return False


def _random_seed_start(rng, sf: StandardForm, opts: OptimizerOptions):
    scale = 2.0 * max(sf.a, sf.b)
    u = rng.uniform(math.log(1e-3), math.log(scale))
    v = rng.uniform(-math.log(10.0), math.log(10.0))
    theta = rng.uniform(0.0, math.pi)
    return [u, v, theta]


def _search(fun, make_starts, bounds_for, opts):
    """Multi-start search, widened once if the optimum touches the box."""
    bounds = bounds_for(opts)
    outcome = multistart(fun, make_starts(opts, None), bounds, opts)
    if _hit_outer_bounds(outcome.x, bounds):
        wide = widened(opts)
        bounds = bounds_for(wide)
        second = multistart(fun, make_starts(wide, outcome.x), bounds, wide)
        if second.value <= outcome.value:
            best_x, best_v, conv = second.x, second.value, second.converged
        else:
            best_x, best_v, conv = outcome.x, outcome.value, outcome.converged
        outcome = SearchOutcome(
            best_x, best_v, conv,
            outcome.evaluations + second.evaluations,
            outcome.restarts_used + second.restarts_used,
            widened=True,
        )
    return outcome


def _result_from(outcome: SearchOutcome, argmin) -> MeasureResult:
    return MeasureResult(
        value=_clamp(outcome.value),
        argmin=argmin,
        converged=outcome.converged,
        evaluations=outcome.evaluations,
        restarts_used=outcome.restarts_used,
        widened=outcome.widened,
    )


# -- Gaussian geometric discord ------------------------------------------------


def _ggd_fun(sf: StandardForm):
    a, b, c, d = sf.as_tuple()
    pur = purity(sf)

    def fun(x):
        s2 = _seed_entries(*_decode(x[0], x[1], x[2]))
        s1 = _posterior_entries(a, b, c, d, s2)
        return _distance_sq(a, b, c, d, s1, s2, pur)

    return fun


def ggd_numeric(sf, opts: Optional[OptimizerOptions] = None,
                tol: float = PHYSICAL_TOL) -> MeasureResult:
    """Gaussian geometric discord by direct search over seeds (m, lambda, theta).

    Starts at the heterodyne seeds (1, 1, 0) and (b, 1, 0), then random seeds,
    ``opts.starts`` local searches in total.
    """
    sf = _physical_sf(sf, tol)
    opts = opts or OptimizerOptions()
    fun = _ggd_fun(sf)

    def starts(o, previous):
        rng = np.random.default_rng(o.seed)
        fixed = [SeedParams(1.0 + 1e-3, 1.0, 0.0), SeedParams(max(sf.b, 1.0 + 1e-3), 1.0, 0.0)]
        out = [_encode(p, o) for p in fixed]
        if previous is not None:
            out.insert(0, list(previous))
        while len(out) < max(o.starts, 1):
            out.append(_random_seed_start(rng, sf, o))
        return out[: max(o.starts, 1)]

    outcome = _search(fun, starts, lambda o: _seed_bounds(sf, o), opts)
    m, lam, theta = _decode(*outcome.x)
    return _result_from(outcome, SeedParams(m, lam, theta))


def ggd_sts_optimal_seed(sf: StandardForm) -> SeedParams:
    a, b, c = sf.a, sf.b, sf.c
    ab = a * b
    m = math.sqrt(ab) * (math.sqrt(4.0 * ab - 3.0 * c * c) + math.sqrt(ab)) / (3.0 * a)
    return SeedParams(max(m, 1.0), 1.0, 0.0)


def ggd_sts_closed(sf, tol: float = 1e-9) -> tuple[float, SeedParams]:
    """Closed-form GGD of a squeezed thermal state (|d| = c).

    Returns the value and the optimal heterodyne seed.
    """
    sf = to_standard_form(sf)
    if not sf.is_squeezed_thermal(tol):
        raise DomainError(
            f"closed form needs |d| = c (got c={sf.c}, d={sf.d}); use ggd_numeric"
        )
    a, b, c = sf.a, sf.b, sf.c
    ab = a * b
    value = 1.0 / (ab - c * c) - 9.0 / (math.sqrt(4.0 * ab - 3.0 * c * c) + math.sqrt(ab)) ** 2
    return value, ggd_sts_optimal_seed(sf)


def ggd_sts_closed_array(a, b, c):
    """Vectorised closed-form GGD for squeezed thermal states."""
    a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
    ab = a * b
    return 1.0 / (ab - c * c) - 9.0 / (np.sqrt(4.0 * ab - 3.0 * c * c) + np.sqrt(ab)) ** 2


def ggd(sf, opts: Optional[OptimizerOptions] = None, tol: float = PHYSICAL_TOL) -> float:
    """GGD value, closed form for squeezed thermal states, numeric otherwise."""
    sf = _physical_sf(sf, tol)
    if sf.is_squeezed_thermal():
        return ggd_sts_closed(sf)[0]
    return ggd_numeric(sf, opts, tol).value


# -- product-state variant -----------------------------------------------------


def _product_bounds(sf, o):
    return _seed_bounds(sf, o) * 2


def ggd_alternative(sf, opts: Optional[OptimizerOptions] = None,
                    warm_start: Optional[MeasureResult] = None,
                    tol: float = PHYSICAL_TOL) -> MeasureResult:
    """Distance to the closest product state of two arbitrary single-mode
    Gaussian states.

    The search is seeded with the GGD optimum (posterior (+) seed), so the
    returned value never exceeds the GGD found by :func:`ggd_numeric`. Pass
    ``warm_start`` to reuse an existing GGD result.
    """
    sf = _physical_sf(sf, tol)
    opts = opts or OptimizerOptions()
    if warm_start is None:
        warm_start = ggd_numeric(sf, opts, tol)
    seed = warm_start.argmin
    post = seed_params_from_covariance(posterior_covariance(sf, seed_covariance(seed)))
    a, b, c, d = sf.as_tuple()
    pur = purity(sf)

    def fun(x):
        s1 = _seed_entries(*_decode(x[0], x[1], x[2]))
        s2 = _seed_entries(*_decode(x[3], x[4], x[5]))
        return _distance_sq(a, b, c, d, s1, s2, pur)

    def starts(o, previous):
        rng = np.random.default_rng(o.seed)
        out = [_encode(post, o) + _encode(seed, o)]
        if previous is not None:
            out.insert(0, list(previous))
        out.append(_encode(SeedParams(max(a, 1 + 1e-3), 1.0), o)
                   + _encode(SeedParams(max(b, 1 + 1e-3), 1.0), o))
        out.append(_encode(SeedParams(1 + 1e-3, 1.0), o) * 2)
        while len(out) < max(o.starts, 1):
            out.append(_random_seed_start(rng, sf, o) + _random_seed_start(rng, sf, o))
        return out[: max(o.starts, 1)]

    outcome = _search(fun, starts, lambda o: _product_bounds(sf, o), opts)
    x = outcome.x
    argmin = (SeedParams(*_decode(*x[:3])), SeedParams(*_decode(*x[3:])))
    return _result_from(outcome, argmin)


# -- geometric quadrature correlations -----------------------------------------


def gqc_standard_form(sf) -> float:
    sf = to_standard_form(sf)
    return 2.0 * (sf.c * sf.c + sf.d * sf.d)


def gqc_invariant(inv: SymplecticInvariants) -> float:
    """GQC from the local symplectic invariants.

    The numerator carries det(alpha) det(beta); with det(alpha) alone the
    expression would not reduce to 2(c^2 + d^2).
    """
    prod = inv.detAlpha * inv.detBeta
    return 2.0 * (prod + inv.detGamma ** 2 - inv.detSigma) / math.sqrt(prod)


def gqc_numeric(sf, opts: Optional[OptimizerOptions] = None,
                tol: float = PHYSICAL_TOL) -> MeasureResult:
    """GQC by direct search over two single-mode covariances."""
    sf = _physical_sf(sf, tol)
    opts = opts or OptimizerOptions()
    a, b, c, d = sf.as_tuple()
    offdiag = 2.0 * (c * c + d * d)

    def fun(x):
        s1 = _seed_entries(*_decode(x[0], x[1], x[2]))
        s2 = _seed_entries(*_decode(x[3], x[4], x[5]))
        return ((a - s1[0]) ** 2 + 2.0 * s1[1] ** 2 + (a - s1[2]) ** 2
                + (b - s2[0]) ** 2 + 2.0 * s2[1] ** 2 + (b - s2[2]) ** 2 + offdiag)

    def starts(o, previous):
        rng = np.random.default_rng(o.seed)
        out = [_encode(SeedParams(1 + 1e-3, 1.0), o) * 2]
        if previous is not None:
            out.insert(0, list(previous))
        while len(out) < max(o.starts, 1):
            out.append(_random_seed_start(rng, sf, o) + _random_seed_start(rng, sf, o))
        return out[: max(o.starts, 1)]

    outcome = _search(fun, starts, lambda o: _product_bounds(sf, o), opts)
    x = outcome.x
    argmin = (SeedParams(*_decode(*x[:3])), SeedParams(*_decode(*x[3:])))
    return _result_from(outcome, argmin)
