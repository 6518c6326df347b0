"""Covariance-matrix algebra for two-mode Gaussian states.

Conventions: quadratures ordered (x_A, p_A, x_B, p_B), vacuum covariance is
the identity, first moments are zero. Under this convention the purity of a
state is 1/sqrt(det sigma) and the uncertainty relation reads nu_minus >= 1.

Two-mode covariances are plain 4x4 ``numpy`` arrays and single-mode ones 2x2
arrays; :class:`StandardForm` is accepted wherever a two-mode covariance is,
and is handled with closed-form arithmetic instead of matrix routines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Union

import numpy as np

from .errors import (
    ContractError,
    DomainError,
    NumericalDegeneracyError,
    UnphysicalStateError,
)

SYMMETRY_TOL = 1e-12
PHYSICAL_TOL = 1e-10

OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def omega(n_modes: int) -> np.ndarray:
    """Symplectic form for ``n_modes`` modes in (x1, p1, x2, p2, ...) order."""
    return np.kron(np.eye(n_modes), OMEGA_1)


@dataclass(frozen=True)
class StandardForm:
    """Standard-form parameters of a two-mode covariance matrix.

    The matrix is ``[[a,0,c,0],[0,a,0,d],[c,0,b,0],[0,d,0,b]]``.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"standard-form entry {name}={value} is not finite")
            object.__setattr__(self, name, value)

    def matrix(self) -> np.ndarray:
        a, b, c, d = self.a, self.b, self.c, self.d
        return np.array(
            [[a, 0.0, c, 0.0], [0.0, a, 0.0, d], [c, 0.0, b, 0.0], [0.0, d, 0.0, b]]
        )

    def is_squeezed_thermal(self, tol: float = 1e-9) -> bool:
        return abs(abs(self.d) - self.c) <= tol * max(1.0, self.c)

    def satisfies_ordering(self, tol: float = PHYSICAL_TOL) -> bool:
        """Check a, b >= 1 and sqrt(ab - 1) >= c >= |d| (up to ``tol``)."""
        scale = max(1.0, self.a * self.b)
        return (
            self.a >= 1.0 - tol
            and self.b >= 1.0 - tol
            and self.c >= -tol
            and self.c * self.c <= self.a * self.b - 1.0 + tol * scale
            and abs(self.d) <= self.c + tol * max(1.0, self.c)
        )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


Covariance = Union[np.ndarray, StandardForm]


@dataclass(frozen=True)
class SymplecticInvariants:
    detAlpha: float
    detBeta: float
    detGamma: float
    detSigma: float
    seralian: float
    nuMinus: float
    nuPlus: float


class PhysicalityReport(NamedTuple):
    valid: bool
    nu_minus: float


@dataclass(frozen=True)
class SeedParams:
    """Single-mode rotated squeezed thermal seed: thermal factor ``m``,
    squeezing ``lam`` and rotation angle ``theta`` (reduced mod pi)."""

    m: float
    lam: float
    theta: float = 0.0

    def __post_init__(self):
        m, lam, theta = float(self.m), float(self.lam), float(self.theta)
        if not (math.isfinite(m) and math.isfinite(lam) and math.isfinite(theta)):
            raise DomainError(f"non-finite seed parameters ({m}, {lam}, {theta})")
        if m < 1.0:
            raise DomainError(f"seed thermal factor m={m} must be >= 1")
        if lam <= 0.0:
            raise DomainError(f"seed squeezing lambda={lam} must be > 0")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "theta", theta % math.pi)


def _as_matrix(sigma: Covariance) -> np.ndarray:
    if isinstance(sigma, StandardForm):
        return sigma.matrix()
    return np.asarray(sigma, dtype=float)


def check_symmetric(sigma: np.ndarray, tol: float = SYMMETRY_TOL) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
        raise ContractError(f"expected a square even-dimensional matrix, got shape {sigma.shape}")
    if not np.all(np.isfinite(sigma)):
        raise ContractError("covariance matrix has non-finite entries")
    if np.max(np.abs(sigma - sigma.T)) > tol:
        raise ContractError("covariance matrix is not symmetric")
    return sigma


def _check_two_mode(sigma: Covariance) -> Covariance:
    if isinstance(sigma, StandardForm):
        return sigma
    sigma = check_symmetric(sigma)
    if sigma.shape != (4, 4):
        raise ContractError(f"two-mode covariance must be 4x4, got {sigma.shape}")
    return sigma


def det2(s) -> float:
    return float(s[0][0] * s[1][1] - s[0][1] * s[1][0])


def blocks(sigma: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return the (alpha, beta, gamma) blocks of a 4x4 covariance."""
    return sigma[:2, :2], sigma[2:, 2:], sigma[:2, 2:]


def symplectic_eigenvalues(seralian: float, det_sigma: float,
                           disc: float | None = None) -> tuple[float, float]:
    """(nu_minus, nu_plus) from the seralian and det sigma of a two-mode state.

    nu_minus^2 is taken as det_sigma / nu_plus^2, which avoids the cancellation
    in (D - sqrt(D^2 - 4 det)) / 2 when the two eigenvalues are far apart.
    ``disc`` overrides D^2 - 4 det when a better-conditioned value is known.
    """
    if disc is None:
        disc = seralian * seralian - 4.0 * det_sigma
    disc = max(disc, 0.0)
    nu_plus_sq = 0.5 * (seralian + math.sqrt(disc))
    if nu_plus_sq <= 0.0:
        return float("nan"), float("nan")
    nu_minus_sq = det_sigma / nu_plus_sq
    nu_minus = math.sqrt(nu_minus_sq) if nu_minus_sq >= 0 else -math.sqrt(-nu_minus_sq)
    return nu_minus, math.sqrt(nu_plus_sq)


def symplectic_invariants(sigma: Covariance) -> SymplecticInvariants:
    sigma = _check_two_mode(sigma)
    if isinstance(sigma, StandardForm):
        a, b, c, d = sigma.as_tuple()
        det_alpha, det_beta, det_gamma = a * a, b * b, c * d
        p, q, u, w = a * b - c * c, a * b - d * d, a - b, c + d
        det_sigma = p * q
        # written in a - b and c + d so boundary states near a = b keep precision
        seralian = u * u + p + q + w * w
        disc = u * u * (a + b) ** 2 + 4.0 * (c * u + b * w) * (a * w - c * u)
    else:
        alpha, beta, gamma = blocks(sigma)
        det_alpha, det_beta, det_gamma = det2(alpha), det2(beta), det2(gamma)
        det_sigma = float(np.linalg.det(sigma))
        disc = None
        seralian = det_alpha + det_beta + 2.0 * det_gamma
    nu_minus, nu_plus = symplectic_eigenvalues(seralian, det_sigma, disc)
    return SymplecticInvariants(
        det_alpha, det_beta, det_gamma, det_sigma, seralian, nu_minus, nu_plus
    )


def is_positive_definite(sigma: Covariance) -> bool:
    if isinstance(sigma, StandardForm):
        a, b, c, d = sigma.as_tuple()
        ab = a * b
        return a > 0 and b > 0 and ab - c * c > 0 and ab - d * d > 0
    try:
        np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        return False
    return True


def validate_physical(sigma: Covariance, tol: float = PHYSICAL_TOL) -> PhysicalityReport:
    """Positive definiteness plus nu_minus >= 1 - tol."""
    sigma = _check_two_mode(sigma)
    inv = symplectic_invariants(sigma)
    pd = is_positive_definite(sigma)
    return PhysicalityReport(bool(pd and inv.nuMinus >= 1.0 - tol), inv.nuMinus)


def require_physical(sigma: Covariance, tol: float = PHYSICAL_TOL) -> Covariance:
    report = validate_physical(sigma, tol)
    if not report.valid:
        raise UnphysicalStateError(
            f"covariance violates the uncertainty relation (nu_minus={report.nu_minus:.6g})",
            nu_minus=report.nu_minus,
        )
    return sigma


def standard_form_from_invariants(
    inv: SymplecticInvariants, tol: float = 1e-9
) -> StandardForm:
    a = math.sqrt(inv.detAlpha)
    b = math.sqrt(inv.detBeta)
    ab = a * b
    g = inv.detGamma
    # c^2 and d^2 are the roots of t^2 - s t + g^2 with s = c^2 + d^2
    s = (ab * ab + g * g - inv.detSigma) / ab
    disc = s * s - 4.0 * g * g
    scale = max(1.0, s * s)
    if s < -tol * max(1.0, abs(s)) or disc < -tol * scale:
        raise NumericalDegeneracyError(
            f"no real standard form for invariants (c^2+d^2={s:.6g}, discriminant={disc:.6g})"
        )
    s = max(s, 0.0)
    root = math.sqrt(max(disc, 0.0))
    c_sq = 0.5 * (s + root)
    c = math.sqrt(c_sq)
    if g == 0.0:
        d = 0.0
    else:
        d = math.copysign(abs(g) / c, g)
    return StandardForm(a, b, c, d)


def _inv_sqrt_spd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    if w[0] <= 0.0:
        raise NumericalDegeneracyError("local block is not positive definite")
    return (v / np.sqrt(w)) @ v.T


def to_standard_form(sigma: Covariance) -> StandardForm:
    """Standard form of a covariance matrix.

    Matrices are normalised locally: sqrt(a) alpha^(-1/2) is symplectic, so
    sqrt(ab) alpha^(-1/2) gamma beta^(-1/2) has singular values c >= |d|.
    This avoids taking c^2 + d^2 from det sigma, which loses everything
    when the correlations are small; the result agrees with
    :func:`standard_form_from_invariants` otherwise.
    """
    if isinstance(sigma, StandardForm):
        return sigma
    sigma = _check_two_mode(sigma)
    alpha, beta, gamma = blocks(sigma)
    a, b = math.sqrt(det2(alpha)), math.sqrt(det2(beta))
    normed = math.sqrt(a * b) * _inv_sqrt_spd(alpha) @ gamma @ _inv_sqrt_spd(beta)
    c, d_abs = np.linalg.svd(normed, compute_uv=False)
    g = det2(gamma)
    d = 0.0 if g == 0.0 else math.copysign(float(d_abs), g)
    return StandardForm(a, b, float(c), d)


def seed_covariance(p: SeedParams) -> np.ndarray:
    """Covariance of the rotated squeezed thermal seed state."""
    m, lam, theta = p.m, p.lam, p.theta
    if lam <= 0:
        raise DomainError(f"seed squeezing lambda={lam} must be > 0")
    co, si = math.cos(theta), math.sin(theta)
    xx = m * lam * co * co + m * si * si / lam
    pp = m * co * co / lam + m * lam * si * si
    xp = -m * (lam * lam - 1.0) * co * si / lam
    return np.array([[xx, xp], [xp, pp]])


def seed_params_from_covariance(s: np.ndarray, tol: float = PHYSICAL_TOL) -> SeedParams:
    """Invert :func:`seed_covariance` for a physical single-mode covariance."""
    s = check_symmetric(s)
    if s.shape != (2, 2):
        raise ContractError(f"single-mode covariance must be 2x2, got {s.shape}")
    det = det2(s)
    if det < 1.0 - tol:
        raise UnphysicalStateError(f"single-mode determinant {det:.6g} < 1")
    m = max(math.sqrt(det), 1.0)
    evals, evecs = np.linalg.eigh(s)
    # the larger eigenvalue m*lam has eigenvector (cos theta, -sin theta)
    lam = math.sqrt(evals[1] / evals[0])
    theta = math.atan2(-evecs[1, 1], evecs[0, 1])
    return SeedParams(m, lam, theta)


def direct_sum(s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
    n1, n2 = s1.shape[0], s2.shape[0]
    out = np.zeros((n1 + n2, n1 + n2))
    out[:n1, :n1] = s1
    out[n1:, n1:] = s2
    return out


def posterior_covariance(sigma: Covariance, seed: np.ndarray) -> np.ndarray:
    """Conditional covariance of mode A after a Gaussian measurement on B.

    Schur complement ``alpha - gamma (beta + seed)^-1 gamma^T``; independent
    of the measurement outcome.
    """
    sigma = _as_matrix(_check_two_mode(sigma))
    seed = np.asarray(seed, dtype=float)
    alpha, beta, gamma = blocks(sigma)
    denom = beta + seed
    assert det2(denom) > 0, "beta + seed must be positive definite"
    return alpha - gamma @ np.linalg.solve(denom, gamma.T)


def log_det(sigma: np.ndarray) -> float:
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0:
        raise ContractError("matrix is not positive definite")
    return float(logdet)


def gaussian_overlap(sigma1: np.ndarray, sigma2: np.ndarray) -> float:
    """tr(rho1 rho2) = 1/sqrt(det[(sigma1 + sigma2)/2])."""
    sigma1 = np.asarray(sigma1, dtype=float)
    sigma2 = np.asarray(sigma2, dtype=float)
    if sigma1.shape != sigma2.shape:
        raise ContractError(f"dimension mismatch: {sigma1.shape} vs {sigma2.shape}")
    check_symmetric(sigma1)
    check_symmetric(sigma2)
    return math.exp(-0.5 * log_det(0.5 * (sigma1 + sigma2)))


def purity(sigma: Covariance) -> float:
    sigma = _check_two_mode(sigma)
    if isinstance(sigma, StandardForm):
        a, b, c, d = sigma.as_tuple()
        return 1.0 / math.sqrt((a * b - c * c) * (a * b - d * d))
    return math.exp(-0.5 * log_det(sigma))


def mean_energy_per_mode(sigma: Covariance) -> tuple[float, float]:
    sigma = _check_two_mode(sigma)
    if isinstance(sigma, StandardForm):
        return sigma.a, sigma.b
    return 0.5 * float(np.trace(sigma[:2, :2])), 0.5 * float(np.trace(sigma[2:, 2:]))


def rotation(theta: float) -> np.ndarray:
    co, si = math.cos(theta), math.sin(theta)
    return np.array([[co, si], [-si, co]])


def squeezer(r: float) -> np.ndarray:
    return np.diag([math.exp(-r), math.exp(r)])


def local_transform(sigma: Covariance, s_a: np.ndarray, s_b: np.ndarray) -> np.ndarray:
    """Conjugate ``sigma`` by the local symplectic ``s_a (+) s_b``."""
    s = direct_sum(np.asarray(s_a, float), np.asarray(s_b, float))
    out = s @ _as_matrix(sigma) @ s.T
    return 0.5 * (out + out.T)


def parse_matrix(text: str) -> np.ndarray:
    """Parse the 4-line matrix text format (whitespace-separated decimals)."""
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    try:
        sigma = np.array([[float(x) for x in row] for row in rows])
    except ValueError as exc:
        raise ContractError(f"unparseable matrix entry: {exc}") from None
    if sigma.shape != (4, 4):
        raise ContractError(f"expected 4 rows of 4 numbers, got shape {sigma.shape}")
    return check_symmetric(sigma)


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def format_matrix(sigma: np.ndarray) -> str:
    return "".join(" ".join(f"{x:.17g}" for x in row) + "\n" for row in np.asarray(sigma))
