"""
Axis equilibria of the rotated Hill model and their linear stability.

Equilibria lie on the coordinate axes and are the positive roots of

    h_A(r) = lambda2 - 1/r^3 + 3c/r^5     (x-axis)
    h_B(r) = lambda1 - 1/r^3 + 3c/r^5     (y-axis)
    h_C(r) = -r^5 - r^2 - 6c              (z-axis, only for c < 0)

At an axis point the mixed second derivatives of Omega vanish, so the
characteristic polynomial of the linearization factors as

    (rho^2 - Omega_zz)(rho^4 + A rho^2 + B),  A = 4 - Omega_xx - Omega_yy,  B = Omega_xx Omega_yy

with discriminant D = A^2 - 4B.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
from django.db import models
from scipy.linalg import eigvals
from scipy.optimize import bisect, brentq

from .exceptions import NoBracket, NotAnEquilibrium, NoZEquilibrium, ProlateUnsupported
from .hill_model import gradient_hill, gradient_scale_hill, hessian_hill, rotation_eigenvalues

logger = logging.getLogger(__name__)

GRADIENT_TOLERANCE = 1e-10
IMAGINARY_THRESHOLD = 1e-9
MAX_BRACKET_WIDENINGS = 200
MU_STAR_TOLERANCE = 1e-10


class Axis(models.TextChoices):
    X = 'x', 'x-axis'
    Y = 'y', 'y-axis'
    Z = 'z', 'z-axis'


class StabilityType(models.TextChoices):
    CENTER_CENTER_CENTER = 'center x center x center', 'Center x center x center'
    CENTER_CENTER_SADDLE = 'center x center x saddle', 'Center x center x saddle'
    CENTER_SADDLE_SADDLE = 'center x saddle x saddle', 'Center x saddle x saddle'
    SADDLE_SADDLE_SADDLE = 'saddle x saddle x saddle', 'Saddle x saddle x saddle'
    CENTER_COMPLEX_SADDLE = 'center x complex-saddle', 'Center x complex saddle'
    SADDLE_COMPLEX_SADDLE = 'saddle x complex-saddle', 'Saddle x complex saddle'


# (center pairs, saddle pairs, complex quartets) -> type
_TYPE_BY_COUNTS = {
    (3, 0, 0): StabilityType.CENTER_CENTER_CENTER,
    (2, 1, 0): StabilityType.CENTER_CENTER_SADDLE,
    (1, 2, 0): StabilityType.CENTER_SADDLE_SADDLE,
    (0, 3, 0): StabilityType.SADDLE_SADDLE_SADDLE,
    (1, 0, 1): StabilityType.CENTER_COMPLEX_SADDLE,
    (0, 1, 1): StabilityType.SADDLE_COMPLEX_SADDLE,
}


@dataclass(frozen=True, eq=False)
class EquilibriumReport:
    """Location of an axis equilibrium and, once completed, its spectrum"""

    axis: Axis
    r_star: float
    location: np.ndarray
    residual: float = 0.0
    hessian: Optional[np.ndarray] = None
    quartic_coeffs: Optional[Tuple[float, float, float]] = None
    eigenvalues: Optional[np.ndarray] = None
    stability_class: Optional[StabilityType] = None
    # (a, b) of the quartet a + ib when D < 0
    krein: Optional[Tuple[float, float]] = None

    @property
    def hessian_diag(self) -> Optional[Tuple[float, float, float]]:
        if self.hessian is None:
            return None
        return tuple(float(h) for h in np.diag(self.hessian))

    @property
    def is_complete(self) -> bool:
        return self.eigenvalues is not None


@dataclass(frozen=True)
class SeriesCoefficients:
    """First-order expansions in c of d, r*_y, r*_x and their inverse cubes"""

    d0: float
    d1: float
    lambda10: float
    lambda20: float
    r_y0: float
    r_y1: float
    r_x0: float
    r_x1: float
    alpha: float
    beta: float
    alpha_prime: float
    beta_prime: float

    def radius(self, axis: Axis, c: float) -> float:
        if axis == Axis.Y:
            return self.r_y0 + self.r_y1 * c
        if axis == Axis.X:
            return self.r_x0 + self.r_x1 * c
        raise ValueError('series expansions exist for the x- and y-axis only')

    def inverse_cube(self, axis: Axis, c: float) -> float:
        if axis == Axis.Y:
            return self.alpha + self.beta * c
        if axis == Axis.X:
            return self.alpha_prime + self.beta_prime * c
        raise ValueError('series expansions exist for the x- and y-axis only')


def _axis_location(axis: Axis, r: float) -> np.ndarray:
    location = np.zeros(3)
    location['xyz'.index(axis)] = r
    return location


def find_equilibrium(axis: Axis, lambda1: float, lambda2: float, c: float) -> EquilibriumReport:
    """
    Locate the equilibrium on the positive half of an axis

    Args:
        axis: Axis to search
        lambda1, lambda2: Rotated-frame curvatures
        c: Rescaled oblateness coefficient (<= 0)

    Returns:
        EquilibriumReport with location and root residual only

    Raises:
        NoZEquilibrium: For the z-axis when c == 0
        ProlateUnsupported: If c > 0
        NoBracket: If the root cannot be bracketed
    """
    axis = Axis(axis)
    if c > 0:
        raise ProlateUnsupported(f'c = {c} > 0 is not an oblate tertiary')

    if axis == Axis.Z:
        if c == 0:
            raise NoZEquilibrium('the z-axis carries no equilibrium without oblateness')

        def h(r):
            return -r ** 5 - r ** 2 - 6.0 * c

        seed = math.sqrt(-6.0 * c)
        lo, hi = seed * (1.0 - 1e-3), seed * (1.0 + 1e-3)
    else:
        lam = lambda2 if axis == Axis.X else lambda1
        if not lam > 0:
            raise NoBracket(f'{axis}-axis curvature {lam} is not positive')

        def h(r):
            return lam - 1.0 / r ** 3 + 3.0 * c / r ** 5

        lo = (2.0 * lam) ** (-1.0 / 3.0) / 16.0
        hi = (2.0 / lam) ** (1.0 / 3.0) * 16.0

    widenings = 0
    while (h(lo) > 0) == (h(hi) > 0):
        if widenings == MAX_BRACKET_WIDENINGS:
            raise NoBracket(f'no sign change of the {axis}-axis equation in [{lo}, {hi}]')
        lo, hi = lo / 2.0, hi * 2.0
        widenings += 1
    if widenings:
        logger.info(f"Widened the {axis}-axis bracket {widenings} times to [{lo:.3g}, {hi:.3g}]")

    r_star = brentq(h, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps, maxiter=500)

    if axis == Axis.Z:
        residual = h(r_star)
    else:
        residual = lam * r_star ** 5 - r_star ** 2 + 3.0 * c
    return EquilibriumReport(axis=axis, r_star=r_star, location=_axis_location(axis, r_star),
                             residual=residual)


def approx_z_distance(radius: float, c20: float) -> float:
    """
    Dominant-balance z-equilibrium distance radius * sqrt(-3 C20)

    Dropping r^5 in h_C gives r^2 = -6c. The result carries the units of
    ``radius`` (km for the physical radius, Hill units for rho3).
    """
    if c20 > 0:
        raise ProlateUnsupported(f'c20 = {c20} describes a prolate tertiary')
    return radius * math.sqrt(-3.0 * c20)


def apex_positivity(r: float, c: float, lambda2: float) -> float:
    """lambda2 + 1 - 6c/r^5, positive for c < 0; rules out off-axis z-plane equilibria"""
    return lambda2 + 1.0 - 6.0 * c / r ** 5


def _square_root_pair(s: float) -> List[complex]:
    if s < 0:
        root = math.sqrt(-s)
        return [complex(0.0, root), complex(0.0, -root)]
    root = math.sqrt(s)
    return [complex(root, 0.0), complex(-root, 0.0)]


def _planar_roots(a_coef: float, b_coef: float, d_coef: float):
    """
    Roots of rho^4 + A rho^2 + B

    Returns:
        (four roots, (a, b) of the quartet or None)
    """
    if d_coef >= 0:
        q = -0.5 * (a_coef + math.copysign(math.sqrt(d_coef), a_coef))
        if q == 0.0:
            s1 = s2 = -0.5 * a_coef
        else:
            s1, s2 = q, b_coef / q
        return _square_root_pair(s1) + _square_root_pair(s2), None

    # rho^2 = alpha + i beta; rho = a + ib by the half-angle formulas, the
    # cancelling component recovered from 2ab = beta.
    alpha = -0.5 * a_coef
    beta = 0.5 * math.sqrt(-d_coef)
    modulus = math.hypot(alpha, beta)
    if alpha >= 0:
        a = math.sqrt(0.5 * (modulus + alpha))
        b = math.copysign(1.0, beta) * beta / (2.0 * a)
    else:
        b = math.copysign(1.0, beta) * math.sqrt(0.5 * (modulus - alpha))
        a = beta / (2.0 * b)
    roots = [complex(a, b), complex(a, -b), complex(-a, b), complex(-a, -b)]
    return roots, (a, b)


def classify_spectrum(eigenvalues: Sequence[complex]) -> StabilityType:
    """Type of a Hamiltonian spectrum from its six eigenvalues"""
    imaginary = real = other = 0
    for value in eigenvalues:
        if abs(value.real) <= IMAGINARY_THRESHOLD * (1.0 + abs(value.imag)):
            imaginary += 1
        elif abs(value.imag) <= IMAGINARY_THRESHOLD * (1.0 + abs(value.real)):
            real += 1
        else:
            other += 1
    counts = (imaginary // 2, real // 2, other // 4)
    try:
        return _TYPE_BY_COUNTS[counts]
    except KeyError:
        raise NotAnEquilibrium(f'spectrum {list(eigenvalues)} is not of Hamiltonian form') from None


def stability_spectrum(report: EquilibriumReport, lambda1: float, lambda2: float, c: float) -> EquilibriumReport:
    """
    Complete a report with Hessian, quartic coefficients and eigenvalues

    Args:
        report: Report returned by find_equilibrium
        lambda1, lambda2: Rotated-frame curvatures
        c: Rescaled oblateness coefficient

    Returns:
        A new, completed EquilibriumReport

    Raises:
        NotAnEquilibrium: If the gradient does not vanish at the location
    """
    location = report.location
    gradient = gradient_hill(location, lambda1, lambda2, c)
    scale = max(1.0, gradient_scale_hill(location, lambda1, lambda2, c))
    if np.max(np.abs(gradient)) > GRADIENT_TOLERANCE * scale:
        raise NotAnEquilibrium(
            f'gradient {gradient} at {location} exceeds {GRADIENT_TOLERANCE} x {scale:.3g}'
        )

    hessian = hessian_hill(location, lambda1, lambda2, c)
    oxx, oyy, ozz = np.diag(hessian)
    a_coef = 4.0 - oxx - oyy
    b_coef = oxx * oyy
    # Same value as A^2 - 4B without cancelling the large terms.
    d_coef = 16.0 - 8.0 * (oxx + oyy) + (oxx - oyy) ** 2

    planar, krein = _planar_roots(a_coef, b_coef, d_coef)
    eigenvalues = np.array(planar + _square_root_pair(ozz), dtype=complex)

    return replace(
        report,
        hessian=hessian,
        quartic_coeffs=(float(a_coef), float(b_coef), float(d_coef)),
        eigenvalues=eigenvalues,
        stability_class=classify_spectrum(eigenvalues),
        krein=krein,
    )


def linearization_matrix(hessian: np.ndarray) -> np.ndarray:
    """6x6 Jacobian of the rotated equations at an equilibrium"""
    jacobian = np.zeros((6, 6))
    jacobian[:3, 3:] = np.eye(3)
    jacobian[3:, :3] = hessian
    jacobian[3, 4] = 2.0
    jacobian[4, 3] = -2.0
    return jacobian


def eigensolver_cross_check(report: EquilibriumReport) -> float:
    """
    Hausdorff distance between the factored roots and a dense eigensolve

    Returns:
        Distance relative to max(1, spectral radius)
    """
    if not report.is_complete:
        raise ValueError('report has no spectrum; run stability_spectrum first')
    dense = eigvals(linearization_matrix(report.hessian))
    factored = report.eigenvalues
    gaps = np.abs(factored[:, None] - dense[None, :])
    distance = max(gaps.min(axis=1).max(), gaps.min(axis=0).max())
    return float(distance / max(1.0, np.abs(factored).max()))


def series_coefficients(mu: float, m3: float) -> SeriesCoefficients:
    """
    Expansion of the x- and y-axis equilibria to first order in c

    Args:
        mu: Mass ratio in (0, 1/2]
        m3: Normalized tertiary mass

    Returns:
        SeriesCoefficients
    """
    k = mu - mu * mu
    d0 = math.sqrt(1.0 - 3.0 * k)
    d1 = -2.0 * k * m3 ** (2.0 / 3.0) / d0
    lambda10, lambda20, _ = rotation_eigenvalues(mu, 1.0)

    r_y0 = lambda10 ** (-1.0 / 3.0)
    r_x0 = lambda20 ** (-1.0 / 3.0)
    r_y1 = (-1.0 + d1 * r_y0 ** 5 / 2.0) / r_y0
    r_x1 = (-1.0 - d1 * r_x0 ** 5 / 2.0) / r_x0

    return SeriesCoefficients(
        d0=d0,
        d1=d1,
        lambda10=lambda10,
        lambda20=lambda20,
        r_y0=r_y0,
        r_y1=r_y1,
        r_x0=r_x0,
        r_x1=r_x1,
        alpha=1.0 / r_y0 ** 3,
        beta=-3.0 * r_y1 / r_y0 ** 4,
        alpha_prime=1.0 / r_x0 ** 3,
        beta_prime=-3.0 * r_x1 / r_x0 ** 4,
    )


@dataclass(frozen=True)
class ClassificationRow:
    mu: float
    r_star: float
    a_coef: float
    b_coef: float
    d_coef: float
    stability_class: StabilityType
    pattern_holds: bool


@dataclass(frozen=True)
class ClassificationSweep:
    axis: Axis
    c: float
    rows: List[ClassificationRow]
    # (mu below, mu above, bisected mu*) for each sign change of D
    sign_changes: List[Tuple[float, float, float]] = field(default_factory=list)
    note: Optional[str] = None


def _expected_pattern(axis: Axis, ozz: float, a_coef: float, b_coef: float, d_coef: float) -> bool:
    if axis == Axis.Z:
        return ozz < 0 and a_coef < 0 and d_coef < 0
    if axis == Axis.Y:
        return ozz < 0 and a_coef > 0 and b_coef > 0
    return ozz < 0 and a_coef < 0 and b_coef < 0 and d_coef > 0


def _classify_at(axis: Axis, mu: float, c: float, v: float) -> ClassificationRow:
    lambda1, lambda2, _ = rotation_eigenvalues(mu, v)
    report = stability_spectrum(find_equilibrium(axis, lambda1, lambda2, c), lambda1, lambda2, c)
    a_coef, b_coef, d_coef = report.quartic_coeffs
    return ClassificationRow(
        mu=mu,
        r_star=report.r_star,
        a_coef=a_coef,
        b_coef=b_coef,
        d_coef=d_coef,
        stability_class=report.stability_class,
        pattern_holds=_expected_pattern(axis, report.hessian_diag[2], a_coef, b_coef, d_coef),
    )


def _discriminant_at(axis: Axis, mu: float, c: float, v: float) -> float:
    return _classify_at(axis, mu, c, v).d_coef


def classify_over_parameters(
    axis: Axis,
    mu_grid: Sequence[float],
    c: float,
    v: float = 1.0,
    max_workers: Optional[int] = None,
) -> ClassificationSweep:
    """
    Stability type of one axis equilibrium across mass ratios

    Args:
        axis: Axis whose equilibrium is followed
        mu_grid: Increasing mass ratios in (0, 1/2]
        c: Rescaled oblateness coefficient (< 0 for the z-axis)
        v: Short side of the configuration
        max_workers: Thread cap for evaluating grid points

    Returns:
        ClassificationSweep in grid order, with bisected sign changes of D
    """
    axis = Axis(axis)
    mu_grid = [float(mu) for mu in mu_grid]
    if max_workers == 1:
        rows = [_classify_at(axis, mu, c, v) for mu in mu_grid]
    else:
        with ThreadPoolExecutor(max_workers=max_workers or None) as executor:
            rows = list(executor.map(lambda mu: _classify_at(axis, mu, c, v), mu_grid))

    sign_changes = []
    for below, above in zip(rows, rows[1:]):
        if (below.d_coef > 0) != (above.d_coef > 0):
            mu_star = bisect(
                lambda mu: _discriminant_at(axis, mu, c, v), below.mu, above.mu,
                xtol=MU_STAR_TOLERANCE,
            )
            sign_changes.append((below.mu, above.mu, mu_star))
            logger.info(
                f"D changes sign on the {axis}-axis between mu={below.mu:.6g} and "
                f"mu={above.mu:.6g}; mu*={mu_star:.10f}"
            )

    note = None
    if axis == Axis.Y and not sign_changes:
        note = 'no-sign-change'
        logger.warning(f"no-sign-change: D keeps its sign on the y-axis over {len(rows)} mass ratios")

    broken = [row.mu for row in rows if not row.pattern_holds]
    if broken:
        logger.warning(f"{axis}-axis sign pattern fails at mu={broken}")

    return ClassificationSweep(axis=axis, c=c, rows=rows, sign_changes=sign_changes, note=note)


@dataclass(frozen=True)
class KreinRow:
    r_z: float
    c: float
    a: float
    b: float

    @property
    def imag_gap(self) -> float:
        return abs(abs(self.b) - 1.0)


@dataclass(frozen=True)
class KreinCheck:
    rows: List[KreinRow]
    real_part_sign_constant: bool
    gap_monotone: bool
    max_imag_gap: float


def krein_limit_check(
    z_radius_grid: Sequence[float],
    lambda1: float,
    lambda2: float,
    max_workers: Optional[int] = None,
) -> KreinCheck:
    """
    Krein quartet a + ib of the z-axis equilibrium as r*_z -> 0

    Each radius r is turned into the coefficient c = (-r^2 - r^5)/6 for
    which it is the z-axis equilibrium.

    Returns:
        KreinCheck with rows in grid order, the sign test on a, and whether
        | |b| - 1 | shrinks monotonically toward small radii
    """
    def evaluate(r):
        c = (-r * r - r ** 5) / 6.0
        seed = EquilibriumReport(axis=Axis.Z, r_star=r, location=_axis_location(Axis.Z, r))
        report = stability_spectrum(seed, lambda1, lambda2, c)
        if report.krein is None:
            raise NotAnEquilibrium(f'z-axis spectrum at r={r} has no complex quartet')
        a, b = report.krein
        return KreinRow(r_z=float(r), c=c, a=a, b=b)

    radii = [float(r) for r in z_radius_grid]
    if max_workers == 1:
        rows = [evaluate(r) for r in radii]
    else:
        with ThreadPoolExecutor(max_workers=max_workers or None) as executor:
            rows = list(executor.map(evaluate, radii))

    signs = {math.copysign(1.0, row.a) for row in rows if row.a != 0.0}
    real_part_sign_constant = len(signs) == 1 and all(row.a != 0.0 for row in rows)

    by_radius = sorted(rows, key=lambda row: row.r_z)
    gap_monotone = all(
        smaller.imag_gap <= larger.imag_gap
        for smaller, larger in zip(by_radius, by_radius[1:])
    )
    return KreinCheck(
        rows=rows,
        real_part_sign_constant=real_part_sign_constant,
        gap_monotone=gap_monotone,
        max_imag_gap=max(row.imag_gap for row in rows),
    )
