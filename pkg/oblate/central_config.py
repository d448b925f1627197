"""
Triangular central configuration of Sun, Jupiter and an oblate tertiary.

With the tertiary's oblateness C the configuration is isosceles: the two
sides meeting at the tertiary have length u and the primary-secondary side
has length v < u. The Lagrange system (time scaled so that G = 1)

    -1/r12^2 + omega^2 r12 = 0
    -1/r13^2 - 3C/r13^4 + omega^2 r13 = 0

gives v = (u^5 / (u^2 + 3C))^(1/3) and, for u = 1, omega^2 = 1 + 3C.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from scipy.optimize import brentq

from .core_types import SystemParams, shape_ratio
from .exceptions import DegenerateK, NoBracket

logger = logging.getLogger(__name__)

BRACKET_DECADES = 12
POINTS_PER_DECADE = 64
NEWTON_POLISH_STEPS = 2


@dataclass(frozen=True, eq=False)
class TriangleConfig:
    """Side lengths, rotation rate and synodic vertex coordinates"""

    u: float
    v: float
    omega: float
    masses: Tuple[float, float, float]
    vertices: np.ndarray
    big_c: float = 0.0

    def side_lengths(self) -> Dict[str, float]:
        p1, p2, p3 = self.vertices
        return {
            'r12': float(np.linalg.norm(p1 - p2)),
            'r13': float(np.linalg.norm(p1 - p3)),
            'r23': float(np.linalg.norm(p2 - p3)),
        }

    def barycenter(self) -> np.ndarray:
        return np.asarray(self.masses) @ self.vertices

    def constraint_residuals(self) -> Dict[str, float]:
        """Distance, barycenter, mass-sum and orientation residuals"""
        sides = self.side_lengths()
        center = self.barycenter()
        return {
            'r12': sides['r12'] - self.v,
            'r13': sides['r13'] - self.u,
            'r23': sides['r23'] - self.u,
            'barycenter_x': float(center[0]),
            'barycenter_y': float(center[1]),
            'mass_sum': float(sum(self.masses)) - 1.0,
            'y1': float(self.vertices[0, 1]),
        }

    def stationarity_residuals(self) -> Tuple[float, float, float]:
        return stationarity_residuals(self.u, self.v, self.omega, self.big_c)


def stationarity_residuals(u: float, v: float, omega: float, big_c: float) -> Tuple[float, float, float]:
    """Residuals of the three Lagrange equations for r12 = v, r13 = r23 = u"""
    w2 = omega * omega
    side12 = -1.0 / v ** 2 + w2 * v
    side13 = -1.0 / u ** 2 - 3.0 * big_c / u ** 4 + w2 * u
    return side12, side13, side13


def solve_shape_unit_u(big_c: float) -> Tuple[float, float]:
    """
    Shape and rotation rate for u = 1

    Returns:
        (v, omega) with v = (1 + 3C)^(-1/3), omega = (1 + 3C)^(1/2)
    """
    if big_c < 0:
        raise ValueError(f'big_c must be >= 0, got {big_c}')
    v, _ = shape_ratio(big_c)
    return v, math.sqrt(1.0 + 3.0 * big_c)


def _geometric_bracket(func, upper: float) -> Tuple[float, float]:
    """Scan z = upper * 10^(-k/64) downwards until func changes sign"""
    hi = upper
    f_hi = func(hi)
    for k in range(1, BRACKET_DECADES * POINTS_PER_DECADE + 1):
        lo = upper * 10.0 ** (-k / POINTS_PER_DECADE)
        f_lo = func(lo)
        if f_lo == 0.0 or (f_lo < 0.0) != (f_hi < 0.0):
            return lo, hi
        hi, f_hi = lo, f_lo
    raise NoBracket(f'no sign change within {BRACKET_DECADES} decades below {upper}')


def solve_shape_fixed_inertia(
    m1: float, m2: float, m3: float, big_c: float, inertia_bar: float
) -> Tuple[float, float]:
    """
    Side lengths of the configuration with prescribed moment of inertia

    With z = u^2 the stationarity conditions reduce to
    a z^5 / (z + b)^2 = (I - c z)^3, a = (m1 m2)^3, b = 3C, c = m3 (m1 + m2),
    whose left side increases and right side decreases on (0, I/c]. The
    cube root of both sides is solved, which is the inertia identity
    m1 m2 v^2 + c u^2 = I written in z.

    Args:
        m1, m2, m3: Normalized masses (sum 1)
        big_c: Oblateness coefficient C >= 0
        inertia_bar: Moment of inertia I > 0

    Returns:
        (u, v)

    Raises:
        NoBracket: If inertia_bar <= 0 or no sign change is found
    """
    if not inertia_bar > 0:
        raise NoBracket(f'moment of inertia must be positive, got {inertia_bar}')

    m12 = m1 * m2
    b = 3.0 * big_c
    c = m3 * (m1 + m2)

    def residual(z):
        return m12 * (z ** 5 / (z + b) ** 2) ** (1.0 / 3.0) - (inertia_bar - c * z)

    def slope(z):
        ratio = (z ** 5 / (z + b) ** 2) ** (1.0 / 3.0)
        return m12 * ratio * (5.0 / (3.0 * z) - 2.0 / (3.0 * (z + b))) + c

    if not c > 0:
        raise NoBracket(f'tertiary coupling m3 (m1 + m2) must be positive, got {c}')
    upper = inertia_bar / c
    lo, hi = _geometric_bracket(residual, upper)
    z = brentq(residual, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps)
    for _ in range(NEWTON_POLISH_STEPS):
        step = residual(z) / slope(z)
        if not math.isfinite(step):
            break
        z -= step

    u = math.sqrt(z)
    v = (u ** 5 / (u * u + b)) ** (1.0 / 3.0)
    logger.debug(f"Fixed-inertia configuration: u={u:.17g}, v={v:.17g}")
    return u, v


def vertex_positions(m2: float, m3: float, v: float, u: float = 1.0) -> np.ndarray:
    """
    Synodic coordinates of the three bodies, barycentre at the origin

    Orientation: body 1 on the negative x-axis, tertiary above the axis.

    Args:
        m2, m3: Normalized secondary and tertiary masses
        v: Primary-secondary side
        u: Length of the two sides meeting at the tertiary

    Returns:
        (3, 2) array of (x_i, y_i)
    """
    s = v / u
    s2 = s * s
    height = s * math.sqrt(4.0 - s2)
    big_s = math.sqrt(s2 * m2 * m2 + s2 * m2 * m3 + m3 * m3)

    if big_s == 0.0:
        vertices = np.array([
            [0.0, 0.0],
            [s, 0.0],
            [s / 2.0, math.sqrt(4.0 - s2) / 2.0],
        ])
        return u * vertices

    shared = 2.0 * s2 * m2 * m2 + 2.0 * s2 * m2 * m3 + 2.0 * m3 * m3
    vertices = np.array([
        [-big_s, 0.0],
        [(2.0 * s2 * m2 + s2 * m3 - shared) / (2.0 * big_s), -height * m3 / (2.0 * big_s)],
        [(s2 * m2 + 2.0 * m3 - shared) / (2.0 * big_s), height * m2 / (2.0 * big_s)],
    ])
    return u * vertices


def baltagiannis_positions(m1: float, m2: float, m3: float) -> np.ndarray:
    """
    Equilateral (v = 1) coordinates in the K-based form

    Kept as an independent cross-check of vertex_positions.

    Raises:
        DegenerateK: If K = m2 (m3 - m2) + m1 (m2 + 2 m3) vanishes
    """
    k = m2 * (m3 - m2) + m1 * (m2 + 2.0 * m3)
    if k == 0.0:
        raise DegenerateK(f'K vanishes for masses ({m1}, {m2}, {m3})')
    root = math.sqrt(m2 * m2 + m2 * m3 + m3 * m3)
    sign = abs(k) / k
    tail = math.sqrt(m2 ** 3 / root ** 2)
    return np.array([
        [-sign * root, 0.0],
        [sign * ((m2 - m3) * m3 + m1 * (2.0 * m2 + m3)) / (2.0 * root),
         -math.sqrt(3.0) * m3 / (2.0 * m2 ** 1.5) * tail],
        [abs(k) / (2.0 * root), math.sqrt(3.0) / (2.0 * math.sqrt(m2)) * tail],
    ])


def central_configuration(params: SystemParams) -> TriangleConfig:
    """Unit-u configuration for the given system"""
    v, omega = solve_shape_unit_u(params.big_c)
    vertices = vertex_positions(params.m2, params.m3, v)
    return TriangleConfig(
        u=1.0,
        v=v,
        omega=omega,
        masses=(params.m1, params.m2, params.m3),
        vertices=vertices,
        big_c=params.big_c,
    )
