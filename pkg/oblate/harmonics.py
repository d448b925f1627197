"""
Spherical-harmonic coefficients of a homogeneous triaxial ellipsoid and the
degree-2 zonal potential used by the dynamical models.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
from scipy.special import gammaln

from .exceptions import InvalidDegree, InvalidShape, SingularityError


@dataclass(frozen=True)
class EllipsoidShape:
    """Semi-axes a >= b >= c and reference radius, all in km"""

    a: float
    b: float
    c: float
    reference_radius: float

    def validate(self) -> 'EllipsoidShape':
        if not (self.a >= self.b >= self.c > 0):
            raise InvalidShape(
                f'semi-axes must satisfy a >= b >= c > 0, got ({self.a}, {self.b}, {self.c})'
            )
        if not self.reference_radius > 0:
            raise InvalidShape(f'reference radius must be positive, got {self.reference_radius}')
        return self


# Hektor modelled as an ellipsoid (Descamps' shape), equivalent radius 92 km
HEKTOR_SHAPE = EllipsoidShape(a=208.0, b=65.5, c=60.0, reference_radius=92.0)


@dataclass(frozen=True)
class HarmonicSet:
    """
    Cosine coefficients C_nm of an ellipsoid

    Only even (n, m) are stored; odd entries and every S_nm are zero.
    """

    max_degree: int
    coefficients: Dict[Tuple[int, int], float] = field(default_factory=dict)

    def get(self, n: int, m: int) -> float:
        if m > n or n > self.max_degree:
            raise KeyError((n, m))
        return self.coefficients.get((n, m), 0.0)

    def __getitem__(self, key: Tuple[int, int]) -> float:
        return self.get(*key)

    def sine(self, n: int, m: int) -> float:
        return 0.0

    def rows(self) -> List[Dict[str, float]]:
        return [
            {'n': n, 'm': m, 'C_nm': value}
            for (n, m), value in sorted(self.coefficients.items())
        ]


def ellipsoid_coefficients(shape: EllipsoidShape, max_degree: int) -> HarmonicSet:
    """
    Boyce closed form for C_{2p,2q} of a homogeneous ellipsoid

    C_{2p,2q} = 3 / R^{2p} * p! (2p-2q)! / (2^{2q} (2p+3) (2p+1)!) * (2 - delta_{0q})
                * sum_i (a^2-b^2)^{q+2i} (c^2 - (a^2+b^2)/2)^{p-q-2i}
                        / (16^i (p-q-2i)! (q+i)! i!)

    Lengths are divided by R first, and the factorials are combined through
    log-gamma, so the degree is not limited by factorial overflow.

    Args:
        shape: Ellipsoid semi-axes and reference radius
        max_degree: Highest even degree to compute (>= 2)

    Returns:
        HarmonicSet with every C_{2p,2q}, 2p <= max_degree
    """
    if max_degree < 2 or max_degree % 2:
        raise InvalidDegree(f'max_degree must be an even integer >= 2, got {max_degree}')
    shape.validate()

    radius = shape.reference_radius
    a2 = (shape.a / radius) ** 2
    b2 = (shape.b / radius) ** 2
    c2 = (shape.c / radius) ** 2
    split = a2 - b2
    flattening = c2 - 0.5 * (a2 + b2)

    coefficients = {}
    for p in range(max_degree // 2 + 1):
        for q in range(p + 1):
            log_prefactor = (
                gammaln(p + 1) + gammaln(2 * p - 2 * q + 1)
                - 2 * q * math.log(2.0) - math.log(2 * p + 3) - gammaln(2 * p + 2)
            )
            prefactor = 3.0 * math.exp(log_prefactor) * (1.0 if q == 0 else 2.0)

            total = 0.0
            for i in range((p - q) // 2 + 1):
                weight = math.exp(-(
                    i * math.log(16.0) + gammaln(p - q - 2 * i + 1)
                    + gammaln(q + i + 1) + gammaln(i + 1)
                ))
                total += split ** (q + 2 * i) * flattening ** (p - q - 2 * i) * weight

            coefficients[(2 * p, 2 * q)] = prefactor * total

    return HarmonicSet(max_degree=max_degree, coefficients=coefficients)


def c20_c22(shape: EllipsoidShape) -> Tuple[float, float]:
    """Degree-2 coefficients in closed form"""
    shape.validate()
    r2 = shape.reference_radius ** 2
    a2, b2, c2 = shape.a ** 2, shape.b ** 2, shape.c ** 2
    return (c2 - a2 / 2.0 - b2 / 2.0) / (5.0 * r2), (a2 / 4.0 - b2 / 4.0) / (5.0 * r2)


def j2_potential(point, gm: float, radius: float, c20: float) -> float:
    """
    Monopole plus C20 potential, body-centred frame with z along the spin axis

    V = (gm / r) [1 + (radius / r)^2 (c20 / 2) (3 (z / r)^2 - 1)]
    """
    x, y, z = point
    r = math.sqrt(x * x + y * y + z * z)
    if r == 0.0:
        raise SingularityError('zonal potential evaluated at the origin')
    return gm / r * (1.0 + (radius / r) ** 2 * (c20 / 2.0) * (3.0 * (z / r) ** 2 - 1.0))


def j2_potential_gradient(point, gm: float, radius: float, c20: float) -> np.ndarray:
    x, y, z = point
    r = math.sqrt(x * x + y * y + z * z)
    if r == 0.0:
        raise SingularityError('zonal potential evaluated at the origin')
    position = np.array([x, y, z], dtype=float)
    k = gm * radius * radius * c20 / 2.0
    r3, r5, r7 = r ** 3, r ** 5, r ** 7
    gradient = -gm * position / r3
    gradient += k * (3.0 * position / r5 - 15.0 * z * z * position / r7)
    gradient[2] += k * 6.0 * z / r5
    return gradient
