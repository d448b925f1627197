"""
Physical inputs, unit normalization and derived model constants.

Units: total mass m1 + m2 + m3 = 1, the long side of the central
configuration u = r13 = r23 = 1 (the Sun-Jupiter distance), and time such
that the configuration rotates with unit angular velocity. Hill-scale
lengths are a further m3^(1/3) smaller.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .exceptions import InvalidPhysicalInput, ProlateUnsupported
from .hill_model import rotation_eigenvalues

logger = logging.getLogger(__name__)

# Gravitational constant in km^3 kg^-1 s^-2
GRAVITATIONAL_CONSTANT_KM = 6.6743e-20

# Distance of Hektor's moonlet Skamandrios from the primary, km
MOONLET_DISTANCE_KM = 957.5


@dataclass(frozen=True)
class PhysicalInputs:
    """Masses in kg, lengths in km, spin period in hours"""

    mass_primary: float
    mass_secondary: float
    mass_tertiary: float
    distance_primary_secondary: float
    equivalent_radius_tertiary: float
    c20: float
    spin_period_tertiary: Optional[float] = None

    def validate(self) -> 'PhysicalInputs':
        """
        Check the ordering and sign constraints

        Raises:
            ProlateUnsupported: If c20 > 0
            InvalidPhysicalInput: For non-positive or mis-ordered masses and lengths
        """
        values = {
            'mass_primary': self.mass_primary,
            'mass_secondary': self.mass_secondary,
            'mass_tertiary': self.mass_tertiary,
            'distance_primary_secondary': self.distance_primary_secondary,
            'equivalent_radius_tertiary': self.equivalent_radius_tertiary,
        }
        for name, value in values.items():
            if not (math.isfinite(value) and value > 0):
                raise InvalidPhysicalInput(f'{name} must be positive, got {value}')
        if not self.mass_primary >= self.mass_secondary >= self.mass_tertiary:
            raise InvalidPhysicalInput(
                'masses must satisfy mass_primary >= mass_secondary >= mass_tertiary'
            )
        if not math.isfinite(self.c20):
            raise InvalidPhysicalInput(f'c20 must be finite, got {self.c20}')
        if self.c20 > 0:
            raise ProlateUnsupported(f'c20 = {self.c20} describes a prolate tertiary')
        if self.spin_period_tertiary is not None and self.spin_period_tertiary <= 0:
            raise InvalidPhysicalInput(
                f'spin_period_tertiary must be positive, got {self.spin_period_tertiary}'
            )
        return self


HEKTOR = PhysicalInputs(
    mass_primary=1.989e30,
    mass_secondary=1.898e27,
    mass_tertiary=7.91e18,
    distance_primary_secondary=778.5e6,
    equivalent_radius_tertiary=92.0,
    c20=-0.476775,
    spin_period_tertiary=6.92,
)


def shape_ratio(big_c: float) -> Tuple[float, float]:
    """
    Short side v = (1 + 3C)^(-1/3) of the unit-u configuration

    Returns:
        (v, v - 1), the defect evaluated without cancellation
    """
    defect = math.expm1(-math.log1p(3.0 * big_c) / 3.0)
    return 1.0 + defect, defect


def hill_v(little_c: float, m3: float) -> float:
    """Short side v from the rescaled coefficient: (1 - 3 m3^(2/3) c)^(-1/3)"""
    return math.exp(-math.log1p(-3.0 * m3 ** (2.0 / 3.0) * little_c) / 3.0)


@dataclass(frozen=True)
class SystemParams:
    """Normalized constants of the model; immutable once built"""

    mu: float
    m1: float
    m2: float
    m3: float
    r3: float
    rho3: float
    c20: float
    big_c: float
    little_c: float
    v: float
    v_defect: float
    omega_squared: float
    lambda1: float
    lambda2: float
    d: float
    distance_km: float
    spin_period_hours: Optional[float] = None

    @property
    def omega(self) -> float:
        return math.sqrt(self.omega_squared)

    @property
    def c_prime(self) -> float:
        """R3^2 C20 / 2, the oblateness factor of the four-body potential"""
        return self.r3 * self.r3 * self.c20 / 2.0

    @property
    def hill_length_km(self) -> float:
        return self.m3 ** (1.0 / 3.0) * self.distance_km

    @property
    def radius_km(self) -> float:
        return self.r3 * self.distance_km

    def hill_to_km(self, length_hill: float) -> float:
        return length_hill * self.hill_length_km

    def with_c20(self, c20: float) -> 'SystemParams':
        """Same masses and radius, different zonal coefficient"""
        return SystemParams.from_normalized(
            self.mu, self.m3, self.r3, c20, self.distance_km, self.spin_period_hours
        )

    @classmethod
    def from_normalized(
        cls,
        mu: float,
        m3: float,
        r3: float,
        c20: float,
        distance_km: float = 1.0,
        spin_period_hours: Optional[float] = None,
    ) -> 'SystemParams':
        """
        Build the parameter record from normalized quantities

        Args:
            mu: m2 / (m1 + m2), in (0, 1/2]
            m3: Tertiary mass with m1 + m2 + m3 = 1
            r3: Tertiary radius in units of the primary-secondary distance
            c20: Zonal coefficient (<= 0)
            distance_km: Length of the distance unit, km
            spin_period_hours: Tertiary spin period (informational)

        Returns:
            SystemParams with every derived field populated
        """
        if not 0.0 < mu <= 0.5:
            raise InvalidPhysicalInput(f'mu must lie in (0, 1/2], got {mu}')
        if not 0.0 < m3 < 1.0 or r3 <= 0.0 or distance_km <= 0.0:
            raise InvalidPhysicalInput('m3, r3 and distance_km must be positive (m3 < 1)')
        if c20 > 0:
            raise ProlateUnsupported(f'c20 = {c20} describes a prolate tertiary')

        big_c = -r3 * r3 * c20 / 2.0
        rho3 = r3 / m3 ** (1.0 / 3.0)
        little_c = rho3 * rho3 * c20 / 2.0
        v, v_defect = shape_ratio(big_c)
        lambda1, lambda2, d = rotation_eigenvalues(mu, v)

        return cls(
            mu=mu,
            m1=(1.0 - m3) * (1.0 - mu),
            m2=(1.0 - m3) * mu,
            m3=m3,
            r3=r3,
            rho3=rho3,
            c20=c20,
            big_c=big_c,
            little_c=little_c,
            v=v,
            v_defect=v_defect,
            omega_squared=1.0 + 3.0 * big_c,
            lambda1=lambda1,
            lambda2=lambda2,
            d=d,
            distance_km=distance_km,
            spin_period_hours=spin_period_hours,
        )


def normalize_system(inputs: PhysicalInputs) -> SystemParams:
    """
    Normalize physical inputs

    Args:
        inputs: Masses (kg), distance and radius (km), C20

    Returns:
        SystemParams for the normalized model

    Raises:
        ProlateUnsupported: If c20 > 0
        InvalidPhysicalInput: For non-positive or mis-ordered inputs
    """
    inputs.validate()

    total = inputs.mass_primary + inputs.mass_secondary + inputs.mass_tertiary
    mu = inputs.mass_secondary / (inputs.mass_primary + inputs.mass_secondary)
    params = SystemParams.from_normalized(
        mu=mu,
        m3=inputs.mass_tertiary / total,
        r3=inputs.equivalent_radius_tertiary / inputs.distance_primary_secondary,
        c20=inputs.c20,
        distance_km=inputs.distance_primary_secondary,
        spin_period_hours=inputs.spin_period_tertiary,
    )
    logger.info(
        f"Normalized system: mu={params.mu:.10g}, m3={params.m3:.6g}, "
        f"c={params.little_c:.6g}, 1-v={-params.v_defect:.3g}"
    )
    return params


def hill_to_km(length_hill: float, params: SystemParams) -> float:
    """Convert a Hill-scale length to km: length * m3^(1/3) * distance"""
    return params.hill_to_km(length_hill)
