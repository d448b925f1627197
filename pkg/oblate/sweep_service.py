import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
from django.conf import settings

from .central_config import TriangleConfig, central_configuration
from .core_types import (
    GRAVITATIONAL_CONSTANT_KM,
    MOONLET_DISTANCE_KM,
    PhysicalInputs,
    SystemParams,
)
from .equilibria import (
    Axis,
    ClassificationSweep,
    EquilibriumReport,
    approx_z_distance,
    classify_over_parameters,
    eigensolver_cross_check,
    find_equilibrium,
    krein_limit_check,
    stability_spectrum,
)
from .exceptions import ConfigError, NoZEquilibrium
from .harmonics import EllipsoidShape, ellipsoid_coefficients
from .hill_model import rotation_eigenvalues
from .propagate import Model, Trajectory, integrate
from .states import PhaseState

logger = logging.getLogger(__name__)

FORCES_RANGE_KM = (100.0, 1e6)


class SweepService:
    """Service class producing the tables emitted by the hill4body command"""

    @classmethod
    def max_workers(cls) -> Optional[int]:
        """Thread cap from settings; None lets the executor decide"""
        threads = settings.HILL4BODY.get('THREADS') or 0
        return threads if threads > 0 else None

    @classmethod
    def map_ordered(cls, func: Callable, items: Iterable) -> List[Any]:
        """
        Evaluate func over items, possibly in parallel

        Results come back in input order regardless of completion order.
        """
        items = list(items)
        workers = cls.max_workers()
        if workers == 1 or len(items) < 2:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(func, items))

    @classmethod
    def harmonics(cls, shape: EllipsoidShape, max_degree: int) -> List[Dict[str, float]]:
        return ellipsoid_coefficients(shape, max_degree).rows()

    @classmethod
    def central_config(cls, params: SystemParams) -> Dict[str, Any]:
        """
        Vertices of the unit-u configuration with its residuals

        Returns:
            Dict with 'triangle', 'rows' (body, x, y), 'max_residual' and
            'r12_shift_km', the change of the primary-secondary distance
            against the equilateral configuration
        """
        triangle = central_configuration(params)
        residuals = list(triangle.constraint_residuals().values())
        residuals += list(triangle.stationarity_residuals())
        rows = [
            {'body': index, 'x': float(x) + 0.0, 'y': float(y)}
            for index, (x, y) in enumerate(triangle.vertices, start=1)
        ]
        return {
            'triangle': triangle,
            'rows': rows,
            'max_residual': max(abs(r) for r in residuals),
            'r12_shift_km': params.v_defect * params.distance_km,
        }

    @classmethod
    def equilibria(cls, params: SystemParams, non_oblate: bool = False) -> List[Dict[str, Any]]:
        """
        The six axis equilibria (four without oblateness) with km distances

        Args:
            params: Normalized system constants
            non_oblate: Evaluate the c = 0, v = 1 continuation instead
        """
        if non_oblate:
            lambda1, lambda2, _ = rotation_eigenvalues(params.mu, 1.0)
            c = 0.0
        else:
            lambda1, lambda2, c = params.lambda1, params.lambda2, params.little_c

        rows = []
        for axis in Axis:
            try:
                report = find_equilibrium(axis, lambda1, lambda2, c)
            except NoZEquilibrium:
                logger.info("No z-axis equilibrium in the non-oblate model")
                continue
            for sign in (1.0, -1.0):
                x, y, z = sign * report.location
                rows.append({
                    'axis': axis.value,
                    'r_star': report.r_star,
                    'x': float(x) + 0.0,
                    'y': float(y) + 0.0,
                    'z': float(z) + 0.0,
                    'r_km': params.hill_to_km(report.r_star),
                    'residual': float(report.residual),
                })
        return rows

    @classmethod
    def stability(cls, params: SystemParams) -> List[EquilibriumReport]:
        """Completed reports for the positive x-, y- and z-axis equilibria"""
        lambda1, lambda2, c = params.lambda1, params.lambda2, params.little_c
        reports = []
        for axis in Axis:
            try:
                located = find_equilibrium(axis, lambda1, lambda2, c)
            except NoZEquilibrium:
                logger.info("No z-axis equilibrium without oblateness; skipping its stability row")
                continue
            report = stability_spectrum(located, lambda1, lambda2, c)
            gap = eigensolver_cross_check(report)
            logger.info(f"{axis}-axis: {report.stability_class}; dense eigensolver gap {gap:.2e}")
            reports.append(report)
        return reports

    @classmethod
    def forces(
        cls,
        inputs: PhysicalInputs,
        params: SystemParams,
        distances_km: Sequence[float],
        tidal: bool = False,
    ) -> List[Dict[str, Any]]:
        """
        Orders of magnitude of the accelerations felt near the tertiary

        The particle sits at distance r from the tertiary along its spin
        axis. The solar and Jovian terms are direct attractions at the
        tertiary's vertex; with ``tidal`` the differential accelerations
        between particle and tertiary are added. The moonlet distance is
        always part of the grid.

        Returns:
            Rows sorted by r_km, accelerations in km/s^2 as log10
        """
        low, high = FORCES_RANGE_KM
        distances = sorted({float(r) for r in distances_km} | {MOONLET_DISTANCE_KM})
        for r in distances:
            if not low <= r <= high:
                raise ConfigError(f'distance {r} km outside [{low}, {high}] km')

        triangle = central_configuration(params)
        gm_h = GRAVITATIONAL_CONSTANT_KM * inputs.mass_tertiary
        gm_sun = GRAVITATIONAL_CONSTANT_KM * inputs.mass_primary
        gm_jup = GRAVITATIONAL_CONSTANT_KM * inputs.mass_secondary
        vertices_km = np.column_stack([triangle.vertices, np.zeros(3)]) * params.distance_km
        sun, jupiter, hektor = vertices_km
        d_sun = float(np.linalg.norm(sun - hektor))
        d_jup = float(np.linalg.norm(jupiter - hektor))
        radius = inputs.equivalent_radius_tertiary

        def differential(gm, body, r):
            particle = hektor + np.array([0.0, 0.0, r])
            to_body_p = body - particle
            to_body_h = body - hektor
            accel = (gm * to_body_p / np.linalg.norm(to_body_p) ** 3
                     - gm * to_body_h / np.linalg.norm(to_body_h) ** 3)
            return float(np.linalg.norm(accel))

        rows = []
        for r in distances:
            row = {
                'r_km': r,
                'log10_monopole': math.log10(gm_h / r ** 2),
                'log10_sun': math.log10(gm_sun / d_sun ** 2),
                'log10_jupiter': math.log10(gm_jup / d_jup ** 2),
                'log10_j2': math.log10(1.5 * gm_h * radius ** 2 * abs(inputs.c20) / r ** 4),
            }
            if tidal:
                row['log10_sun_tidal'] = math.log10(differential(gm_sun, sun, r))
                row['log10_jupiter_tidal'] = math.log10(differential(gm_jup, jupiter, r))
            row['moonlet'] = r == MOONLET_DISTANCE_KM
            rows.append(row)
        return rows

    @classmethod
    def sweep_z(cls, params: SystemParams, c20_grid: Sequence[float]) -> List[Dict[str, float]]:
        """z-axis equilibrium against C20, exact and dominant-balance"""
        for c20 in c20_grid:
            if not -1.0 < c20 < 0.0:
                raise ConfigError(f'c20 grid value {c20} outside (-1, 0)')

        def evaluate(c20):
            varied = params.with_c20(float(c20))
            report = find_equilibrium(Axis.Z, varied.lambda1, varied.lambda2, varied.little_c)
            return {
                'c20': float(c20),
                'c': varied.little_c,
                'r_z_hill': report.r_star,
                'r_z_km': varied.hill_to_km(report.r_star),
                'r_hat_z_km': approx_z_distance(varied.radius_km, float(c20)),
            }

        return cls.map_ordered(evaluate, c20_grid)

    @classmethod
    def sweep_krein(cls, params: SystemParams, r_z_grid: Sequence[float]):
        for r in r_z_grid:
            if not r > 0:
                raise ConfigError(f'r_z grid value {r} must be positive')
        check = krein_limit_check(r_z_grid, params.lambda1, params.lambda2, max_workers=cls.max_workers())
        if not check.real_part_sign_constant:
            logger.warning("Krein real part changes sign over the sweep")
        logger.info(f"Krein sweep: max | |b| - 1 | = {check.max_imag_gap:.3e}")
        return check

    @classmethod
    def classify(cls, params: SystemParams, axis: Axis, mu_grid: Sequence[float]) -> ClassificationSweep:
        for mu in mu_grid:
            if not 0.0 < mu <= 0.5:
                raise ConfigError(f'mu grid value {mu} outside (0, 1/2]')
        return classify_over_parameters(
            axis, mu_grid, params.little_c, v=params.v, max_workers=cls.max_workers()
        )

    @classmethod
    def integrate(
        cls,
        params: SystemParams,
        initial: PhaseState,
        t_end: float,
        samples: int,
        model: Model,
        rel_tol: float,
        abs_tol: float,
        triangle: Optional[TriangleConfig] = None,
    ) -> Trajectory:
        if model == Model.FOUR_BODY and triangle is None:
            triangle = central_configuration(params)
        t_eval = np.linspace(0.0, t_end, samples) if samples >= 2 else None
        return integrate(initial, (0.0, t_end), rel_tol, abs_tol, model, params, triangle, t_eval=t_eval)
