import math

import numpy as np
from django.test import SimpleTestCase

from oblate.central_config import (
    baltagiannis_positions,
    central_configuration,
    solve_shape_fixed_inertia,
    solve_shape_unit_u,
    stationarity_residuals,
    vertex_positions,
)
from oblate.core_types import HEKTOR, SystemParams, normalize_system, shape_ratio
from oblate.exceptions import DegenerateK, NoBracket
from oblate.sweep_service import SweepService


class UnitShapeTests(SimpleTestCase):
    def test_spherical_tertiary_is_equilateral(self):
        self.assertEqual(solve_shape_unit_u(0.0), (1.0, 1.0))

    def test_shape_solves_lagrange_system(self):
        for big_c in (1e-15, 1e-6, 0.01, 0.2):
            v, omega = solve_shape_unit_u(big_c)
            residuals = stationarity_residuals(1.0, v, omega, big_c)
            self.assertLess(max(abs(r) for r in residuals), 1e-12)
            self.assertLess(v, 1.0)

    def test_negative_coefficient_rejected(self):
        with self.assertRaises(ValueError):
            solve_shape_unit_u(-0.1)


class VertexPositionTests(SimpleTestCase):
    def test_constraint_residuals_random_systems(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            params = SystemParams.from_normalized(
                mu=rng.uniform(1e-4, 0.5),
                m3=10 ** rng.uniform(-12, -1),
                r3=10 ** rng.uniform(-6, -2),
                c20=-rng.uniform(0.0, 0.9),
            )
            triangle = central_configuration(params)
            residuals = triangle.constraint_residuals()
            self.assertLess(max(abs(r) for r in residuals.values()), 1e-12, residuals)
            self.assertLess(max(abs(r) for r in triangle.stationarity_residuals()), 1e-12)

    def test_tertiary_above_axis(self):
        triangle = central_configuration(normalize_system(HEKTOR))
        self.assertLess(triangle.vertices[0, 0], 0.0)
        self.assertGreater(triangle.vertices[2, 1], 0.0)

    def test_massless_limit(self):
        vertices = vertex_positions(0.0, 0.0, 1.0)
        self.assertTrue(np.allclose(vertices, [[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]]))

    def test_equal_masses(self):
        third = 1.0 / 3.0
        expected = baltagiannis_positions(third, third, third)
        self.assertAlmostEqual(expected[2, 0], math.sqrt(3) / 6, delta=1e-15)
        self.assertAlmostEqual(expected[2, 1], 0.5, delta=1e-15)
        self.assertLess(np.max(np.abs(vertex_positions(third, third, 1.0) - expected)), 1e-12)

    def test_cross_formula_agreement(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            m2, m3 = sorted(rng.uniform(0.01, 0.33, 2), reverse=True)
            m1 = 1.0 - m2 - m3
            self.assertLess(
                np.max(np.abs(vertex_positions(m2, m3, 1.0) - baltagiannis_positions(m1, m2, m3))),
                1e-12,
            )

    def test_degenerate_k(self):
        with self.assertRaises(DegenerateK):
            baltagiannis_positions(0.0, 0.5, 0.5)


class FixedInertiaTests(SimpleTestCase):
    def test_inertia_identity(self):
        m1, m2, m3 = 0.6, 0.3, 0.1
        for big_c, inertia in ((0.0, 0.5), (0.01, 0.5), (0.05, 2.0)):
            u, v = solve_shape_fixed_inertia(m1, m2, m3, big_c, inertia)
            total = m1 * m2 * v * v + m3 * (m1 + m2) * u * u
            self.assertAlmostEqual(total / inertia, 1.0, delta=1e-12)
            self.assertAlmostEqual(v ** 3 * (u * u + 3 * big_c), u ** 5, delta=1e-12 * u ** 5)

    def test_spherical_case_is_equilateral(self):
        u, v = solve_shape_fixed_inertia(0.6, 0.3, 0.1, 0.0, 0.5)
        self.assertAlmostEqual(u, v, delta=1e-12)

    def test_non_positive_inertia(self):
        with self.assertRaises(NoBracket):
            solve_shape_fixed_inertia(0.6, 0.3, 0.1, 0.01, 0.0)

    def test_equal_masses_unit_inertia(self):
        third = 1.0 / 3.0
        u, v = solve_shape_fixed_inertia(third, third, third, 0.0, third)
        self.assertAlmostEqual(u, 1.0, delta=1e-12)
        self.assertAlmostEqual(v, 1.0, delta=1e-12)

    def test_hektor_inertia_recovers_unit_side(self):
        params = normalize_system(HEKTOR)
        v, _ = shape_ratio(params.big_c)
        inertia = params.m1 * params.m2 * v * v + params.m3 * (params.m1 + params.m2)
        u, v_found = solve_shape_fixed_inertia(params.m1, params.m2, params.m3, params.big_c, inertia)
        self.assertAlmostEqual(u, 1.0, delta=1e-12)
        self.assertAlmostEqual(v_found, v, delta=1e-12)

    def test_inertia_equation_crosses_once(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            m2, m3 = sorted(rng.uniform(0.01, 0.33, 2), reverse=True)
            m1 = 1.0 - m2 - m3
            big_c, inertia = rng.uniform(0.0, 0.1), rng.uniform(0.1, 2.0)
            coupling = m3 * (m1 + m2)
            z = np.geomspace(inertia / coupling * 1e-12, inertia / coupling, 400)
            residual = m1 * m2 * (z ** 5 / (z + 3.0 * big_c) ** 2) ** (1.0 / 3.0) - (inertia - coupling * z)
            crossings = np.flatnonzero(np.diff(np.sign(residual)) != 0)
            self.assertEqual(len(crossings), 1)
            u, _ = solve_shape_fixed_inertia(m1, m2, m3, big_c, inertia)
            index = crossings[0]
            self.assertLessEqual(z[index], u * u * (1.0 + 1e-12))
            self.assertGreaterEqual(z[index + 1], u * u * (1.0 - 1e-12))


class ShapeRatioTests(SimpleTestCase):
    def test_short_side_decreases_with_oblateness(self):
        coefficients = np.concatenate([[0.0], np.geomspace(1e-15, 1.0, 60)])
        sides = [shape_ratio(big_c)[0] for big_c in coefficients]
        self.assertTrue(all(later < earlier for earlier, later in zip(sides, sides[1:])))

    def test_hektor_side_shift_in_km(self):
        params = normalize_system(HEKTOR)
        shift = SweepService.central_config(params)['r12_shift_km']
        self.assertLess(shift, 0.0)
        self.assertAlmostEqual(abs(shift), 2.59e-6, delta=0.01e-6)
