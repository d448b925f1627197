import numpy as np
from django.test import SimpleTestCase

from oblate.central_config import central_configuration
from oblate.core_types import SystemParams
from oblate.exceptions import FrameMismatch, SingularityError
from oblate.four_body import to_hill_shifted, vector_field_4bp
from oblate.hill_model import (
    PLANAR_J,
    build_rotation,
    curvature_matrix,
    effective_potential_hill,
    eom_hill,
    eom_hill_shifted,
    gradient_hill,
    hessian_hill,
    hill_hamiltonian_rotated,
    hill_hamiltonian_shifted,
    mirror_state,
    rotation_eigenvalues,
)
from oblate.states import Frame, PhaseState, Representation


def _random_point(rng, low=0.5, high=3.0):
    direction = rng.normal(size=3)
    return direction / np.linalg.norm(direction) * rng.uniform(low, high)


class RotationTests(SimpleTestCase):
    def test_diagonalizes_curvature(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            mu, v = rng.uniform(1e-4, 0.5), rng.uniform(0.8, 1.0)
            frame = build_rotation(mu, v)
            r = frame.matrix
            diagonal = r.T @ curvature_matrix(mu, v) @ r
            self.assertTrue(np.allclose(diagonal, np.diag([frame.lambda2, frame.lambda1]), atol=1e-12))
            self.assertAlmostEqual(np.linalg.det(r), 1.0, delta=1e-12)

    def test_rotation_is_symplectic(self):
        rng = np.random.default_rng(29)
        symplectic_unit = np.kron(PLANAR_J, np.eye(2))
        for _ in range(100):
            frame = build_rotation(rng.uniform(1e-4, 0.5), rng.uniform(0.8, 1.0))
            r = frame.matrix
            self.assertLess(np.linalg.norm(r.T @ PLANAR_J @ r - PLANAR_J), 1e-13)
            lifted = np.kron(np.eye(2), r)
            self.assertLess(np.linalg.norm(lifted.T @ symplectic_unit @ lifted - symplectic_unit), 1e-13)
            orientation = frame.v1[1] * frame.v2[0] - frame.v1[0] * frame.v2[1]
            self.assertAlmostEqual(orientation, 1.0, delta=1e-14)

    def test_equal_primaries(self):
        frame = build_rotation(0.5, 1.0)
        self.assertTrue(np.array_equal(frame.matrix, [[0.0, -1.0], [1.0, 0.0]]))
        diagonal = frame.matrix.T @ curvature_matrix(0.5, 1.0) @ frame.matrix
        self.assertTrue(np.allclose(diagonal, np.diag([2.25, 0.75]), atol=1e-15))

    def test_eigenvalues_sum_to_trace(self):
        for mu in (1e-6, 0.01, 0.3, 0.5):
            lambda1, lambda2, _ = rotation_eigenvalues(mu, 1.0)
            self.assertAlmostEqual(lambda1 + lambda2, 3.0, delta=2e-15)
            self.assertLessEqual(lambda1, lambda2)


class DerivativeTests(SimpleTestCase):
    def test_gradient_and_hessian_match_finite_differences(self):
        rng = np.random.default_rng(5)
        h = 1e-5
        for _ in range(100):
            lambda1, _, _ = rotation_eigenvalues(rng.uniform(1e-4, 0.5), 1.0)
            lambda2 = 3.0 - lambda1
            c = -rng.uniform(0.0, 0.05)
            point = _random_point(rng)
            gradient = gradient_hill(point, lambda1, lambda2, c)
            hessian = hessian_hill(point, lambda1, lambda2, c)
            numeric_gradient = np.zeros(3)
            numeric_hessian = np.zeros((3, 3))
            for k in range(3):
                step = np.zeros(3)
                step[k] = h
                numeric_gradient[k] = (effective_potential_hill(point + step, lambda1, lambda2, c)
                                       - effective_potential_hill(point - step, lambda1, lambda2, c)) / (2 * h)
                numeric_hessian[:, k] = (gradient_hill(point + step, lambda1, lambda2, c)
                                         - gradient_hill(point - step, lambda1, lambda2, c)) / (2 * h)
            self.assertLess(np.max(np.abs(numeric_gradient - gradient)) / max(1.0, np.max(np.abs(gradient))), 1e-7)
            self.assertLess(np.max(np.abs(numeric_hessian - hessian)) / max(1.0, np.max(np.abs(hessian))), 1e-7)

    def test_origin_is_singular(self):
        with self.assertRaises(SingularityError):
            gradient_hill([0.0, 0.0, 0.0], 0.1, 2.9, -1e-3)


class FrameEquivalenceTests(SimpleTestCase):
    def test_shifted_and_rotated_hamiltonians_agree(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            mu, v = rng.uniform(1e-4, 0.5), rng.uniform(0.9, 1.0)
            c = -rng.uniform(0.0, 0.01)
            frame = build_rotation(mu, v)
            shifted = PhaseState(
                Frame.HILL_SHIFTED, _random_point(rng), rng.normal(size=3), Representation.CANONICAL
            )
            rotated = frame.to_rotated_frame(shifted)
            h_shifted = hill_hamiltonian_shifted(shifted, mu, v, c)
            h_rotated = hill_hamiltonian_rotated(rotated, frame.lambda1, frame.lambda2, c)
            self.assertLess(abs(h_shifted - h_rotated), 1e-13 * max(1.0, abs(h_shifted)))

    def test_round_trip(self):
        frame = build_rotation(0.2, 0.95)
        state = PhaseState(Frame.HILL_SHIFTED, [0.3, -0.4, 0.1], [0.5, 0.2, -0.1])
        back = frame.to_shifted_frame(frame.to_rotated_frame(state))
        self.assertTrue(np.allclose(back.vector, state.vector, atol=1e-15))

    def test_frame_tags_are_checked(self):
        frame = build_rotation(0.2, 0.95)
        rotated = PhaseState(Frame.HILL_ROTATED, [0.3, 0.0, 0.0], [0.0, 0.0, 0.0])
        with self.assertRaises(FrameMismatch):
            frame.to_rotated_frame(rotated)
        with self.assertRaises(FrameMismatch):
            hill_hamiltonian_rotated(rotated, 0.1, 2.9, 0.0)


class EquationsOfMotionTests(SimpleTestCase):
    def test_shifted_and_rotated_fields_agree(self):
        mu, v, c = 0.1, 0.98, -2e-3
        frame = build_rotation(mu, v)
        shifted = PhaseState(Frame.HILL_SHIFTED, [0.4, 0.2, -0.3], [0.1, -0.5, 0.2])
        rotated = frame.to_rotated_frame(shifted)
        derivative = eom_hill_shifted(shifted, mu, v, c)
        expected = np.concatenate([
            frame.rotate(derivative[:3]), frame.rotate(derivative[3:])
        ])
        self.assertTrue(np.allclose(eom_hill(rotated, frame.lambda1, frame.lambda2, c), expected, atol=1e-12))

    def test_mirror_is_an_involution(self):
        state = PhaseState(Frame.HILL_ROTATED, [0.3, 0.2, 0.1], [0.4, -0.5, 0.6])
        mirrored = mirror_state(state)
        self.assertTrue(np.array_equal(mirrored.vector, [0.3, -0.2, 0.1, -0.4, -0.5, -0.6]))
        self.assertTrue(np.array_equal(mirror_state(mirrored).vector, state.vector))

    def test_scaled_four_body_field_approaches_hill(self):
        params = SystemParams.from_normalized(mu=0.1, m3=1e-9, r3=3e-4, c20=-0.3)
        triangle = central_configuration(params)
        x3, y3 = triangle.vertices[2]
        scale = params.m3 ** (1.0 / 3.0)
        hill_state = PhaseState(Frame.HILL_SHIFTED, [0.8, 0.5, 0.3], [0.1, -0.2, 0.05])

        synodic = np.concatenate([
            np.array([x3, y3, 0.0]) + scale * hill_state.position, scale * hill_state.rate
        ])
        four_body = vector_field_4bp(0.0, synodic, params, triangle)[3:] / scale
        hill = eom_hill_shifted(hill_state, params.mu, params.v, params.little_c)[3:]
        self.assertLess(np.linalg.norm(four_body - hill) / np.linalg.norm(hill), 1e-2)

    def test_shift_inverts_position_map(self):
        params = SystemParams.from_normalized(mu=0.1, m3=1e-9, r3=3e-4, c20=-0.3)
        triangle = central_configuration(params)
        x3, y3 = triangle.vertices[2]
        synodic = PhaseState(Frame.SYNODIC_4BP, [x3 + 1e-3, y3, 2e-3], [0.0, 1e-3, 0.0])
        shifted = to_hill_shifted(synodic, params, triangle)
        self.assertAlmostEqual(shifted.position[0], 1e-3 / params.m3 ** (1.0 / 3.0), delta=1e-9)
        self.assertEqual(shifted.frame, Frame.HILL_SHIFTED)
