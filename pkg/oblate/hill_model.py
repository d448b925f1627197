"""
Hill approximation of the four-body problem with an oblate tertiary.

Two frames are used. The shifted frame is centred on the tertiary with the
synodic orientation; its quadratic part couples x and y through the
curvature matrix M. The rotated frame turns the (x, y) plane onto the
eigenvectors of M, where the effective potential reads

    Omega = (lambda2 x^2 + lambda1 y^2 - z^2) / 2 + 1/r - c/r^3 + 3 c z^2 / r^5

The angular velocity of the configuration does not enter here: every
function takes only (mu, v, c) or (lambda1, lambda2, c).
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .exceptions import DegenerateEigenpair, SingularityError
from .states import Frame, PhaseState, Representation

# Planar symplectic unit paired with a rotation acting on (x, y) and (p_x, p_y).
PLANAR_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def rotation_eigenvalues(mu: float, v: float) -> Tuple[float, float, float]:
    """
    Eigenvalues of the curvature matrix M

    Roots of lambda^2 - 3 lambda + (9/4) v^2 (4 - v^2)(mu - mu^2) = 0.

    Args:
        mu: Mass ratio m2 / (m1 + m2), in [0, 1/2]
        v: Short side of the central configuration, in (0, 1]

    Returns:
        (lambda1, lambda2, d) with lambda1 <= lambda2 and d the discriminant root
    """
    upsilon = v * v * (4.0 - v * v) * (mu - mu * mu)
    d = math.sqrt(1.0 - upsilon)
    lambda2 = 1.5 * (1.0 + d)
    # lambda1 = 1.5 (1 - d) loses digits for small mu; use the product of the roots.
    lambda1 = 2.25 * upsilon / lambda2
    return lambda1, lambda2, d


def curvature_matrix(mu: float, v: float) -> np.ndarray:
    off = 3.0 * v * math.sqrt(4.0 - v * v) * (1.0 - 2.0 * mu) / 4.0
    return np.array([
        [3.0 * v * v / 4.0, off],
        [off, 3.0 * (4.0 - v * v) / 4.0],
    ])


@dataclass(frozen=True, eq=False)
class RotationFrame:
    """Proper rotation taking the shifted frame onto the curvature axes"""

    mu: float
    v: float
    lambda1: float
    lambda2: float
    d: float
    v1: np.ndarray
    v2: np.ndarray
    delta1: float
    delta2: float

    @property
    def matrix(self) -> np.ndarray:
        """Columns (v2, v1): the first rotated axis carries lambda2"""
        return np.column_stack([self.v2, self.v1])

    def rotate(self, vector: np.ndarray) -> np.ndarray:
        """Shifted-frame 3-vector to rotated-frame components"""
        out = np.array(vector, dtype=float)
        out[:2] = self.matrix.T @ out[:2]
        return out

    def unrotate(self, vector: np.ndarray) -> np.ndarray:
        out = np.array(vector, dtype=float)
        out[:2] = self.matrix @ out[:2]
        return out

    def to_rotated_frame(self, state: PhaseState) -> PhaseState:
        state.expect(Frame.HILL_SHIFTED)
        return PhaseState(
            Frame.HILL_ROTATED, self.rotate(state.position), self.rotate(state.rate),
            state.representation,
        )

    def to_shifted_frame(self, state: PhaseState) -> PhaseState:
        state.expect(Frame.HILL_ROTATED)
        return PhaseState(
            Frame.HILL_SHIFTED, self.unrotate(state.position), self.unrotate(state.rate),
            state.representation,
        )


def build_rotation(mu: float, v: float) -> RotationFrame:
    """
    Diagonalize M with a proper rotation

    Eigenvectors are (M22 - lambda_k, -M12) / Delta_k, oriented so that
    v12 v21 - v11 v22 = +1. At mu = 1/2 M is already diagonal and the
    axis-aligned quarter turn is returned, which keeps lambda2 on the first
    rotated axis.

    Raises:
        DegenerateEigenpair: If lambda1 == lambda2
    """
    lambda1, lambda2, d = rotation_eigenvalues(mu, v)
    if lambda2 <= lambda1:
        raise DegenerateEigenpair(f'lambda1 = lambda2 = {lambda1} at mu={mu}, v={v}')

    m = curvature_matrix(mu, v)
    m12, m22 = m[0, 1], m[1, 1]

    if m12 == 0.0:
        v1 = np.array([-1.0, 0.0])
        v2 = np.array([0.0, 1.0])
        return RotationFrame(mu, v, lambda1, lambda2, d, v1, v2, 1.0, 1.0)

    raw1 = np.array([m22 - lambda1, -m12])
    raw2 = np.array([m22 - lambda2, -m12])
    delta1 = math.hypot(*raw1)
    delta2 = math.hypot(*raw2)
    v1 = raw1 / delta1
    v2 = raw2 / delta2

    if v1[1] * v2[0] - v1[0] * v2[1] < 0.0:
        v1 = -v1

    return RotationFrame(mu, v, lambda1, lambda2, d, v1, v2, delta1, delta2)


def _radius(position) -> float:
    r = math.sqrt(position[0] ** 2 + position[1] ** 2 + position[2] ** 2)
    if r == 0.0:
        raise SingularityError('Hill potential evaluated at the tertiary')
    return r


def _tertiary_potential(position, c: float) -> float:
    r = _radius(position)
    z = position[2]
    return 1.0 / r - c / r ** 3 + 3.0 * c * z * z / r ** 5


def _tertiary_gradient(position, c: float) -> np.ndarray:
    x, y, z = position
    r = _radius(position)
    r3, r5, r7 = r ** 3, r ** 5, r ** 7
    radial = -1.0 / r3 + 3.0 * c / r5 - 15.0 * c * z * z / r7
    return np.array([
        x * radial,
        y * radial,
        z * (-1.0 / r3 + 9.0 * c / r5) - 15.0 * c * z ** 3 / r7,
    ])


def _tertiary_hessian(position, c: float) -> np.ndarray:
    x, y, z = position
    r = _radius(position)
    r3, r5, r7, r9 = r ** 3, r ** 5, r ** 7, r ** 9
    z2 = z * z

    def diagonal(s):
        return (-1.0 / r3 + 3.0 * s * s / r5 + 3.0 * c / r5 - 15.0 * c * s * s / r7
                - 15.0 * c * z2 / r7 + 105.0 * c * z2 * s * s / r9)

    def toward_z(s):
        return 3.0 * s * z / r5 - 45.0 * c * s * z / r7 + 105.0 * c * z ** 3 * s / r9

    uxy = 3.0 * x * y / r5 - 15.0 * c * x * y / r7 + 105.0 * c * z2 * x * y / r9
    uzz = -1.0 / r3 + 3.0 * z2 / r5 + 9.0 * c / r5 - 90.0 * c * z2 / r7 + 105.0 * c * z2 * z2 / r9
    uxz, uyz = toward_z(x), toward_z(y)
    return np.array([
        [diagonal(x), uxy, uxz],
        [uxy, diagonal(y), uyz],
        [uxz, uyz, uzz],
    ])


# Rotated frame

def effective_potential_hill(position, lambda1: float, lambda2: float, c: float) -> float:
    x, y, z = position
    return 0.5 * (lambda2 * x * x + lambda1 * y * y - z * z) + _tertiary_potential(position, c)


def gradient_hill(position, lambda1: float, lambda2: float, c: float) -> np.ndarray:
    x, y, z = position
    return np.array([lambda2 * x, lambda1 * y, -z]) + _tertiary_gradient(position, c)


def hessian_hill(position, lambda1: float, lambda2: float, c: float) -> np.ndarray:
    return np.diag([lambda2, lambda1, -1.0]) + _tertiary_hessian(position, c)


def gradient_scale_hill(position, lambda1: float, lambda2: float, c: float) -> float:
    """Largest magnitude among the individual terms of the gradient components"""
    x, y, z = (abs(s) for s in position)
    r = _radius(position)
    r3, r5, r7 = r ** 3, r ** 5, r ** 7
    central = 1.0 / r3 + 3.0 * abs(c) / r5 + 15.0 * abs(c) * z * z / r7
    return max(
        lambda2 * x + x * central,
        lambda1 * y + y * central,
        z + z * (1.0 / r3 + 9.0 * abs(c) / r5) + 15.0 * abs(c) * z ** 3 / r7,
    )


def hill_vector_field(t, y, lambda1: float, lambda2: float, c: float) -> np.ndarray:
    g = gradient_hill(y[:3], lambda1, lambda2, c)
    return np.array([y[3], y[4], y[5], 2.0 * y[4] + g[0], -2.0 * y[3] + g[1], g[2]])


def eom_hill(state: PhaseState, lambda1: float, lambda2: float, c: float) -> np.ndarray:
    """Velocity-form equations of motion in the rotated frame"""
    state.expect(Frame.HILL_ROTATED, Representation.VELOCITY)
    return hill_vector_field(0.0, state.vector, lambda1, lambda2, c)


def energy_hill(state: PhaseState, lambda1: float, lambda2: float, c: float) -> float:
    """Jacobi-like integral (|velocity|^2)/2 - Omega in the rotated frame"""
    state.expect(Frame.HILL_ROTATED, Representation.VELOCITY)
    return 0.5 * float(state.rate @ state.rate) - effective_potential_hill(
        state.position, lambda1, lambda2, c
    )


def hill_hamiltonian_rotated(state: PhaseState, lambda1: float, lambda2: float, c: float) -> float:
    state.expect(Frame.HILL_ROTATED, Representation.CANONICAL)
    x, y, z = state.position
    px, py, pz = state.rate
    return (0.5 * (px * px + py * py + pz * pz) + y * px - x * py
            + 0.5 * (1.0 - lambda2) * x * x + 0.5 * (1.0 - lambda1) * y * y + 0.5 * z * z
            - _tertiary_potential(state.position, c))


def mirror_state(state: PhaseState) -> PhaseState:
    """
    Reflection (x, y, z, vx, vy, vz) -> (x, -y, z, -vx, vy, -vz)

    Combined with t -> -t it maps solutions of the rotated equations onto
    solutions.
    """
    state.expect(Frame.HILL_ROTATED, Representation.VELOCITY)
    x, y, z = state.position
    vx, vy, vz = state.rate
    return PhaseState(Frame.HILL_ROTATED, [x, -y, z], [-vx, vy, -vz])


# Shifted frame

def effective_potential_hill_shifted(position, mu: float, v: float, c: float) -> float:
    w = np.asarray(position[:2], dtype=float)
    m = curvature_matrix(mu, v)
    return 0.5 * float(w @ m @ w) - 0.5 * position[2] ** 2 + _tertiary_potential(position, c)


def gradient_hill_shifted(position, mu: float, v: float, c: float) -> np.ndarray:
    m = curvature_matrix(mu, v)
    quadratic = np.append(m @ np.asarray(position[:2], dtype=float), -position[2])
    return quadratic + _tertiary_gradient(position, c)


def eom_hill_shifted(state: PhaseState, mu: float, v: float, c: float) -> np.ndarray:
    """Velocity-form equations of motion in the shifted frame"""
    state.expect(Frame.HILL_SHIFTED, Representation.VELOCITY)
    y = state.vector
    g = gradient_hill_shifted(y[:3], mu, v, c)
    return np.array([y[3], y[4], y[5], 2.0 * y[4] + g[0], -2.0 * y[3] + g[1], g[2]])


def hill_hamiltonian_shifted(state: PhaseState, mu: float, v: float, c: float) -> float:
    """
    Hill Hamiltonian with oblate tertiary in the shifted frame

    Args:
        state: hill-shifted state with canonical momenta
        mu: Mass ratio of the two large primaries
        v: Short side of the central configuration
        c: Rescaled oblateness coefficient (<= 0)

    Returns:
        Value of the Hamiltonian
    """
    state.expect(Frame.HILL_SHIFTED, Representation.CANONICAL)
    x, y, z = state.position
    px, py, pz = state.rate
    v2 = v * v
    coupling = 3.0 * v * math.sqrt(4.0 - v2) * (1.0 - 2.0 * mu) / 4.0
    return (0.5 * (px * px + py * py + pz * pz) + y * px - x * py
            + (4.0 - 3.0 * v2) / 8.0 * x * x + (3.0 * v2 - 8.0) / 8.0 * y * y + 0.5 * z * z
            - coupling * x * y
            - _tertiary_potential(state.position, c))
