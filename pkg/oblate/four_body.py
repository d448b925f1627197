"""
Spatial circular restricted four-body problem with an oblate tertiary.

Synodic frame centred at the barycentre, time rescaled so the configuration
rotates with unit angular velocity. A massless particle moves under

    x'' - 2 y' = Omega_x,  y'' + 2 x' = Omega_y,  z'' = Omega_z
    Omega = (x^2 + y^2)/2 + omega^-2 [sum m_i / r_i + (m3 / r3)(R3 / r3)^2 (C20 / 2)(3 z^2 / r3^2 - 1)]

with canonical momenta p_x = x' - y, p_y = y' + x, p_z = z'.
"""

import math

import numpy as np

from .central_config import TriangleConfig
from .core_types import SystemParams
from .exceptions import SingularityError
from .states import Frame, PhaseState, Representation


def _offsets(position, triangle: TriangleConfig):
    """Particle minus vertex for the three bodies, with their distances"""
    position = np.asarray(position, dtype=float)
    planar = np.column_stack([triangle.vertices, np.zeros(3)])
    deltas = position[None, :] - planar
    distances = np.sqrt(np.einsum('ij,ij->i', deltas, deltas))
    for body, distance in enumerate(distances, start=1):
        if distance == 0.0:
            raise SingularityError(f'position coincides with body {body}', body=body)
    return deltas, distances


def gravitational_potential_4bp(position, params: SystemParams, triangle: TriangleConfig) -> float:
    """Gravitational part of Omega, without the 1/omega^2 factor"""
    deltas, distances = _offsets(position, triangle)
    masses = np.asarray(triangle.masses)
    r3 = distances[2]
    sin_phi = deltas[2, 2] / r3
    oblate = params.m3 / r3 ** 3 * params.c_prime * (3.0 * sin_phi * sin_phi - 1.0)
    return float(np.sum(masses / distances)) + oblate


def gravitational_gradient_4bp(position, params: SystemParams, triangle: TriangleConfig) -> np.ndarray:
    deltas, distances = _offsets(position, triangle)
    masses = np.asarray(triangle.masses)
    gradient = -np.sum((masses / distances ** 3)[:, None] * deltas, axis=0)

    k = params.m3 * params.c_prime
    rel = deltas[2]
    r = distances[2]
    z = rel[2]
    gradient += k * (3.0 * rel / r ** 5 - 15.0 * z * z * rel / r ** 7)
    gradient[2] += k * 6.0 * z / r ** 5
    return gradient


def effective_potential_4bp(position, params: SystemParams, triangle: TriangleConfig) -> float:
    """
    Rotating-frame effective potential

    Args:
        position: Synodic 3-vector
        params: Normalized system constants
        triangle: Central configuration supplying the vertices

    Returns:
        Omega at the position

    Raises:
        SingularityError: If the position coincides with a vertex
    """
    x, y, _ = position
    return 0.5 * (x * x + y * y) + gravitational_potential_4bp(position, params, triangle) / params.omega_squared


def gradient_4bp(position, params: SystemParams, triangle: TriangleConfig) -> np.ndarray:
    x, y, _ = position
    return (np.array([x, y, 0.0])
            + gravitational_gradient_4bp(position, params, triangle) / params.omega_squared)


def vector_field_4bp(t, y, params: SystemParams, triangle: TriangleConfig) -> np.ndarray:
    g = gradient_4bp(y[:3], params, triangle)
    return np.array([y[3], y[4], y[5], 2.0 * y[4] + g[0], -2.0 * y[3] + g[1], g[2]])


def hamiltonian_vector_field_4bp(t, y, params: SystemParams, triangle: TriangleConfig) -> np.ndarray:
    """Hamilton's equations in canonical coordinates (x, y, z, p_x, p_y, p_z)"""
    x, yy, z, px, py, pz = y
    w = gravitational_gradient_4bp(y[:3], params, triangle) / params.omega_squared
    return np.array([px + yy, py - x, pz, py + w[0], -px + w[1], w[2]])


def eom_4bp(state: PhaseState, params: SystemParams, triangle: TriangleConfig) -> np.ndarray:
    """Velocity-form derivative (x', y', z', 2y' + Omega_x, -2x' + Omega_y, Omega_z)"""
    state.expect(Frame.SYNODIC_4BP, Representation.VELOCITY)
    return vector_field_4bp(0.0, state.vector, params, triangle)


def energy_4bp(state: PhaseState, params: SystemParams, triangle: TriangleConfig) -> float:
    """Conserved energy (|velocity|^2)/2 - Omega"""
    state.expect(Frame.SYNODIC_4BP, Representation.VELOCITY)
    return 0.5 * float(state.rate @ state.rate) - effective_potential_4bp(state.position, params, triangle)


def hamiltonian_4bp(state: PhaseState, params: SystemParams, triangle: TriangleConfig) -> float:
    state.expect(Frame.SYNODIC_4BP, Representation.CANONICAL)
    x, y, _ = state.position
    px, py, pz = state.rate
    return (0.5 * (px * px + py * py + pz * pz) + y * px - x * py
            - gravitational_potential_4bp(state.position, params, triangle) / params.omega_squared)


def to_canonical(state: PhaseState) -> PhaseState:
    """Velocity to canonical momenta: p_x = x' - y, p_y = y' + x, p_z = z'"""
    state.expect(Frame.SYNODIC_4BP, Representation.VELOCITY)
    x, y, _ = state.position
    vx, vy, vz = state.rate
    return PhaseState(Frame.SYNODIC_4BP, state.position, [vx - y, vy + x, vz], Representation.CANONICAL)


def to_velocity(state: PhaseState) -> PhaseState:
    state.expect(Frame.SYNODIC_4BP, Representation.CANONICAL)
    x, y, _ = state.position
    px, py, pz = state.rate
    return PhaseState(Frame.SYNODIC_4BP, state.position, [px + y, py - x, pz], Representation.VELOCITY)


def to_hill_shifted(state: PhaseState, params: SystemParams, triangle: TriangleConfig) -> PhaseState:
    """
    Move the origin to the tertiary and zoom by m3^(-1/3)

    Positions and the velocities (or momenta) scale by the same factor. For
    canonical momenta the shift adds (y3, -x3) so that p = x' - y still
    holds in the new coordinates; the constant energy offset of the shift
    is dropped.
    """
    state.expect(Frame.SYNODIC_4BP)
    x3, y3 = triangle.vertices[2]
    scale = params.m3 ** (-1.0 / 3.0)
    position = (state.position - np.array([x3, y3, 0.0])) * scale
    rate = np.array(state.rate, dtype=float)
    if state.representation == Representation.CANONICAL:
        rate += np.array([y3, -x3, 0.0])
    return PhaseState(Frame.HILL_SHIFTED, position, rate * scale, state.representation)


def from_hill_shifted(state: PhaseState, params: SystemParams, triangle: TriangleConfig) -> PhaseState:
    state.expect(Frame.HILL_SHIFTED)
    x3, y3 = triangle.vertices[2]
    scale = params.m3 ** (1.0 / 3.0)
    position = state.position * scale + np.array([x3, y3, 0.0])
    rate = state.rate * scale
    if state.representation == Representation.CANONICAL:
        rate -= np.array([y3, -x3, 0.0])
    return PhaseState(Frame.SYNODIC_4BP, position, rate, state.representation)


def min_body_distance(position, triangle: TriangleConfig) -> float:
    position = np.asarray(position, dtype=float)
    planar = np.column_stack([triangle.vertices, np.zeros(3)])
    return float(math.sqrt(np.min(np.sum((planar - position[None, :]) ** 2, axis=1))))
