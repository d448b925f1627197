"""
Trajectory propagation for the four-body and Hill models.

Integration uses scipy's DOP853 (an embedded 8(5,3) Runge-Kutta pair with
dense output and its own PI step-size controller and initial-step
heuristic). Every run records the model's conserved quantity at each
sample and stops before the particle comes within MIN_DISTANCE of a point
mass.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from django.db import models
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .central_config import TriangleConfig
from .core_types import SystemParams
from .equilibria import EquilibriumReport, linearization_matrix
from .exceptions import InvalidTolerance, SingularityApproach, StepUnderflow
from .four_body import (
    energy_4bp,
    hamiltonian_4bp,
    hamiltonian_vector_field_4bp,
    min_body_distance,
    vector_field_4bp,
)
from .hill_model import (
    effective_potential_hill_shifted,
    energy_hill,
    gradient_hill_shifted,
    hill_vector_field,
)
from .states import Frame, PhaseState, Representation

logger = logging.getLogger(__name__)

MIN_DISTANCE = 1e-9
MIN_TOLERANCE = 1e-14
MAX_TOLERANCE = 1e-3
METHOD = 'DOP853'


class Model(models.TextChoices):
    FOUR_BODY = '4bp', 'Restricted four-body problem'
    HILL = 'hill', 'Hill approximation'


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled solution with the conserved quantity at every sample"""

    model: Model
    frame: Frame
    representation: Representation
    times: np.ndarray
    states: List[PhaseState]
    energies: np.ndarray
    max_energy_drift: float

    @property
    def final_state(self) -> PhaseState:
        return self.states[-1]

    def rows(self) -> List[Dict[str, float]]:
        """Table rows t, x, y, z, then vx, vy, vz (or px, py, pz for canonical runs), H"""
        rate = 'p' if self.representation == Representation.CANONICAL else 'v'
        keys = ('x', 'y', 'z', f'{rate}x', f'{rate}y', f'{rate}z')
        rows = []
        for t, state, energy in zip(self.times, self.states, self.energies):
            rows.append({'t': t, **dict(zip(keys, state.vector)), 'H': energy})
        return rows


def _check_tolerance(name: str, value: float):
    if not MIN_TOLERANCE <= value <= MAX_TOLERANCE:
        raise InvalidTolerance(f'{name} must lie in [{MIN_TOLERANCE}, {MAX_TOLERANCE}], got {value}')


def _model_functions(
    initial: PhaseState, model: Model, params: SystemParams, triangle: Optional[TriangleConfig]
) -> Tuple[Callable, Callable, Callable]:
    """Vector field, conserved quantity and distance-to-singularity for a run"""
    if model == Model.FOUR_BODY:
        initial.expect(Frame.SYNODIC_4BP)
        if triangle is None:
            raise ValueError('the four-body model needs the central configuration')
        if initial.representation == Representation.CANONICAL:
            field_, conserved = hamiltonian_vector_field_4bp, hamiltonian_4bp
        else:
            field_, conserved = vector_field_4bp, energy_4bp

        def rhs(t, y):
            return field_(t, y, params, triangle)

        def energy(state):
            return conserved(state, params, triangle)

        def distance(y):
            return min_body_distance(y[:3], triangle)

        return rhs, energy, distance

    lambda1, lambda2, c = params.lambda1, params.lambda2, params.little_c
    if initial.frame == Frame.HILL_SHIFTED:
        initial.expect(Frame.HILL_SHIFTED, Representation.VELOCITY)
        mu, v = params.mu, params.v

        def rhs(t, y):
            g = gradient_hill_shifted(y[:3], mu, v, c)
            return np.array([y[3], y[4], y[5], 2.0 * y[4] + g[0], -2.0 * y[3] + g[1], g[2]])

        def energy(state):
            return 0.5 * float(state.rate @ state.rate) - effective_potential_hill_shifted(
                state.position, mu, v, c
            )
    else:
        initial.expect(Frame.HILL_ROTATED, Representation.VELOCITY)

        def rhs(t, y):
            return hill_vector_field(t, y, lambda1, lambda2, c)

        def energy(state):
            return energy_hill(state, lambda1, lambda2, c)

    def distance(y):
        return float(np.linalg.norm(y[:3]))

    return rhs, energy, distance


def integrate(
    initial: PhaseState,
    t_span: Tuple[float, float],
    rel_tol: float,
    abs_tol: float,
    model: Model,
    params: SystemParams,
    triangle: Optional[TriangleConfig] = None,
    t_eval: Optional[Sequence[float]] = None,
) -> Trajectory:
    """
    Propagate a state under the four-body or the Hill equations

    Args:
        initial: Starting state; its frame selects the equations
            (synodic-4bp for the four-body model, hill-shifted or
            hill-rotated for the Hill model)
        t_span: (t0, t1); t1 < t0 integrates backwards
        rel_tol, abs_tol: Integrator tolerances in [1e-14, 1e-3]
        model: Model.FOUR_BODY or Model.HILL
        params: Normalized system constants
        triangle: Central configuration, required for the four-body model
        t_eval: Sample times; the solver's own steps when omitted

    Returns:
        Trajectory whose times are monotone in the direction of integration

    Raises:
        InvalidTolerance: If a tolerance lies outside [1e-14, 1e-3]
        FrameMismatch: If the state's frame does not belong to the model
        SingularityApproach: If the particle comes within 1e-9 of a point mass
        StepUnderflow: If the step size falls below the solver's floor
    """
    _check_tolerance('rel_tol', rel_tol)
    _check_tolerance('abs_tol', abs_tol)
    model = Model(model)
    rhs, energy, distance = _model_functions(initial, model, params, triangle)

    y0 = initial.vector
    if distance(y0) <= MIN_DISTANCE:
        raise SingularityApproach(f'initial state lies within {MIN_DISTANCE} of a point mass')

    def approach(t, y):
        return distance(y) - MIN_DISTANCE

    approach.terminal = True
    approach.direction = -1

    t0, t1 = float(t_span[0]), float(t_span[1])
    sol = solve_ivp(
        rhs, (t0, t1), y0, method=METHOD, t_eval=t_eval, dense_output=True,
        events=approach, rtol=rel_tol, atol=abs_tol,
    )

    if sol.status == -1:
        logger.error(f"Integration failed at t={sol.t[-1] if sol.t.size else t0}: {sol.message}")
        raise StepUnderflow(f'{sol.message} (span [{t0}, {t1}])')
    if sol.status == 1:
        t_hit = float(sol.t_events[0][0])
        logger.error(f"Particle reached the {MIN_DISTANCE} guard at t={t_hit}")
        raise SingularityApproach(f'minimum body distance {MIN_DISTANCE} reached at t={t_hit}')

    states = [
        PhaseState.from_vector(initial.frame, column, initial.representation)
        for column in sol.y.T
    ]
    energies = np.array([energy(state) for state in states])
    h0 = energy(initial)
    max_drift = float(np.max(np.abs(energies - h0))) if energies.size else 0.0

    logger.info(
        f"Integrated {model} from t={t0} to t={t1}: {len(states)} samples, "
        f"{sol.nfev} evaluations, max energy drift {max_drift:.3e}"
    )
    return Trajectory(
        model=model,
        frame=initial.frame,
        representation=initial.representation,
        times=np.asarray(sol.t, dtype=float),
        states=states,
        energies=energies,
        max_energy_drift=max_drift,
    )


@dataclass(frozen=True, eq=False)
class MonodromyReport:
    """Nonlinear against linearized flow of a small displacement"""

    epsilon: float
    tau: float
    nonlinear: np.ndarray
    linear: np.ndarray
    deviation: float


def monodromy_step(
    equilibrium: EquilibriumReport,
    displacement: Sequence[float],
    tau: float,
    lambda1: float,
    lambda2: float,
    c: float,
    rel_tol: float = 1e-12,
) -> MonodromyReport:
    """
    Compare the flow of a displacement from a Hill equilibrium with exp(J tau)

    The nonlinear side integrates delta' = f(x* + delta) - f(x*), so the
    absolute tolerance can follow the size of the displacement.

    Args:
        equilibrium: Completed report (stability_spectrum already applied)
        displacement: 6-vector, norm at most about 1e-6
        tau: Flow time
        lambda1, lambda2, c: Rotated-frame constants

    Returns:
        MonodromyReport with the relative deviation |nonlinear - linear| / |linear|
    """
    delta0 = np.asarray(displacement, dtype=float).reshape(6)
    epsilon = float(np.linalg.norm(delta0))
    linear = expm(linearization_matrix(equilibrium.hessian) * tau) @ delta0
    if epsilon == 0.0:
        return MonodromyReport(epsilon=0.0, tau=tau, nonlinear=np.zeros(6), linear=linear, deviation=0.0)
    if epsilon > 1e-6:
        logger.warning(f"Displacement {epsilon:.3e} exceeds 1e-6; the deviation is no longer first order")

    base = np.concatenate([equilibrium.location, np.zeros(3)])
    f_base = hill_vector_field(0.0, base, lambda1, lambda2, c)

    def rhs(t, delta):
        return hill_vector_field(t, base + delta, lambda1, lambda2, c) - f_base

    sol = solve_ivp(rhs, (0.0, tau), delta0, method=METHOD, rtol=rel_tol, atol=epsilon * 1e-14)
    if sol.status == -1:
        raise StepUnderflow(sol.message)
    nonlinear = sol.y[:, -1]

    deviation = float(np.linalg.norm(nonlinear - linear) / np.linalg.norm(linear))
    logger.debug(f"Monodromy check: epsilon={epsilon:.3e}, tau={tau}, deviation={deviation:.3e}")
    return MonodromyReport(epsilon=epsilon, tau=tau, nonlinear=nonlinear, linear=linear, deviation=deviation)
