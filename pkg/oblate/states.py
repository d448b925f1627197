"""
Phase-space states shared by the four-body and Hill models.

A state always declares the frame it lives in and whether its last three
components are velocities or canonical momenta. Operations check the tags
and refuse mismatched states instead of converting them silently.
"""

from dataclasses import dataclass, field

import numpy as np
from django.db import models

from .exceptions import FrameMismatch


class Frame(models.TextChoices):
    SYNODIC_4BP = 'synodic-4bp', 'Synodic four-body frame'
    HILL_SHIFTED = 'hill-shifted', 'Hill frame centred on the tertiary'
    HILL_ROTATED = 'hill-rotated', 'Hill frame rotated to the curvature axes'


class Representation(models.TextChoices):
    VELOCITY = 'velocity', 'Positions and velocities'
    CANONICAL = 'canonical-momentum', 'Positions and canonical momenta'


@dataclass(frozen=True, eq=False)
class PhaseState:
    """Position and velocity (or momentum) in a tagged frame"""

    frame: Frame
    position: np.ndarray
    rate: np.ndarray
    representation: Representation = Representation.VELOCITY
    _vector: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        position = np.asarray(self.position, dtype=float).reshape(3)
        rate = np.asarray(self.rate, dtype=float).reshape(3)
        object.__setattr__(self, 'position', position)
        object.__setattr__(self, 'rate', rate)
        object.__setattr__(self, '_vector', np.concatenate([position, rate]))

    @classmethod
    def from_vector(cls, frame, vector, representation=Representation.VELOCITY) -> 'PhaseState':
        vector = np.asarray(vector, dtype=float).reshape(6)
        return cls(frame, vector[:3], vector[3:], representation)

    @property
    def vector(self) -> np.ndarray:
        return self._vector.copy()

    def expect(self, frame: Frame, representation: Representation = None) -> 'PhaseState':
        """
        Check the state's tags before an operation consumes it

        Args:
            frame: Frame the operation works in
            representation: Required representation, or None to accept both

        Returns:
            The state itself

        Raises:
            FrameMismatch: If either tag differs
        """
        if self.frame != frame:
            raise FrameMismatch(f'expected a {frame} state, got {self.frame}')
        if representation is not None and self.representation != representation:
            raise FrameMismatch(
                f'expected {representation} components, got {self.representation}'
            )
        return self
