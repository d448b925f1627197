"""
Errors raised by the oblate app.

Every error carries a stable ``code`` (used in messages and tests) and the
process exit code the ``hill4body`` command maps it to: 2 for bad input,
3 for numerical failures.
"""

CONFIG_EXIT_CODE = 2
NUMERICAL_EXIT_CODE = 3


class HillFourBodyError(Exception):
    """Base class for all errors of the oblate app"""

    code = 'hill4body-error'
    exit_code = NUMERICAL_EXIT_CODE

    def __init__(self, message: str = ''):
        self.message = message or self.code
        super().__init__(self.message)

    def __str__(self):
        return f'{self.code}: {self.message}'


# Input errors

class ConfigError(HillFourBodyError):
    code = 'config-error'
    exit_code = CONFIG_EXIT_CODE


class InvalidPhysicalInput(HillFourBodyError):
    code = 'invalid-physical-input'
    exit_code = CONFIG_EXIT_CODE


class ProlateUnsupported(InvalidPhysicalInput):
    code = 'prolate-unsupported'


class InvalidShape(HillFourBodyError):
    code = 'invalid-shape'
    exit_code = CONFIG_EXIT_CODE


class InvalidDegree(HillFourBodyError):
    code = 'invalid-degree'
    exit_code = CONFIG_EXIT_CODE


class InvalidTolerance(HillFourBodyError):
    code = 'invalid-tolerance'
    exit_code = CONFIG_EXIT_CODE


# Numerical errors

class SingularityError(HillFourBodyError):
    """Potential evaluated at a point mass"""

    code = 'singular-origin'

    def __init__(self, message: str = '', body: int = None):
        self.body = body
        if body is not None:
            self.code = f'singular-at-body {body}'
        super().__init__(message)


class NoBracket(HillFourBodyError):
    code = 'no-bracket'


class DegenerateK(HillFourBodyError):
    code = 'degenerate-K'


class DegenerateEigenpair(HillFourBodyError):
    code = 'degenerate-eigenpair'


class NoZEquilibrium(HillFourBodyError):
    code = 'no-z-equilibrium'


class NotAnEquilibrium(HillFourBodyError):
    code = 'not-an-equilibrium'


class FrameMismatch(HillFourBodyError):
    code = 'frame-mismatch'
    exit_code = CONFIG_EXIT_CODE


class SingularityApproach(HillFourBodyError):
    code = 'singularity-approach'


class StepUnderflow(HillFourBodyError):
    code = 'step-underflow'
