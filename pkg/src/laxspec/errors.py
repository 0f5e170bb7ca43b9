"""Exception hierarchy."""


class LaxSpecError(Exception):
    """Base class for all errors raised by laxspec."""


class KindMismatchError(LaxSpecError, ValueError):
    """Two coefficient sets (or a set and an equation) have incompatible symmetry classes."""


class AliasingError(LaxSpecError, ValueError):
    """Grid too coarse (or not a power of two) for the requested transform."""


class NonConvergenceError(LaxSpecError, ArithmeticError):
    """The QL iteration hit its sweep cap."""

    def __init__(self, size, residual):
        self.size = size
        self.residual = residual
        super().__init__(
            f"QL iteration did not converge for a {size}x{size} matrix "
            f"(off-diagonal residual {residual:.3e})"
        )


class MassGateError(LaxSpecError, ValueError):
    """Focusing CS data at or above the critical mass ``||u0||_{L^2} = 1``."""


class DivergenceError(LaxSpecError, ArithmeticError):
    """An explicit time stepper blew up."""

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"solution diverged at step {step}")


class ConfigError(LaxSpecError, ValueError):
    """Invalid run configuration."""
