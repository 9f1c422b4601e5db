"""Exception types shared across the solver stack."""


class IbfeError(Exception):
    """Base class for all solver errors."""


class ConfigError(IbfeError):
    """Invalid or inconsistent run configuration."""


class SolverDiverged(IbfeError):
    """A linear solve failed to reach its residual target within the cap."""

    def __init__(self, what, iterations=None, residual=None):
        self.what = what
        self.iterations = iterations
        self.residual = residual
        msg = f"{what} did not converge"
        if iterations is not None:
            msg += f" after {iterations} iterations"
        if residual is not None:
            msg += f" (relative residual {residual:.3e})"
        super().__init__(msg)


class CflViolation(IbfeError):
    """Advective CFL number exceeded 1 for the requested step."""


class DegenerateElement(IbfeError):
    """Element parameter-to-reference map has non-positive Jacobian."""


class InvertedElement(IbfeError):
    """Deformation gradient determinant J <= 0 at a quadrature point."""


class PointOutOfDomain(IbfeError):
    """Kernel support of an interaction point leaves the grid."""


class NonPositiveError(IbfeError):
    """Rate fit requested for non-positive error values."""
