"""
Error hierarchy shared by every app.

Each error carries a machine readable ``code``, a human message, optional ``details`` and,
for failures raised while sweeping a grid, the arc length ``u`` at which it happened.
"""
from typing import Any

ErrorDict = dict[str, str]

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3
EXIT_SOLVER_FAILURE = 4


class ChannelError(Exception):
    code = "CHANNEL_ERROR"
    default_message = "The channel computation failed."
    exit_code = EXIT_NUMERICAL_FAILURE

    def __init__(self, message: str | None = None, details: Any = None, u: float | None = None) -> None:
        self.message = message or self.default_message
        self.details = details
        self.u = u
        super().__init__(self.message)

    def at(self, u: float) -> "ChannelError":
        """Attach the arc length at which the error occurred and return self."""
        if self.u is None:
            self.u = float(u)
        return self

    def as_error_dict(self) -> ErrorDict:
        details = "" if self.details is None else str(self.details)
        if self.u is not None:
            details = f"u={self.u:.17g}" + (f"; {details}" if details else "")
        return {"code": self.code, "message": self.message, "details": details}

    def __str__(self) -> str:
        if self.u is not None:
            return f"{self.message} (u={self.u:.17g})"
        return self.message


# Configuration and geometry setup
class ConfigError(ChannelError):
    code = "CONFIG_ERROR"
    default_message = "The channel configuration is invalid."
    exit_code = EXIT_CONFIG_ERROR


class InvalidParameter(ChannelError, ValueError):
    code = "INVALID_PARAMETER"
    default_message = "A geometric parameter is out of range."
    exit_code = EXIT_CONFIG_ERROR


class DegenerateCurve(ChannelError):
    code = "DEGENERATE_CURVE"
    default_message = "The curve has vanishing speed and cannot be reparametrized by arc length."
    exit_code = EXIT_CONFIG_ERROR


class UndefinedNormal(ChannelError):
    code = "UNDEFINED_NORMAL"
    default_message = "The curvature vanishes and no fallback normal was supplied."
    exit_code = EXIT_CONFIG_ERROR


class StepTooLarge(ChannelError):
    code = "STEP_TOO_LARGE"
    default_message = "The Brownian step length does not resolve the cross section."
    exit_code = EXIT_CONFIG_ERROR


# Numerical failures
class InfiniteFocalDistance(ChannelError):
    code = "INFINITE_FOCAL_DISTANCE"
    default_message = "The focal distance is infinite on a straight segment."


class QuadratureFailure(ChannelError):
    code = "QUADRATURE_FAILURE"
    default_message = "Adaptive quadrature did not reach the requested tolerance."


class FocalContact(ChannelError):
    code = "FOCAL_CONTACT"
    default_message = "The channel touches its focal set (max kappa*eta >= 1)."


class OutsideDomain(ChannelError):
    code = "OUTSIDE_DOMAIN"
    default_message = "The point does not project onto the curve domain."


class FocalAmbiguity(ChannelError):
    code = "FOCAL_AMBIGUITY"
    default_message = "The nearest point on the curve is ambiguous (point beyond the focal line)."


# Transport solver
class SolverFailure(ChannelError):
    code = "SOLVER_FAILURE"
    default_message = "The tridiagonal system is singular; check the boundary conditions."
    exit_code = EXIT_SOLVER_FAILURE
