import json

from rest_framework.exceptions import ValidationError

from fickjacobs.core.exceptions import (
    EXIT_CONFIG_ERROR,
    EXIT_NUMERICAL_FAILURE,
    EXIT_OK,
    EXIT_SOLVER_FAILURE,
    ChannelError,
    ErrorDict,
)
from fickjacobs.core.utils.transform_errors import transform_validation_errors

DEFAULT_ERROR_CODES = {
    EXIT_OK: "OK",
    EXIT_CONFIG_ERROR: "CONFIG_ERROR",
    EXIT_NUMERICAL_FAILURE: "NUMERICAL_FAILURE",
    EXIT_SOLVER_FAILURE: "SOLVER_FAILURE",
}

DEFAULT_ERROR_MESSAGES = {
    EXIT_OK: "Completed.",
    EXIT_CONFIG_ERROR: "Configuration error. The channel config or a command flag is invalid.",
    EXIT_NUMERICAL_FAILURE: "Numerical failure. The channel touches its focal set or quadrature did not converge.",
    EXIT_SOLVER_FAILURE: "Solver failure. The discrete transport system could not be solved.",
}


class ErrorReport:
    """
    Collects errors raised by a command and renders them for the terminal.

    Pass either a ``ChannelError``, a DRF ``ValidationError`` from config parsing, or a list
    of ready made error dicts.

    Example:
        >>> report = ErrorReport.from_exception(FocalContact(u=0.3))
        >>> report.exit_code
        3
    """

    def __init__(
        self,
        exit_code: int,
        message: str | None = None,
        details: str | None = None,
        errors: list[ErrorDict] | None = None,
    ) -> None:
        self.exit_code = exit_code
        self.message = message or DEFAULT_ERROR_MESSAGES.get(exit_code, "")
        self.errors = errors or [
            {
                "code": DEFAULT_ERROR_CODES.get(exit_code, ""),
                "message": self.message,
                "details": details or "",
            }
        ]

    @classmethod
    def from_exception(cls, exc: Exception) -> "ErrorReport":
        if isinstance(exc, ChannelError):
            return cls(exc.exit_code, message=exc.message, errors=[exc.as_error_dict()])
        if isinstance(exc, ValidationError):
            errors = transform_validation_errors(DEFAULT_ERROR_CODES[EXIT_CONFIG_ERROR], exc)
            return cls(EXIT_CONFIG_ERROR, errors=errors)
        return cls(EXIT_NUMERICAL_FAILURE, details=str(exc))

    def as_dict(self) -> dict:
        return {"success": False, "exit_code": self.exit_code, "error": self.errors}

    def render(self) -> str:
        lines = [f"error[{self.exit_code}] {DEFAULT_ERROR_CODES.get(self.exit_code, '')}: {self.message}"]
        for error in self.errors:
            lines.append(f"  {error['details'] or error['message']}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=4)
