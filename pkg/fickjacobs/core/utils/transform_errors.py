from rest_framework.exceptions import ErrorDetail, ValidationError

from fickjacobs.core.exceptions import ErrorDict


def flatten_error_paths(details, prefix: str = "") -> list[tuple[str, str, str]]:
    """
    Walk nested serializer errors and return ``(path, code, message)`` triples.

    Dict keys become dotted path segments, list positions become ``[i]``.
    """
    flattened: list[tuple[str, str, str]] = []
    if isinstance(details, dict):
        for key, value in details.items():
            path = f"{prefix}.{key}" if prefix else str(key)
            flattened.extend(flatten_error_paths(value, path))
    elif isinstance(details, list):
        for index, value in enumerate(details):
            if isinstance(value, ErrorDetail):
                flattened.append((prefix or "config", value.code or "invalid", str(value)))
            elif value:
                flattened.extend(flatten_error_paths(value, f"{prefix}[{index}]"))
    elif isinstance(details, ErrorDetail):
        flattened.append((prefix or "config", details.code or "invalid", str(details)))
    elif details:
        flattened.append((prefix or "config", "invalid", str(details)))
    return flattened


def transform_validation_errors(default_code: str, details) -> list[ErrorDict]:
    if isinstance(details, ValidationError):
        details = details.detail
    return [
        {
            "code": default_code,
            "message": f"{path}: {code}",
            "details": f"{path}: {message}",
        }
        for path, code, message in flatten_error_paths(details)
    ]
