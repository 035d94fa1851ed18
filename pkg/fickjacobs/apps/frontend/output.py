"""
CSV output with a ``#`` metadata header.

Every file starts with ``# key: value`` lines, among them ``# config: <canonical JSON>``,
followed by a plain CSV table. Floats are written with 17 significant digits so that reruns
with the same config and seed give identical bytes.
"""
import csv
import io
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any, TextIO

HEADER_PREFIX = "# "


def format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    if hasattr(value, "dtype") and getattr(value, "ndim", 1) == 0:
        return format_value(value.item())
    return str(value)


def write_csv(
    stream: TextIO,
    columns: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    header: Mapping[str, Any] | None = None,
) -> None:
    for key, value in (header or {}).items():
        text = format_value(value).replace("\n", " ")
        stream.write(f"{HEADER_PREFIX}{key}: {text}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[column]) for column in columns])


def write_csv_file(path: str | Path, columns, rows, header=None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as stream:
        write_csv(stream, columns, rows, header)
    return path


def _split_header(lines: Iterable[str]) -> tuple[dict[str, str], list[str]]:
    header: dict[str, str] = {}
    body: list[str] = []
    for line in lines:
        if not body and line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            header[key.strip()] = value.strip()
        else:
            body.append(line)
    return header, body


def read_csv_header(path: str | Path) -> dict[str, str]:
    with Path(path).open() as stream:
        header, _ = _split_header(stream)
    return header


def read_csv(source: str | Path | TextIO) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Header and rows of a file written by ``write_csv``; accepts a path or an open stream."""
    if isinstance(source, (str, Path)):
        with Path(source).open() as stream:
            return read_csv(io.StringIO(stream.read()))
    header, body = _split_header(source)
    return header, list(csv.DictReader(body))
