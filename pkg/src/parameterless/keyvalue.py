"""``key = value`` parameter-file syntax shared by run and engine files."""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import ConfigurationError


def parse_lines(text: str, source: str = "<string>") -> Iterator[tuple[int, str, str]]:
    """Yield ``(line number, key, raw value)``; ``#`` starts a comment."""
    seen = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        if key in seen:
            raise ConfigurationError(
                f"{source}:{lineno}: duplicate key {key!r} (first set on line {seen[key]})"
            )
        seen[key] = lineno
        yield lineno, key, value


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_lines(items: Iterable[tuple[str, object]]) -> str:
    return "".join(f"{key} = {format_value(value)}\n" for key, value in items if value is not None)
