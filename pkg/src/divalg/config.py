"""Line-oriented run configuration: [sections] of key = value pairs.

Rational matrix literals are semicolon-separated rows of slash-fractions,
e.g. ``1 0 0 1/2; 0 1 0 1/2``; no float literals are accepted for lattice
data, so configs round-trip losslessly.  Parse errors carry line numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


@dataclass
class Section:
    kind: str
    name: str
    line: int
    values: dict[str, str] = field(default_factory=dict)
    lines: dict[str, int] = field(default_factory=dict)

    def get(self, key: str, default: str | None = None) -> str | None:
        return self.values.get(key, default)

    def require(self, key: str) -> str:
        if key not in self.values:
            raise ConfigError(f"[{self.kind} {self.name}] is missing key '{key}'", self.line)
        return self.values[key]

    def line_of(self, key: str) -> int:
        return self.lines.get(key, self.line)


@dataclass
class RunConfig:
    algebra: Section | None
    orders: list[Section]
    queries: list[Section]
    run: Section | None
    verify: Section | None

    def order_section(self, name: str) -> Section:
        for sec in self.orders:
            if sec.name == name:
                return sec
        raise ConfigError(f"no order named {name!r} is defined")


_KNOWN_KINDS = {"algebra", "order", "query", "run", "verify"}


def parse_config(text: str) -> RunConfig:
    sections: list[Section] = []
    current: Section | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError("unterminated section header", lineno)
            parts = line[1:-1].split()
            if not parts:
                raise ConfigError("empty section header", lineno)
            kind = parts[0]
            if kind not in _KNOWN_KINDS:
                raise ConfigError(f"unknown section kind {kind!r}", lineno)
            name = parts[1] if len(parts) > 1 else ""
            if kind in ("order", "query") and not name:
                raise ConfigError(f"[{kind}] sections must be named", lineno)
            current = Section(kind=kind, name=name, line=lineno)
            sections.append(current)
            continue
        if current is None:
            raise ConfigError("key outside any section", lineno)
        if "=" not in line:
            raise ConfigError("expected key = value", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", lineno)
        if key in current.values:
            raise ConfigError(f"duplicate key {key!r} in section", lineno)
        current.values[key] = value
        current.lines[key] = lineno

    algebra = [s for s in sections if s.kind == "algebra"]
    if len(algebra) > 1:
        raise ConfigError("multiple [algebra] sections", algebra[1].line)
    orders = [s for s in sections if s.kind == "order"]
    seen = set()
    for sec in orders:
        if sec.name in seen:
            raise ConfigError(f"duplicate order name {sec.name!r}", sec.line)
        seen.add(sec.name)
    return RunConfig(
        algebra=algebra[0] if algebra else None,
        orders=orders,
        queries=[s for s in sections if s.kind == "query"],
        run=next((s for s in sections if s.kind == "run"), None),
        verify=next((s for s in sections if s.kind == "verify"), None),
    )


def parse_fraction(text: str, line: int | None = None) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational literal {text!r}: {exc}", line) from exc


def parse_matrix(text: str, line: int | None = None) -> list[list[Fraction]]:
    rows = []
    for row_text in text.split(";"):
        entries = row_text.split()
        if not entries:
            raise ConfigError("empty matrix row", line)
        rows.append([parse_fraction(e, line) for e in entries])
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ConfigError("ragged matrix literal", line)
    return rows


def parse_int(text: str, line: int | None = None) -> int:
    try:
        return int(text.strip())
    except ValueError as exc:
        raise ConfigError(f"bad integer literal {text!r}", line) from exc


def parse_int_list(text: str, line: int | None = None) -> list[int]:
    return [parse_int(tok, line) for tok in text.split()]


def parse_float(text: str, line: int | None = None) -> float:
    try:
        return float(text.strip())
    except ValueError as exc:
        raise ConfigError(f"bad numeric literal {text!r}", line) from exc
